// Copyright 2026 The Algodiv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "algodiv/lang/ast.h"

#include "algodiv/lang/ast_json.h"

namespace algodiv::lang {

const char* BinOpSymbol(BinOp op) {
  switch (op) {
    case BinOp::kAdd: return "+";
    case BinOp::kSub: return "-";
    case BinOp::kMul: return "*";
    case BinOp::kDiv: return "/";
    case BinOp::kMod: return "%";
    case BinOp::kIndex: return "[]";
    case BinOp::kEq: return "==";
    case BinOp::kNe: return "!=";
    case BinOp::kLt: return "<";
    case BinOp::kLe: return "<=";
    case BinOp::kGt: return ">";
    case BinOp::kGe: return ">=";
    case BinOp::kIn: return "in";
    case BinOp::kNotIn: return "not in";
    case BinOp::kAnd: return "and";
    case BinOp::kOr: return "or";
  }
  return "?";
}

bool AstEqual(const Ast& a, const Ast& b) {
  return AstToJson(a) == AstToJson(b);
}

Expr MakeLiteral(Value v, Pos pos) {
  return Expr{expr::Literal{std::move(v)}, pos};
}

Expr MakeName(std::string name, Pos pos) {
  return Expr{expr::Name{std::move(name)}, pos};
}

Stmt MakePass(Pos pos) { return Stmt{stmt::Pass{}, pos}; }

}  // namespace algodiv::lang
