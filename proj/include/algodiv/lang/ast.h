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

#ifndef ALGODIV_LANG_AST_H_
#define ALGODIV_LANG_AST_H_

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "algodiv/core/value.h"

namespace algodiv::lang {

// Owning pointer with deep-copy semantics, so AST nodes are regular values.
template <typename T>
class Box {
 public:
  Box() = default;
  Box(T value) : ptr_(std::make_unique<T>(std::move(value))) {}  // NOLINT
  Box(const Box& other)
      : ptr_(other.ptr_ ? std::make_unique<T>(*other.ptr_) : nullptr) {}
  Box(Box&&) noexcept = default;
  Box& operator=(const Box& other) {
    if (this != &other) {
      ptr_ = other.ptr_ ? std::make_unique<T>(*other.ptr_) : nullptr;
    }
    return *this;
  }
  Box& operator=(Box&&) noexcept = default;

  T& operator*() { return *ptr_; }
  const T& operator*() const { return *ptr_; }
  T* operator->() { return ptr_.get(); }
  const T* operator->() const { return ptr_.get(); }
  explicit operator bool() const { return ptr_ != nullptr; }

 private:
  std::unique_ptr<T> ptr_;
};

struct Pos {
  int line = 0;
  int col = 0;
};

enum class BinOp {
  kAdd, kSub, kMul, kDiv, kMod, kIndex,
  kEq, kNe, kLt, kLe, kGt, kGe, kIn, kNotIn,
  kAnd, kOr,
};
const char* BinOpSymbol(BinOp op);

struct Expr;
struct Pattern;

namespace expr {
struct Literal { Value value; };
struct Name { std::string name; };
struct Self {};                              // `self`
struct Field { std::string name; };         // `self.name`
struct Received {};                          // `received`
struct TupleLit { std::vector<Expr> elems; };
struct SeqLit { std::vector<Expr> elems; };
struct SetLit { std::vector<Expr> elems; };
struct Binary { BinOp op; Box<Expr> lhs; Box<Expr> rhs; };
struct Not { Box<Expr> operand; };
struct Neg { Box<Expr> operand; };
struct Call { std::string callee; std::vector<Expr> args; };
struct New { std::string type; Box<Expr> count; };  // count empty: one pid.
enum class QuantKind { kSome, kEach };
struct Quant {
  QuantKind kind;
  Box<Pattern> pattern;
  Box<Expr> domain;
  Box<Expr> cond;  // Empty means true.
};
}  // namespace expr

struct Expr {
  using Node = std::variant<expr::Literal, expr::Name, expr::Self, expr::Field,
                            expr::Received, expr::TupleLit, expr::SeqLit,
                            expr::SetLit, expr::Binary, expr::Not, expr::Neg,
                            expr::Call, expr::New, expr::Quant>;
  Node node;
  Pos pos;
};

namespace pattern {
struct Literal { Value value; };
struct Bind { std::string name; };
struct Eq { Box<Expr> expr; };  // `=x` or `=self.f`
struct Wildcard {};
struct Tuple { std::vector<Pattern> elems; };
}  // namespace pattern

struct Pattern {
  using Node = std::variant<pattern::Literal, pattern::Bind, pattern::Eq,
                            pattern::Wildcard, pattern::Tuple>;
  Node node;
  Pos pos;
};

struct Stmt;
using Block = std::vector<Stmt>;

// Assignment target: a name, a field, or an index chain over either.
struct LValue {
  enum class Kind { kName, kField };
  Kind kind = Kind::kName;
  std::string name;
  std::vector<Expr> indices;  // a[i][j] has indices {i, j}.
};

namespace stmt {
struct Assign { LValue target; Expr value; };
struct Pass {};
struct If { Expr cond; Block then_body; Block else_body; bool has_else = false; };
struct While { Expr cond; Block body; };
struct For { Pattern pattern; Expr iter; Block body; };
struct Return { std::optional<Expr> value; };
struct ExprStmt { Expr expr; };
struct Send { Expr msg; Expr dest; };
struct AwaitBranch { Expr cond; Block body; };
struct Await {
  std::vector<AwaitBranch> branches;
  std::optional<Expr> timeout;
  Block timeout_body;
};
struct Yield {};
struct Break {};
enum class SetOpKind { kAdd, kDel };
struct SetOp { SetOpKind kind; LValue target; Expr elem; };
}  // namespace stmt

struct Stmt {
  using Node = std::variant<stmt::Assign, stmt::Pass, stmt::If, stmt::While,
                            stmt::For, stmt::Return, stmt::ExprStmt,
                            stmt::Send, stmt::Await, stmt::Yield, stmt::Break,
                            stmt::SetOp>;
  Node node;
  Pos pos;
};

struct FuncDef {
  std::string name;
  std::vector<std::string> params;
  Block body;
  Pos pos;
};

struct GlobalVar {
  std::string name;
  Expr init;
  Pos pos;
};

struct ProcMember {
  enum class Kind { kSetup, kRun, kMethod, kHandler };
  Kind kind = Kind::kMethod;
  FuncDef func;  // Handlers have no params; name is empty.
  std::optional<Pattern> msg_pattern;
  std::optional<Pattern> from_pattern;
};

struct ProcessDef {
  std::string name;
  std::vector<ProcMember> members;
  Pos pos;
};

using Item = std::variant<FuncDef, GlobalVar, ProcessDef>;

struct Ast {
  std::vector<Item> items;
};

// Structural equality via canonical JSON.
bool AstEqual(const Ast& a, const Ast& b);

// Convenience constructors used by transforms and tests.
Expr MakeLiteral(Value v, Pos pos = {});
Expr MakeName(std::string name, Pos pos = {});
Stmt MakePass(Pos pos = {});

}  // namespace algodiv::lang

#endif  // ALGODIV_LANG_AST_H_
