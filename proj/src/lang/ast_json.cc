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

#include "algodiv/lang/ast_json.h"

#include <string>

#include "algodiv/core/error.h"

namespace algodiv::lang {
namespace {

using nlohmann::json;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

const BinOp kAllOps[] = {
    BinOp::kAdd, BinOp::kSub, BinOp::kMul, BinOp::kDiv, BinOp::kMod,
    BinOp::kIndex, BinOp::kEq, BinOp::kNe, BinOp::kLt, BinOp::kLe,
    BinOp::kGt, BinOp::kGe, BinOp::kIn, BinOp::kNotIn, BinOp::kAnd,
    BinOp::kOr};

BinOp OpFromSymbol(const std::string& s) {
  for (BinOp op : kAllOps) {
    if (s == BinOpSymbol(op)) return op;
  }
  throw Error(ErrorCode::kSyntax, "unknown operator in AST JSON: " + s);
}

[[noreturn]] void Bad(const json& j) {
  throw Error(ErrorCode::kSyntax, "malformed AST JSON node: " + j.dump());
}

json ExprList(const std::vector<Expr>& v) {
  json arr = json::array();
  for (const Expr& e : v) arr.push_back(ExprToJson(e));
  return arr;
}

std::vector<Expr> ExprListFrom(const json& j) {
  std::vector<Expr> out;
  for (const json& e : j) out.push_back(ExprFromJson(e));
  return out;
}

json PatternToJson(const Pattern& p) {
  return std::visit(
      Overloaded{
          [](const pattern::Literal& n) {
            return json{{"pat", "literal"}, {"value", ValueToJson(n.value)}};
          },
          [](const pattern::Bind& n) {
            return json{{"pat", "bind"}, {"name", n.name}};
          },
          [](const pattern::Eq& n) {
            return json{{"pat", "eq"}, {"expr", ExprToJson(*n.expr)}};
          },
          [](const pattern::Wildcard&) { return json{{"pat", "wildcard"}}; },
          [](const pattern::Tuple& n) {
            json arr = json::array();
            for (const Pattern& e : n.elems) arr.push_back(PatternToJson(e));
            return json{{"pat", "tuple"}, {"elems", arr}};
          },
      },
      p.node);
}

Pattern PatternFromJson(const json& j) {
  const std::string& k = j.at("pat").get_ref<const std::string&>();
  if (k == "literal") return {pattern::Literal{ValueFromJson(j.at("value"))}};
  if (k == "bind") return {pattern::Bind{j.at("name").get<std::string>()}};
  if (k == "eq") return {pattern::Eq{ExprFromJson(j.at("expr"))}};
  if (k == "wildcard") return {pattern::Wildcard{}};
  if (k == "tuple") {
    pattern::Tuple t;
    for (const json& e : j.at("elems")) t.elems.push_back(PatternFromJson(e));
    return {std::move(t)};
  }
  Bad(j);
}

json LValueToJson(const LValue& lv) {
  return json{{"kind", lv.kind == LValue::Kind::kName ? "name" : "field"},
              {"name", lv.name},
              {"indices", ExprList(lv.indices)}};
}

LValue LValueFromJson(const json& j) {
  LValue lv;
  lv.kind = j.at("kind") == "field" ? LValue::Kind::kField : LValue::Kind::kName;
  lv.name = j.at("name").get<std::string>();
  lv.indices = ExprListFrom(j.at("indices"));
  return lv;
}

json BlockToJson(const Block& b);
Block BlockFromJson(const json& j);

json StmtToJson(const Stmt& s) {
  return std::visit(
      Overloaded{
          [](const stmt::Assign& n) {
            return json{{"stmt", "assign"},
                        {"target", LValueToJson(n.target)},
                        {"value", ExprToJson(n.value)}};
          },
          [](const stmt::Pass&) { return json{{"stmt", "pass"}}; },
          [](const stmt::If& n) {
            return json{{"stmt", "if"},
                        {"cond", ExprToJson(n.cond)},
                        {"then", BlockToJson(n.then_body)},
                        {"else", BlockToJson(n.else_body)},
                        {"has_else", n.has_else}};
          },
          [](const stmt::While& n) {
            return json{{"stmt", "while"},
                        {"cond", ExprToJson(n.cond)},
                        {"body", BlockToJson(n.body)}};
          },
          [](const stmt::For& n) {
            return json{{"stmt", "for"},
                        {"pattern", PatternToJson(n.pattern)},
                        {"iter", ExprToJson(n.iter)},
                        {"body", BlockToJson(n.body)}};
          },
          [](const stmt::Return& n) {
            json j{{"stmt", "return"}};
            if (n.value) j["value"] = ExprToJson(*n.value);
            return j;
          },
          [](const stmt::ExprStmt& n) {
            return json{{"stmt", "expr"}, {"expr", ExprToJson(n.expr)}};
          },
          [](const stmt::Send& n) {
            return json{{"stmt", "send"},
                        {"msg", ExprToJson(n.msg)},
                        {"dest", ExprToJson(n.dest)}};
          },
          [](const stmt::Await& n) {
            json branches = json::array();
            for (const auto& b : n.branches) {
              branches.push_back(
                  json{{"cond", ExprToJson(b.cond)}, {"body", BlockToJson(b.body)}});
            }
            json j{{"stmt", "await"}, {"branches", branches}};
            if (n.timeout) {
              j["timeout"] = ExprToJson(*n.timeout);
              j["timeout_body"] = BlockToJson(n.timeout_body);
            }
            return j;
          },
          [](const stmt::Yield&) { return json{{"stmt", "yield"}}; },
          [](const stmt::Break&) { return json{{"stmt", "break"}}; },
          [](const stmt::SetOp& n) {
            return json{{"stmt", "setop"},
                        {"op", n.kind == stmt::SetOpKind::kAdd ? "add" : "del"},
                        {"target", LValueToJson(n.target)},
                        {"elem", ExprToJson(n.elem)}};
          },
      },
      s.node);
}

Stmt StmtFromJson(const json& j) {
  const std::string& k = j.at("stmt").get_ref<const std::string&>();
  if (k == "assign") {
    return {stmt::Assign{LValueFromJson(j.at("target")), ExprFromJson(j.at("value"))}};
  }
  if (k == "pass") return {stmt::Pass{}};
  if (k == "if") {
    return {stmt::If{ExprFromJson(j.at("cond")), BlockFromJson(j.at("then")),
                     BlockFromJson(j.at("else")), j.at("has_else").get<bool>()}};
  }
  if (k == "while") {
    return {stmt::While{ExprFromJson(j.at("cond")), BlockFromJson(j.at("body"))}};
  }
  if (k == "for") {
    return {stmt::For{PatternFromJson(j.at("pattern")), ExprFromJson(j.at("iter")),
                      BlockFromJson(j.at("body"))}};
  }
  if (k == "return") {
    stmt::Return r;
    if (j.contains("value")) r.value = ExprFromJson(j.at("value"));
    return {std::move(r)};
  }
  if (k == "expr") return {stmt::ExprStmt{ExprFromJson(j.at("expr"))}};
  if (k == "send") {
    return {stmt::Send{ExprFromJson(j.at("msg")), ExprFromJson(j.at("dest"))}};
  }
  if (k == "await") {
    stmt::Await a;
    for (const json& b : j.at("branches")) {
      a.branches.push_back({ExprFromJson(b.at("cond")), BlockFromJson(b.at("body"))});
    }
    if (j.contains("timeout")) {
      a.timeout = ExprFromJson(j.at("timeout"));
      a.timeout_body = BlockFromJson(j.at("timeout_body"));
    }
    return {std::move(a)};
  }
  if (k == "yield") return {stmt::Yield{}};
  if (k == "break") return {stmt::Break{}};
  if (k == "setop") {
    return {stmt::SetOp{j.at("op") == "add" ? stmt::SetOpKind::kAdd : stmt::SetOpKind::kDel,
                        LValueFromJson(j.at("target")), ExprFromJson(j.at("elem"))}};
  }
  Bad(j);
}

json BlockToJson(const Block& b) {
  json arr = json::array();
  for (const Stmt& s : b) arr.push_back(StmtToJson(s));
  return arr;
}

Block BlockFromJson(const json& j) {
  Block b;
  for (const json& s : j) b.push_back(StmtFromJson(s));
  return b;
}

json FuncToJson(const FuncDef& f) {
  return json{{"name", f.name}, {"params", f.params}, {"body", BlockToJson(f.body)}};
}

FuncDef FuncFromJson(const json& j) {
  FuncDef f;
  f.name = j.at("name").get<std::string>();
  f.params = j.at("params").get<std::vector<std::string>>();
  f.body = BlockFromJson(j.at("body"));
  return f;
}

const char* MemberKindName(ProcMember::Kind k) {
  switch (k) {
    case ProcMember::Kind::kSetup: return "setup";
    case ProcMember::Kind::kRun: return "run";
    case ProcMember::Kind::kMethod: return "method";
    case ProcMember::Kind::kHandler: return "handler";
  }
  return "method";
}

}  // namespace

json ExprToJson(const Expr& e) {
  return std::visit(
      Overloaded{
          [](const expr::Literal& n) {
            return json{{"expr", "literal"}, {"value", ValueToJson(n.value)}};
          },
          [](const expr::Name& n) { return json{{"expr", "name"}, {"name", n.name}}; },
          [](const expr::Self&) { return json{{"expr", "self"}}; },
          [](const expr::Field& n) { return json{{"expr", "field"}, {"name", n.name}}; },
          [](const expr::Received&) { return json{{"expr", "received"}}; },
          [](const expr::TupleLit& n) {
            return json{{"expr", "tuple"}, {"elems", ExprList(n.elems)}};
          },
          [](const expr::SeqLit& n) {
            return json{{"expr", "seq"}, {"elems", ExprList(n.elems)}};
          },
          [](const expr::SetLit& n) {
            return json{{"expr", "set"}, {"elems", ExprList(n.elems)}};
          },
          [](const expr::Binary& n) {
            return json{{"expr", "binary"},
                        {"op", BinOpSymbol(n.op)},
                        {"lhs", ExprToJson(*n.lhs)},
                        {"rhs", ExprToJson(*n.rhs)}};
          },
          [](const expr::Not& n) {
            return json{{"expr", "not"}, {"operand", ExprToJson(*n.operand)}};
          },
          [](const expr::Neg& n) {
            return json{{"expr", "neg"}, {"operand", ExprToJson(*n.operand)}};
          },
          [](const expr::Call& n) {
            return json{{"expr", "call"}, {"callee", n.callee}, {"args", ExprList(n.args)}};
          },
          [](const expr::New& n) {
            json j{{"expr", "new"}, {"type", n.type}};
            if (n.count) j["count"] = ExprToJson(*n.count);
            return j;
          },
          [](const expr::Quant& n) {
            json j{{"expr", n.kind == expr::QuantKind::kSome ? "some" : "each"},
                   {"pattern", PatternToJson(*n.pattern)},
                   {"domain", ExprToJson(*n.domain)}};
            if (n.cond) j["cond"] = ExprToJson(*n.cond);
            return j;
          },
      },
      e.node);
}

Expr ExprFromJson(const json& j) {
  const std::string& k = j.at("expr").get_ref<const std::string&>();
  if (k == "literal") return {expr::Literal{ValueFromJson(j.at("value"))}};
  if (k == "name") return {expr::Name{j.at("name").get<std::string>()}};
  if (k == "self") return {expr::Self{}};
  if (k == "field") return {expr::Field{j.at("name").get<std::string>()}};
  if (k == "received") return {expr::Received{}};
  if (k == "tuple") return {expr::TupleLit{ExprListFrom(j.at("elems"))}};
  if (k == "seq") return {expr::SeqLit{ExprListFrom(j.at("elems"))}};
  if (k == "set") return {expr::SetLit{ExprListFrom(j.at("elems"))}};
  if (k == "binary") {
    return {expr::Binary{OpFromSymbol(j.at("op").get<std::string>()),
                         ExprFromJson(j.at("lhs")), ExprFromJson(j.at("rhs"))}};
  }
  if (k == "not") return {expr::Not{ExprFromJson(j.at("operand"))}};
  if (k == "neg") return {expr::Neg{ExprFromJson(j.at("operand"))}};
  if (k == "call") {
    return {expr::Call{j.at("callee").get<std::string>(), ExprListFrom(j.at("args"))}};
  }
  if (k == "new") {
    expr::New n{j.at("type").get<std::string>(), {}};
    if (j.contains("count")) n.count = ExprFromJson(j.at("count"));
    return {std::move(n)};
  }
  if (k == "some" || k == "each") {
    expr::Quant q{k == "some" ? expr::QuantKind::kSome : expr::QuantKind::kEach,
                  PatternFromJson(j.at("pattern")), ExprFromJson(j.at("domain")), {}};
    if (j.contains("cond")) q.cond = ExprFromJson(j.at("cond"));
    return {std::move(q)};
  }
  Bad(j);
}

json AstToJson(const Ast& ast) {
  json items = json::array();
  for (const Item& item : ast.items) {
    if (const auto* f = std::get_if<FuncDef>(&item)) {
      json j = FuncToJson(*f);
      j["item"] = "func";
      items.push_back(j);
    } else if (const auto* g = std::get_if<GlobalVar>(&item)) {
      items.push_back(json{{"item", "var"}, {"name", g->name}, {"init", ExprToJson(g->init)}});
    } else {
      const auto& p = std::get<ProcessDef>(item);
      json members = json::array();
      for (const ProcMember& m : p.members) {
        json mj = FuncToJson(m.func);
        mj["member"] = MemberKindName(m.kind);
        if (m.msg_pattern) mj["pattern"] = PatternToJson(*m.msg_pattern);
        if (m.from_pattern) mj["from"] = PatternToJson(*m.from_pattern);
        members.push_back(mj);
      }
      items.push_back(json{{"item", "process"}, {"name", p.name}, {"members", members}});
    }
  }
  return json{{"format", "algodiv.ast"}, {"version", 1}, {"items", items}};
}

Ast AstFromJson(const json& j) {
  if (j.value("format", "") != "algodiv.ast") {
    throw Error(ErrorCode::kSyntax, "not an algodiv.ast document");
  }
  Ast ast;
  for (const json& item : j.at("items")) {
    const std::string& k = item.at("item").get_ref<const std::string&>();
    if (k == "func") {
      ast.items.push_back(FuncFromJson(item));
    } else if (k == "var") {
      ast.items.push_back(GlobalVar{item.at("name").get<std::string>(),
                                    ExprFromJson(item.at("init")), {}});
    } else if (k == "process") {
      ProcessDef p;
      p.name = item.at("name").get<std::string>();
      for (const json& mj : item.at("members")) {
        ProcMember m;
        const std::string& mk = mj.at("member").get_ref<const std::string&>();
        m.kind = mk == "setup"   ? ProcMember::Kind::kSetup
                 : mk == "run"   ? ProcMember::Kind::kRun
                 : mk == "handler" ? ProcMember::Kind::kHandler
                                 : ProcMember::Kind::kMethod;
        m.func = FuncFromJson(mj);
        if (mj.contains("pattern")) m.msg_pattern = PatternFromJson(mj.at("pattern"));
        if (mj.contains("from")) m.from_pattern = PatternFromJson(mj.at("from"));
        p.members.push_back(std::move(m));
      }
      ast.items.push_back(std::move(p));
    } else {
      Bad(item);
    }
  }
  return ast;
}

}  // namespace algodiv::lang
