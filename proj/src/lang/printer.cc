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

#include "algodiv/lang/printer.h"

#include <sstream>

namespace algodiv::lang {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool NeedsParens(const Expr& e) {
  if (const auto* b = std::get_if<expr::Binary>(&e.node)) return b->op != BinOp::kIndex;
  return std::holds_alternative<expr::Not>(e.node) ||
         std::holds_alternative<expr::Neg>(e.node) ||
         std::holds_alternative<expr::Quant>(e.node) ||
         (std::holds_alternative<expr::Literal>(e.node) &&
          std::get<expr::Literal>(e.node).value.is_int() &&
          std::get<expr::Literal>(e.node).value.as_int() < 0);
}

std::string Operand(const Expr& e) {
  std::string s = PrintExpr(e);
  return NeedsParens(e) ? "(" + s + ")" : s;
}

std::string List(const std::vector<Expr>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i > 0) s += ", ";
    s += PrintExpr(v[i]);
  }
  return s;
}

std::string PrintPattern(const Pattern& p) {
  return std::visit(
      Overloaded{
          [](const pattern::Literal& n) { return n.value.ToString(); },
          [](const pattern::Bind& n) { return n.name; },
          [](const pattern::Eq& n) { return "=" + PrintExpr(*n.expr); },
          [](const pattern::Wildcard&) { return std::string("_"); },
          [](const pattern::Tuple& n) {
            std::string s = "(";
            for (size_t i = 0; i < n.elems.size(); ++i) {
              if (i > 0) s += ", ";
              s += PrintPattern(n.elems[i]);
            }
            if (n.elems.size() == 1) s += ",";
            return s + ")";
          },
      },
      p.node);
}

std::string PrintLValue(const LValue& lv) {
  std::string s = lv.kind == LValue::Kind::kField ? "self." + lv.name : lv.name;
  for (const Expr& i : lv.indices) s += "[" + PrintExpr(i) + "]";
  return s;
}

class Writer {
 public:
  void Line(int depth, const std::string& text) {
    out_ << std::string(2 * depth, ' ') << text << "\n";
  }

  void Body(int depth, const Block& b) {
    for (const Stmt& s : b) Statement(depth, s);
  }

  void Statement(int d, const Stmt& s) {
    std::visit(
        Overloaded{
            [&](const stmt::Assign& n) {
              Line(d, PrintLValue(n.target) + " = " + PrintExpr(n.value));
            },
            [&](const stmt::Pass&) { Line(d, "pass"); },
            [&](const stmt::If& n) {
              Line(d, "if " + PrintExpr(n.cond) + " {");
              Body(d + 1, n.then_body);
              if (n.has_else) {
                Line(d, "} else {");
                Body(d + 1, n.else_body);
              }
              Line(d, "}");
            },
            [&](const stmt::While& n) {
              Line(d, "while " + PrintExpr(n.cond) + " {");
              Body(d + 1, n.body);
              Line(d, "}");
            },
            [&](const stmt::For& n) {
              Line(d, "for " + PrintPattern(n.pattern) + " in " + PrintExpr(n.iter) + " {");
              Body(d + 1, n.body);
              Line(d, "}");
            },
            [&](const stmt::Return& n) {
              Line(d, n.value ? "return " + PrintExpr(*n.value) : "return");
            },
            [&](const stmt::ExprStmt& n) { Line(d, PrintExpr(n.expr)); },
            [&](const stmt::Send& n) {
              Line(d, "send " + PrintExpr(n.msg) + " to " + PrintExpr(n.dest));
            },
            [&](const stmt::Await& n) {
              std::string head = "await ";
              for (size_t i = 0; i < n.branches.size(); ++i) {
                const auto& br = n.branches[i];
                Line(d, head + "(" + PrintExpr(br.cond) + ") {");
                Body(d + 1, br.body);
                head = "} or ";
              }
              if (n.timeout) {
                Line(d, (n.branches.empty() ? std::string("await timeout ")
                                            : std::string("} timeout ")) +
                            PrintExpr(*n.timeout) + " {");
                Body(d + 1, n.timeout_body);
              }
              Line(d, "}");
            },
            [&](const stmt::Yield&) { Line(d, "yield"); },
            [&](const stmt::Break&) { Line(d, "break"); },
            [&](const stmt::SetOp& n) {
              Line(d, PrintLValue(n.target) +
                          (n.kind == stmt::SetOpKind::kAdd ? ".add(" : ".del(") +
                          PrintExpr(n.elem) + ")");
            },
        },
        s.node);
  }

  void Func(int d, const std::string& head, const FuncDef& f) {
    std::string params;
    for (size_t i = 0; i < f.params.size(); ++i) {
      if (i > 0) params += ", ";
      params += f.params[i];
    }
    Line(d, head + "(" + params + ") {");
    Body(d + 1, f.body);
    Line(d, "}");
  }

  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

}  // namespace

std::string PrintExpr(const Expr& e) {
  return std::visit(
      Overloaded{
          [](const expr::Literal& n) { return n.value.ToString(); },
          [](const expr::Name& n) { return n.name; },
          [](const expr::Self&) { return std::string("self"); },
          [](const expr::Field& n) { return "self." + n.name; },
          [](const expr::Received&) { return std::string("received"); },
          [](const expr::TupleLit& n) {
            return "(" + List(n.elems) + (n.elems.size() == 1 ? ",)" : ")");
          },
          [](const expr::SeqLit& n) { return "[" + List(n.elems) + "]"; },
          [](const expr::SetLit& n) { return "{" + List(n.elems) + "}"; },
          [](const expr::Binary& n) {
            if (n.op == BinOp::kIndex) {
              return Operand(*n.lhs) + "[" + PrintExpr(*n.rhs) + "]";
            }
            return Operand(*n.lhs) + " " + BinOpSymbol(n.op) + " " + Operand(*n.rhs);
          },
          [](const expr::Not& n) { return "not " + Operand(*n.operand); },
          [](const expr::Neg& n) { return "-" + Operand(*n.operand); },
          [](const expr::Call& n) {
            if (n.callee == "$add" || n.callee == "$del") {
              return Operand(n.args[0]) + "." + n.callee.substr(1) + "(" +
                     PrintExpr(n.args[1]) + ")";
            }
            return n.callee + "(" + List(n.args) + ")";
          },
          [](const expr::New& n) {
            return "new(" + n.type + (n.count ? ", " + PrintExpr(*n.count) : "") + ")";
          },
          [](const expr::Quant& n) {
            std::string s = n.kind == expr::QuantKind::kSome ? "some " : "each ";
            s += PrintPattern(*n.pattern) + " in " + Operand(*n.domain);
            if (n.cond) s += " | " + PrintExpr(*n.cond);
            return s;
          },
      },
      e.node);
}

std::string Print(const Ast& ast) {
  Writer w;
  bool first = true;
  for (const Item& item : ast.items) {
    if (!first) w.Line(0, "");
    first = false;
    if (const auto* f = std::get_if<FuncDef>(&item)) {
      w.Func(0, "func " + f->name, *f);
    } else if (const auto* g = std::get_if<GlobalVar>(&item)) {
      w.Line(0, "var " + g->name + " = " + PrintExpr(g->init));
    } else {
      const auto& p = std::get<ProcessDef>(item);
      w.Line(0, "process " + p.name + " {");
      for (const ProcMember& m : p.members) {
        switch (m.kind) {
          case ProcMember::Kind::kSetup: w.Func(1, "setup", m.func); break;
          case ProcMember::Kind::kRun: w.Func(1, "run", m.func); break;
          case ProcMember::Kind::kMethod: w.Func(1, "func " + m.func.name, m.func); break;
          case ProcMember::Kind::kHandler: {
            std::string head = "receive " + PrintPattern(*m.msg_pattern);
            if (m.from_pattern) head += " from " + PrintPattern(*m.from_pattern);
            w.Line(1, head + " {");
            w.Body(2, m.func.body);
            w.Line(1, "}");
            break;
          }
        }
      }
      w.Line(0, "}");
    }
  }
  return w.str();
}

}  // namespace algodiv::lang
