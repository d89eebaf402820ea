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

#include "algodiv/lang/parser.h"

#include <utility>

#include "algodiv/core/error.h"
#include "algodiv/lang/compiler.h"
#include "algodiv/lang/lexer.h"

namespace algodiv::lang {
namespace {

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  Ast ParseProgram() {
    Ast ast;
    while (!AtEof()) ast.items.push_back(ParseItem());
    return ast;
  }

 private:
  const Token& Peek(size_t ahead = 0) const {
    size_t i = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[i];
  }
  bool AtEof() const { return Peek().kind == Token::Kind::kEof; }
  Pos PosOf(const Token& t) const { return {t.line, t.col}; }

  bool IsPunct(std::string_view p, size_t ahead = 0) const {
    const Token& t = Peek(ahead);
    return t.kind == Token::Kind::kPunct && t.text == p;
  }
  bool IsKw(std::string_view k, size_t ahead = 0) const {
    const Token& t = Peek(ahead);
    return t.kind == Token::Kind::kKeyword && t.text == k;
  }
  bool IsIdent(std::string_view name, size_t ahead = 0) const {
    const Token& t = Peek(ahead);
    return t.kind == Token::Kind::kIdent && t.text == name;
  }

  [[noreturn]] void Fail(const Token& t, const std::string& msg) const {
    std::string near = t.kind == Token::Kind::kEof ? "end of input" : "'" + t.text + "'";
    throw Error(ErrorCode::kSyntax, std::to_string(t.line) + ":" +
                                        std::to_string(t.col) + ": " + msg +
                                        " near " + near);
  }

  Token Next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  void ExpectPunct(std::string_view p) {
    if (!IsPunct(p)) Fail(Peek(), "expected '" + std::string(p) + "'");
    ++pos_;
  }
  void ExpectKw(std::string_view k) {
    if (!IsKw(k)) Fail(Peek(), "expected '" + std::string(k) + "'");
    ++pos_;
  }
  std::string ExpectIdent() {
    if (Peek().kind != Token::Kind::kIdent) Fail(Peek(), "expected identifier");
    return Next().text;
  }
  bool AcceptPunct(std::string_view p) {
    if (!IsPunct(p)) return false;
    ++pos_;
    return true;
  }

  void SkipSemis() {
    while (AcceptPunct(";")) {
    }
  }

  std::vector<std::string> ParseParams() {
    ExpectPunct("(");
    std::vector<std::string> params;
    if (!IsPunct(")")) {
      do {
        params.push_back(ExpectIdent());
      } while (AcceptPunct(","));
    }
    ExpectPunct(")");
    return params;
  }

  Item ParseItem() {
    SkipSemis();
    const Token& t = Peek();
    if (IsKw("func")) {
      ++pos_;
      FuncDef f;
      f.pos = PosOf(t);
      f.name = ExpectIdent();
      f.params = ParseParams();
      f.body = ParseBlock();
      return f;
    }
    if (IsKw("var")) {
      ++pos_;
      GlobalVar g;
      g.pos = PosOf(t);
      g.name = ExpectIdent();
      ExpectPunct("=");
      g.init = ParseExpr();
      SkipSemis();
      return g;
    }
    if (IsKw("process")) {
      ++pos_;
      ProcessDef p;
      p.pos = PosOf(t);
      p.name = ExpectIdent();
      ExpectPunct("{");
      while (!IsPunct("}")) {
        SkipSemis();
        if (IsPunct("}")) break;
        p.members.push_back(ParseMember());
      }
      ExpectPunct("}");
      return p;
    }
    Fail(t, "expected 'func', 'var', or 'process'");
  }

  ProcMember ParseMember() {
    const Token& t = Peek();
    ProcMember m;
    m.func.pos = PosOf(t);
    if (IsIdent("setup")) {
      ++pos_;
      m.kind = ProcMember::Kind::kSetup;
      m.func.name = "setup";
      m.func.params = ParseParams();
    } else if (IsIdent("run")) {
      ++pos_;
      m.kind = ProcMember::Kind::kRun;
      m.func.name = "run";
      m.func.params = ParseParams();
      if (!m.func.params.empty()) Fail(t, "run takes no parameters");
    } else if (IsKw("func")) {
      ++pos_;
      m.kind = ProcMember::Kind::kMethod;
      m.func.name = ExpectIdent();
      m.func.params = ParseParams();
    } else if (IsKw("receive")) {
      ++pos_;
      m.kind = ProcMember::Kind::kHandler;
      m.msg_pattern = ParsePattern();
      if (IsKw("from")) {
        ++pos_;
        m.from_pattern = ParsePattern();
      }
    } else {
      Fail(t, "expected 'setup', 'run', 'func', or 'receive'");
    }
    m.func.body = ParseBlock();
    return m;
  }

  Block ParseBlock() {
    ExpectPunct("{");
    Block b;
    while (true) {
      SkipSemis();
      if (IsPunct("}")) break;
      if (AtEof()) Fail(Peek(), "unterminated block");
      b.push_back(ParseStmt());
    }
    ExpectPunct("}");
    return b;
  }

  Stmt ParseStmt() {
    const Token& t = Peek();
    Pos pos = PosOf(t);
    if (IsKw("pass")) {
      ++pos_;
      return {stmt::Pass{}, pos};
    }
    if (IsKw("yield")) {
      ++pos_;
      return {stmt::Yield{}, pos};
    }
    if (IsKw("break")) {
      ++pos_;
      return {stmt::Break{}, pos};
    }
    if (IsKw("return")) {
      Token kw = Next();
      stmt::Return r;
      const Token& n = Peek();
      if (n.kind != Token::Kind::kEof && n.line == kw.line && !IsPunct("}") &&
          !IsPunct(";")) {
        r.value = ParseExpr();
      }
      return {std::move(r), pos};
    }
    if (IsKw("if")) return ParseIf();
    if (IsKw("while")) {
      ++pos_;
      stmt::While w{ParseExpr(), {}};
      w.body = ParseBlock();
      return {std::move(w), pos};
    }
    if (IsKw("for")) {
      ++pos_;
      Pattern p = ParsePattern();
      ExpectKw("in");
      Expr iter = ParseExpr();
      Block body = ParseBlock();
      return {stmt::For{std::move(p), std::move(iter), std::move(body)}, pos};
    }
    if (IsKw("send")) {
      ++pos_;
      Expr msg = ParseExpr();
      ExpectKw("to");
      Expr dest = ParseExpr();
      return {stmt::Send{std::move(msg), std::move(dest)}, pos};
    }
    if (IsKw("await")) return ParseAwait();

    Expr e = ParseExpr();
    if (IsPunct("=")) {
      ++pos_;
      LValue lv = ToLValue(e, t);
      Expr value = ParseExpr();
      return {stmt::Assign{std::move(lv), std::move(value)}, pos};
    }
    if (auto* call = std::get_if<expr::Call>(&e.node)) {
      if (call->callee == "$add" || call->callee == "$del") {
        LValue lv = ToLValue(call->args[0], t);
        auto kind = call->callee == "$add" ? stmt::SetOpKind::kAdd : stmt::SetOpKind::kDel;
        return {stmt::SetOp{kind, std::move(lv), std::move(call->args[1])}, pos};
      }
    }
    return {stmt::ExprStmt{std::move(e)}, pos};
  }

  LValue ToLValue(const Expr& e, const Token& at) const {
    LValue lv;
    const Expr* cur = &e;
    std::vector<const Expr*> indices;
    while (const auto* b = std::get_if<expr::Binary>(&cur->node)) {
      if (b->op != BinOp::kIndex) break;
      indices.push_back(&*b->rhs);
      cur = &*b->lhs;
    }
    if (const auto* n = std::get_if<expr::Name>(&cur->node)) {
      lv.kind = LValue::Kind::kName;
      lv.name = n->name;
    } else if (const auto* f = std::get_if<expr::Field>(&cur->node)) {
      lv.kind = LValue::Kind::kField;
      lv.name = f->name;
    } else {
      Fail(at, "invalid assignment target");
    }
    for (auto it = indices.rbegin(); it != indices.rend(); ++it) {
      lv.indices.push_back(**it);
    }
    return lv;
  }

  Stmt ParseIf() {
    Pos pos = PosOf(Peek());
    ExpectKw("if");
    stmt::If s{ParseExpr(), {}, {}, false};
    s.then_body = ParseBlock();
    if (IsKw("else")) {
      ++pos_;
      s.has_else = true;
      if (IsKw("if")) {
        s.else_body.push_back(ParseIf());
      } else {
        s.else_body = ParseBlock();
      }
    }
    return {std::move(s), pos};
  }

  Stmt ParseAwait() {
    Pos pos = PosOf(Peek());
    ExpectKw("await");
    stmt::Await a;
    if (!IsKw("timeout")) {
      while (true) {
        stmt::AwaitBranch br{ParseExpr(), {}};
        bool has_block = IsPunct("{");
        if (has_block) br.body = ParseBlock();
        a.branches.push_back(std::move(br));
        if (has_block && IsKw("or")) {
          ++pos_;
          continue;
        }
        break;
      }
    }
    if (IsKw("timeout")) {
      ++pos_;
      a.timeout = ParseExpr();
      a.timeout_body = ParseBlock();
    }
    if (a.branches.empty() && !a.timeout) Fail(Peek(), "empty await");
    return {std::move(a), pos};
  }

  // Patterns.
  Pattern ParsePattern() {
    const Token& t = Peek();
    Pos pos = PosOf(t);
    if (t.kind == Token::Kind::kIdent) {
      ++pos_;
      if (t.text == "_") return {pattern::Wildcard{}, pos};
      return {pattern::Bind{t.text}, pos};
    }
    if (IsPunct("=")) {
      ++pos_;
      if (IsKw("self")) {
        ++pos_;
        ExpectPunct(".");
        return {pattern::Eq{Expr{expr::Field{ExpectIdent()}, pos}}, pos};
      }
      return {pattern::Eq{MakeName(ExpectIdent(), pos)}, pos};
    }
    if (IsPunct("(")) {
      ++pos_;
      pattern::Tuple tup;
      bool trailing_comma = false;
      while (!IsPunct(")")) {
        tup.elems.push_back(ParsePattern());
        trailing_comma = false;
        if (!AcceptPunct(",")) break;
        trailing_comma = true;
      }
      ExpectPunct(")");
      if (tup.elems.size() == 1 && !trailing_comma) return std::move(tup.elems[0]);
      return {std::move(tup), pos};
    }
    if (IsPunct("-") && Peek(1).kind == Token::Kind::kInt) {
      ++pos_;
      return {pattern::Literal{Value::Int(-Next().int_value)}, pos};
    }
    if (t.kind == Token::Kind::kInt) {
      ++pos_;
      return {pattern::Literal{Value::Int(t.int_value)}, pos};
    }
    if (t.kind == Token::Kind::kString) {
      ++pos_;
      return {pattern::Literal{Value::Str(t.text)}, pos};
    }
    if (IsKw("true") || IsKw("false")) {
      ++pos_;
      return {pattern::Literal{Value::Bool(t.text == "true")}, pos};
    }
    if (IsKw("none")) {
      ++pos_;
      return {pattern::Literal{Value::Absent()}, pos};
    }
    Fail(t, "expected pattern");
  }

  // Expressions.
  Expr ParseExpr() { return ParseOr(); }

  Expr MakeBin(BinOp op, Expr l, Expr r, Pos pos) {
    return Expr{expr::Binary{op, std::move(l), std::move(r)}, pos};
  }

  Expr ParseOr() {
    Expr e = ParseAnd();
    while (IsKw("or")) {
      Pos pos = PosOf(Next());
      e = MakeBin(BinOp::kOr, std::move(e), ParseAnd(), pos);
    }
    return e;
  }

  Expr ParseAnd() {
    Expr e = ParseNot();
    while (IsKw("and")) {
      Pos pos = PosOf(Next());
      e = MakeBin(BinOp::kAnd, std::move(e), ParseNot(), pos);
    }
    return e;
  }

  Expr ParseNot() {
    if (IsKw("not")) {
      Pos pos = PosOf(Next());
      return Expr{expr::Not{ParseNot()}, pos};
    }
    return ParseCmp();
  }

  Expr ParseCmp() {
    Expr e = ParseAdd();
    struct {
      const char* sym;
      BinOp op;
    } static constexpr kOps[] = {{"==", BinOp::kEq}, {"!=", BinOp::kNe},
                                 {"<=", BinOp::kLe}, {">=", BinOp::kGe},
                                 {"<", BinOp::kLt},  {">", BinOp::kGt}};
    for (const auto& o : kOps) {
      if (IsPunct(o.sym)) {
        Pos pos = PosOf(Next());
        return MakeBin(o.op, std::move(e), ParseAdd(), pos);
      }
    }
    if (IsKw("in")) {
      Pos pos = PosOf(Next());
      return MakeBin(BinOp::kIn, std::move(e), ParseAdd(), pos);
    }
    if (IsKw("not") && IsKw("in", 1)) {
      Pos pos = PosOf(Next());
      ++pos_;
      return MakeBin(BinOp::kNotIn, std::move(e), ParseAdd(), pos);
    }
    return e;
  }

  Expr ParseAdd() {
    Expr e = ParseMul();
    while (IsPunct("+") || IsPunct("-")) {
      Token t = Next();
      e = MakeBin(t.text == "+" ? BinOp::kAdd : BinOp::kSub, std::move(e),
                  ParseMul(), PosOf(t));
    }
    return e;
  }

  Expr ParseMul() {
    Expr e = ParseUnary();
    while (IsPunct("*") || IsPunct("/") || IsPunct("%")) {
      Token t = Next();
      BinOp op = t.text == "*" ? BinOp::kMul : t.text == "/" ? BinOp::kDiv : BinOp::kMod;
      e = MakeBin(op, std::move(e), ParseUnary(), PosOf(t));
    }
    return e;
  }

  Expr ParseUnary() {
    if (IsPunct("-")) {
      Pos pos = PosOf(Next());
      if (Peek().kind == Token::Kind::kInt && !IsPunct("[", 1)) {
        return MakeLiteral(Value::Int(-Next().int_value), pos);
      }
      return Expr{expr::Neg{ParseUnary()}, pos};
    }
    return ParsePostfix();
  }

  std::vector<Expr> ParseArgs() {
    ExpectPunct("(");
    std::vector<Expr> args;
    if (!IsPunct(")")) {
      do {
        args.push_back(ParseExpr());
      } while (AcceptPunct(","));
    }
    ExpectPunct(")");
    return args;
  }

  Expr ParsePostfix() {
    Expr e = ParsePrimary();
    while (true) {
      if (IsPunct("[")) {
        Pos pos = PosOf(Next());
        Expr idx = ParseExpr();
        ExpectPunct("]");
        e = MakeBin(BinOp::kIndex, std::move(e), std::move(idx), pos);
      } else if (IsPunct(".") && (IsIdent("add", 1) || IsIdent("del", 1)) &&
                 IsPunct("(", 2)) {
        Pos pos = PosOf(Next());
        std::string which = Next().text;
        std::vector<Expr> args = ParseArgs();
        if (args.size() != 1) Fail(Peek(), "." + which + " takes one argument");
        std::vector<Expr> call_args;
        call_args.push_back(std::move(e));
        call_args.push_back(std::move(args[0]));
        e = Expr{expr::Call{"$" + which, std::move(call_args)}, pos};
      } else {
        return e;
      }
    }
  }

  std::vector<Expr> ParseElems(std::string_view close, bool* trailing_comma) {
    std::vector<Expr> elems;
    *trailing_comma = false;
    while (!IsPunct(close)) {
      elems.push_back(ParseExpr());
      *trailing_comma = false;
      if (!AcceptPunct(",")) break;
      *trailing_comma = true;
    }
    ExpectPunct(close);
    return elems;
  }

  Expr ParsePrimary() {
    const Token& t = Peek();
    Pos pos = PosOf(t);
    switch (t.kind) {
      case Token::Kind::kInt:
        ++pos_;
        return MakeLiteral(Value::Int(t.int_value), pos);
      case Token::Kind::kString:
        ++pos_;
        return MakeLiteral(Value::Str(t.text), pos);
      case Token::Kind::kIdent: {
        ++pos_;
        if (t.text == "_") Fail(t, "'_' is only valid in patterns");
        if (IsPunct("(")) {
          return Expr{expr::Call{t.text, ParseArgs()}, pos};
        }
        return MakeName(t.text, pos);
      }
      case Token::Kind::kEof:
        Fail(t, "unexpected end of input");
      default:
        break;
    }
    if (IsKw("true") || IsKw("false")) {
      ++pos_;
      return MakeLiteral(Value::Bool(t.text == "true"), pos);
    }
    if (IsKw("none")) {
      ++pos_;
      return MakeLiteral(Value::Absent(), pos);
    }
    if (IsKw("self")) {
      ++pos_;
      if (IsPunct(".") && Peek(1).kind == Token::Kind::kIdent &&
          !((Peek(1).text == "add" || Peek(1).text == "del") && IsPunct("(", 2))) {
        ++pos_;
        std::string name = Next().text;
        if (IsPunct("(")) return Expr{expr::Call{name, ParseArgs()}, pos};
        return Expr{expr::Field{name}, pos};
      }
      return Expr{expr::Self{}, pos};
    }
    if (IsKw("received")) {
      ++pos_;
      return Expr{expr::Received{}, pos};
    }
    if (IsKw("some") || IsKw("each")) {
      auto kind = t.text == "some" ? expr::QuantKind::kSome : expr::QuantKind::kEach;
      ++pos_;
      Pattern p = ParsePattern();
      ExpectKw("in");
      Expr domain = ParseAdd();
      expr::Quant q{kind, std::move(p), std::move(domain), {}};
      if (AcceptPunct("|")) q.cond = ParseExpr();
      return Expr{std::move(q), pos};
    }
    if (IsKw("new")) {
      ++pos_;
      ExpectPunct("(");
      expr::New n{ExpectIdent(), {}};
      if (AcceptPunct(",")) n.count = ParseExpr();
      ExpectPunct(")");
      return Expr{std::move(n), pos};
    }
    if (IsPunct("(")) {
      ++pos_;
      bool trailing = false;
      std::vector<Expr> elems = ParseElems(")", &trailing);
      if (elems.size() == 1 && !trailing) return std::move(elems[0]);
      return Expr{expr::TupleLit{std::move(elems)}, pos};
    }
    if (IsPunct("[")) {
      ++pos_;
      bool trailing = false;
      return Expr{expr::SeqLit{ParseElems("]", &trailing)}, pos};
    }
    if (IsPunct("{")) {
      ++pos_;
      bool trailing = false;
      return Expr{expr::SetLit{ParseElems("}", &trailing)}, pos};
    }
    Fail(t, "expected expression");
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
};

}  // namespace

Ast Parse(std::string_view source, const ParseOptions& options) {
  Parser parser(Tokenize(source));
  Ast ast = parser.ParseProgram();
  if (options.check_names) CheckNames(ast);
  return ast;
}

}  // namespace algodiv::lang
