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

#include "algodiv/lang/compiler.h"

#include <cctype>
#include <functional>
#include <map>
#include <set>
#include <utility>

#include "algodiv/core/error.h"
#include "algodiv/lang/builtins.h"

namespace algodiv::lang {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

[[noreturn]] void Fail(ErrorCode code, Pos pos, const std::string& msg) {
  throw Error(code, std::to_string(pos.line) + ":" + std::to_string(pos.col) + ": " + msg);
}

struct ProgramScope {
  CompileMode mode = CompileMode::kPlain;
  std::map<std::string, int> globals;
  std::map<std::string, int> functions;  // name -> arity
};

struct ProcScope {
  std::string name;
  std::vector<std::string> fields;
  std::map<std::string, int> field_index;
  std::map<std::string, int> methods;  // name -> arity
  int received_field = -1;

  void AddField(const std::string& f) {
    if (field_index.count(f)) return;
    field_index[f] = static_cast<int>(fields.size());
    fields.push_back(f);
  }
};

// Syntactic walks.

void PatternBinders(const Pattern& p, std::vector<std::string>* out) {
  std::visit(Overloaded{
                 [&](const pattern::Bind& b) { out->push_back(b.name); },
                 [&](const pattern::Tuple& t) {
                   for (const Pattern& e : t.elems) PatternBinders(e, out);
                 },
                 [](const auto&) {},
             },
             p.node);
}

struct Walker {
  std::function<void(const Expr&)> on_expr;
  std::function<void(const Stmt&)> on_stmt;

  void WalkExpr(const Expr& e) {
    if (on_expr) on_expr(e);
    std::visit(Overloaded{
                   [&](const expr::TupleLit& n) { for (const Expr& x : n.elems) WalkExpr(x); },
                   [&](const expr::SeqLit& n) { for (const Expr& x : n.elems) WalkExpr(x); },
                   [&](const expr::SetLit& n) { for (const Expr& x : n.elems) WalkExpr(x); },
                   [&](const expr::Binary& n) { WalkExpr(*n.lhs); WalkExpr(*n.rhs); },
                   [&](const expr::Not& n) { WalkExpr(*n.operand); },
                   [&](const expr::Neg& n) { WalkExpr(*n.operand); },
                   [&](const expr::Call& n) { for (const Expr& x : n.args) WalkExpr(x); },
                   [&](const expr::New& n) { if (n.count) WalkExpr(*n.count); },
                   [&](const expr::Quant& n) {
                     WalkPattern(*n.pattern);
                     WalkExpr(*n.domain);
                     if (n.cond) WalkExpr(*n.cond);
                   },
                   [](const auto&) {},
               },
               e.node);
  }

  void WalkPattern(const Pattern& p) {
    std::visit(Overloaded{
                   [&](const pattern::Eq& n) { WalkExpr(*n.expr); },
                   [&](const pattern::Tuple& n) { for (const Pattern& x : n.elems) WalkPattern(x); },
                   [](const auto&) {},
               },
               p.node);
  }

  void WalkLValue(const LValue& lv) {
    for (const Expr& i : lv.indices) WalkExpr(i);
  }

  void WalkBlock(const Block& b) {
    for (const Stmt& s : b) WalkStmt(s);
  }

  void WalkStmt(const Stmt& s) {
    if (on_stmt) on_stmt(s);
    std::visit(Overloaded{
                   [&](const stmt::Assign& n) { WalkLValue(n.target); WalkExpr(n.value); },
                   [&](const stmt::If& n) {
                     WalkExpr(n.cond);
                     WalkBlock(n.then_body);
                     WalkBlock(n.else_body);
                   },
                   [&](const stmt::While& n) { WalkExpr(n.cond); WalkBlock(n.body); },
                   [&](const stmt::For& n) {
                     WalkPattern(n.pattern);
                     WalkExpr(n.iter);
                     WalkBlock(n.body);
                   },
                   [&](const stmt::Return& n) { if (n.value) WalkExpr(*n.value); },
                   [&](const stmt::ExprStmt& n) { WalkExpr(n.expr); },
                   [&](const stmt::Send& n) { WalkExpr(n.msg); WalkExpr(n.dest); },
                   [&](const stmt::Await& n) {
                     for (const auto& b : n.branches) {
                       WalkExpr(b.cond);
                       WalkBlock(b.body);
                     }
                     if (n.timeout) WalkExpr(*n.timeout);
                     WalkBlock(n.timeout_body);
                   },
                   [&](const stmt::SetOp& n) { WalkLValue(n.target); WalkExpr(n.elem); },
                   [](const auto&) {},
               },
               s.node);
  }
};

std::set<std::string> AssignedNames(const Block& body) {
  std::set<std::string> names;
  Walker w;
  w.on_stmt = [&](const Stmt& s) {
    if (const auto* a = std::get_if<stmt::Assign>(&s.node)) {
      if (a->target.kind == LValue::Kind::kName) names.insert(a->target.name);
    } else if (const auto* f = std::get_if<stmt::For>(&s.node)) {
      std::vector<std::string> b;
      PatternBinders(f->pattern, &b);
      names.insert(b.begin(), b.end());
    }
  };
  w.on_expr = [&](const Expr& e) {
    if (const auto* q = std::get_if<expr::Quant>(&e.node)) {
      std::vector<std::string> b;
      PatternBinders(*q->pattern, &b);
      names.insert(b.begin(), b.end());
    }
  };
  w.WalkBlock(body);
  return names;
}

std::string HandlerKind(const Pattern& p) {
  const Pattern* first = &p;
  if (const auto* t = std::get_if<pattern::Tuple>(&p.node)) {
    if (t->elems.empty()) return "msg";
    first = &t->elems[0];
  }
  if (const auto* l = std::get_if<pattern::Literal>(&first->node)) {
    if (l->value.is_str()) {
      std::string k;
      for (char c : l->value.as_str()) k.push_back(std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
      return k.empty() ? "msg" : k;
    }
  }
  return "msg";
}

enum class UnitRole { kFunction, kGlobals, kSetup, kRun, kMethod, kHandler };

class UnitCompiler {
 public:
  UnitCompiler(const ProgramScope& prog, const ProcScope* proc, std::string name,
               const std::vector<std::string>& params, UnitRole role)
      : prog_(prog), proc_(proc), role_(role) {
    unit_.name = std::move(name);
    unit_.num_params = static_cast<int32_t>(params.size());
    for (const std::string& p : params) {
      if (params_.count(p)) Fail(ErrorCode::kCompile, {}, "duplicate parameter " + p);
      params_.insert(p);
      Slot(p);
    }
  }

  void DeclareLocals(const std::set<std::string>& names) {
    locals_.insert(names.begin(), names.end());
  }

  void Body(const Block& b) {
    for (const Stmt& s : b) Statement(s);
  }

  // Handler prologue: match message and sender against the patterns.
  void HandlerPrologue(const Pattern& msg, const std::optional<Pattern>& from, int fail) {
    Match(msg, Slot("$msg"), fail);
    if (from) Match(*from, Slot("$sender"), fail);
  }

  int NewLabel() {
    labels_.push_back(-1);
    return static_cast<int>(labels_.size()) - 1;
  }
  void Bind(int label) { labels_[label] = static_cast<int>(unit_.code.size()); }

  void Emit(Opcode op, int32_t arg = 0) { unit_.code.push_back({op, arg}); }
  void EmitJump(Opcode op, int label) {
    fixups_.push_back({static_cast<int>(unit_.code.size()), label});
    Emit(op, 0);
  }

  void PushConst(Value v) { Emit(Opcode::kPushConst, Const(std::move(v))); }

  CodeUnit Finish() {
    PushConst(Value::Absent());
    Emit(Opcode::kReturn);
    for (auto [pc, label] : fixups_) unit_.code[pc].arg = labels_[label];
    return std::move(unit_);
  }

 private:
  struct Loop {
    int break_label;
    bool pops_iterator;
    bool used = false;
  };

  int Slot(const std::string& name) {
    auto it = slots_.find(name);
    if (it != slots_.end()) return it->second;
    int idx = static_cast<int>(unit_.locals.size());
    unit_.locals.push_back(name);
    slots_[name] = idx;
    return idx;
  }

  std::string Temp(const std::string& base) { return "$" + base + std::to_string(temp_counter_++); }

  int Const(Value v) {
    for (size_t i = 0; i < unit_.constants.size(); ++i) {
      if (const auto* c = std::get_if<Value>(&unit_.constants[i])) {
        if (*c == v) return static_cast<int>(i);
      }
    }
    unit_.constants.push_back(std::move(v));
    return static_cast<int>(unit_.constants.size()) - 1;
  }

  int CalleeConst(Callee c) {
    for (size_t i = 0; i < unit_.constants.size(); ++i) {
      if (const auto* k = std::get_if<Callee>(&unit_.constants[i])) {
        if (*k == c) return static_cast<int>(i);
      }
    }
    unit_.constants.push_back(std::move(c));
    return static_cast<int>(unit_.constants.size()) - 1;
  }

  void CallBuiltin(std::string_view name) {
    const BuiltinInfo* b = FindBuiltin(name);
    Emit(Opcode::kCall, CalleeConst({Callee::Kind::kBuiltin, std::string(b->name), b->arity}));
  }

  void CallMethod(const std::string& name, int arity) {
    Emit(Opcode::kCall, CalleeConst({Callee::Kind::kMethod, proc_->name + "." + name, arity}));
  }

  void Discard() { Emit(Opcode::kStoreLocal, Slot("$discard")); }

  bool InProcess() const { return proc_ != nullptr; }

  void RequireProcess(Pos pos, const char* what) {
    if (!proc_) Fail(ErrorCode::kCompile, pos, std::string(what) + " outside a process type");
  }

  // Names.

  void LoadName(const std::string& name, Pos pos) {
    if (params_.count(name)) {
      Emit(Opcode::kLoadLocal, Slot(name));
    } else if (auto g = prog_.globals.find(name); g != prog_.globals.end()) {
      Emit(Opcode::kLoadGlobal, g->second);
    } else if (locals_.count(name) || slots_.count(name)) {
      Emit(Opcode::kLoadLocal, Slot(name));
    } else {
      Fail(ErrorCode::kUnresolvedName, pos, "unresolved name '" + name + "'");
    }
  }

  void StoreName(const std::string& name) {
    if (params_.count(name)) {
      Emit(Opcode::kStoreLocal, Slot(name));
    } else if (auto g = prog_.globals.find(name); g != prog_.globals.end()) {
      Emit(Opcode::kStoreGlobal, g->second);
    } else {
      Emit(Opcode::kStoreLocal, Slot(name));
    }
  }

  int FieldIndex(const std::string& name, Pos pos) {
    RequireProcess(pos, "field access");
    auto it = proc_->field_index.find(name);
    if (it == proc_->field_index.end()) {
      Fail(ErrorCode::kUnresolvedName, pos, "unknown field 'self." + name + "'");
    }
    return it->second;
  }

  // Expressions.

  void Expression(const Expr& e) {
    std::visit(
        Overloaded{
            [&](const expr::Literal& n) { PushConst(n.value); },
            [&](const expr::Name& n) { LoadName(n.name, e.pos); },
            [&](const expr::Self&) {
              RequireProcess(e.pos, "'self'");
              CallBuiltin("self_id");
            },
            [&](const expr::Field& n) { Emit(Opcode::kLoadField, FieldIndex(n.name, e.pos)); },
            [&](const expr::Received&) {
              RequireProcess(e.pos, "'received'");
              Emit(Opcode::kLoadField, proc_->received_field);
            },
            [&](const expr::TupleLit& n) {
              for (const Expr& x : n.elems) Expression(x);
              Emit(Opcode::kBuildTuple, static_cast<int32_t>(n.elems.size()));
            },
            [&](const expr::SeqLit& n) {
              for (const Expr& x : n.elems) Expression(x);
              Emit(Opcode::kBuildSeq, static_cast<int32_t>(n.elems.size()));
            },
            [&](const expr::SetLit& n) {
              for (const Expr& x : n.elems) Expression(x);
              Emit(Opcode::kBuildSet, static_cast<int32_t>(n.elems.size()));
            },
            [&](const expr::Binary& n) { BinaryExpr(n); },
            [&](const expr::Not& n) {
              Expression(*n.operand);
              Emit(Opcode::kNot);
            },
            [&](const expr::Neg& n) {
              PushConst(Value::Int(0));
              Expression(*n.operand);
              Emit(Opcode::kBinaryOp, static_cast<int32_t>(ArithOp::kSub));
            },
            [&](const expr::Call& n) { CallExpr(n, e.pos); },
            [&](const expr::New& n) {
              PushConst(Value::Str(n.type));
              if (n.count) {
                Expression(*n.count);
              } else {
                PushConst(Value::Absent());
              }
              CallBuiltin("$new");
            },
            [&](const expr::Quant& n) { QuantExpr(n); },
        },
        e.node);
  }

  void BinaryExpr(const expr::Binary& n) {
    if (n.op == BinOp::kAnd) {
      int lf = NewLabel(), le = NewLabel();
      Expression(*n.lhs);
      EmitJump(Opcode::kJumpIfFalse, lf);
      Expression(*n.rhs);
      EmitJump(Opcode::kJump, le);
      Bind(lf);
      PushConst(Value::Bool(false));
      Bind(le);
      return;
    }
    if (n.op == BinOp::kOr) {
      int lr = NewLabel(), le = NewLabel();
      Expression(*n.lhs);
      EmitJump(Opcode::kJumpIfFalse, lr);
      PushConst(Value::Bool(true));
      EmitJump(Opcode::kJump, le);
      Bind(lr);
      Expression(*n.rhs);
      Bind(le);
      return;
    }
    Expression(*n.lhs);
    Expression(*n.rhs);
    switch (n.op) {
      case BinOp::kAdd: Emit(Opcode::kBinaryOp, static_cast<int32_t>(ArithOp::kAdd)); break;
      case BinOp::kSub: Emit(Opcode::kBinaryOp, static_cast<int32_t>(ArithOp::kSub)); break;
      case BinOp::kMul: Emit(Opcode::kBinaryOp, static_cast<int32_t>(ArithOp::kMul)); break;
      case BinOp::kDiv: Emit(Opcode::kBinaryOp, static_cast<int32_t>(ArithOp::kDiv)); break;
      case BinOp::kMod: Emit(Opcode::kBinaryOp, static_cast<int32_t>(ArithOp::kMod)); break;
      case BinOp::kIndex: Emit(Opcode::kBinaryOp, static_cast<int32_t>(ArithOp::kIndex)); break;
      case BinOp::kEq: Emit(Opcode::kCompareOp, static_cast<int32_t>(CmpOp::kEq)); break;
      case BinOp::kNe: Emit(Opcode::kCompareOp, static_cast<int32_t>(CmpOp::kNe)); break;
      case BinOp::kLt: Emit(Opcode::kCompareOp, static_cast<int32_t>(CmpOp::kLt)); break;
      case BinOp::kLe: Emit(Opcode::kCompareOp, static_cast<int32_t>(CmpOp::kLe)); break;
      case BinOp::kGt: Emit(Opcode::kCompareOp, static_cast<int32_t>(CmpOp::kGt)); break;
      case BinOp::kGe: Emit(Opcode::kCompareOp, static_cast<int32_t>(CmpOp::kGe)); break;
      case BinOp::kIn: Emit(Opcode::kCompareOp, static_cast<int32_t>(CmpOp::kIn)); break;
      case BinOp::kNotIn: Emit(Opcode::kCompareOp, static_cast<int32_t>(CmpOp::kNotIn)); break;
      default: break;
    }
  }

  void CallExpr(const expr::Call& n, Pos pos) {
    const int argc = static_cast<int>(n.args.size());
    if (n.callee == "$add" || n.callee == "$del") {
      Fail(ErrorCode::kCompile, pos, "set mutation is a statement, not an expression");
    }
    if (proc_) {
      if (auto m = proc_->methods.find(n.callee); m != proc_->methods.end()) {
        if (m->second != argc) {
          Fail(ErrorCode::kArity, pos, "method " + n.callee + " expects " +
                                           std::to_string(m->second) + " arguments");
        }
        for (const Expr& a : n.args) Expression(a);
        CallMethod(n.callee, argc);
        return;
      }
    }
    if (auto f = prog_.functions.find(n.callee); f != prog_.functions.end()) {
      if (f->second != argc) {
        Fail(ErrorCode::kArity, pos, "function " + n.callee + " expects " +
                                         std::to_string(f->second) + " arguments");
      }
      for (const Expr& a : n.args) Expression(a);
      Emit(Opcode::kCall, CalleeConst({Callee::Kind::kFunction, n.callee, argc}));
      return;
    }
    if (n.callee == "count") {
      if (argc != 1) Fail(ErrorCode::kArity, pos, "count expects 1 argument");
      Expression(n.args[0]);
      Emit(Opcode::kCount);
      return;
    }
    const BuiltinInfo* b = FindBuiltin(n.callee);
    if (!b) Fail(ErrorCode::kUnresolvedName, pos, "unresolved function '" + n.callee + "'");
    if (b->arity != argc) {
      Fail(ErrorCode::kArity, pos, n.callee + " expects " + std::to_string(b->arity) + " arguments");
    }
    for (const Expr& a : n.args) Expression(a);
    CallBuiltin(b->name);
  }

  void QuantExpr(const expr::Quant& n) {
    bool some = n.kind == expr::QuantKind::kSome;
    int res = Slot(Temp("q"));
    int elem = Slot(Temp("e"));
    int loop = NewLabel(), next = NewLabel(), brk = NewLabel(), end = NewLabel();
    PushConst(Value::Bool(!some));
    Emit(Opcode::kStoreLocal, res);
    Expression(*n.domain);
    Emit(Opcode::kIterNew);
    Bind(loop);
    EmitJump(Opcode::kIterNext, end);
    Emit(Opcode::kStoreLocal, elem);
    Match(*n.pattern, elem, next);
    bool exits = false;
    if (n.cond) {
      Expression(*n.cond);
      if (!some) Emit(Opcode::kNot);
      EmitJump(Opcode::kJumpIfFalse, next);
      exits = true;
    } else if (some) {
      exits = true;
    }
    if (exits) {
      PushConst(Value::Bool(some));
      Emit(Opcode::kStoreLocal, res);
      EmitJump(Opcode::kJump, brk);
    }
    Bind(next);
    EmitJump(Opcode::kJump, loop);
    if (exits) {
      Bind(brk);
      Discard();
    }
    Bind(end);
    Emit(Opcode::kLoadLocal, res);
  }

  // Pattern matching against a local slot; jumps to `fail` on mismatch.
  void Match(const Pattern& p, int slot, int fail) {
    std::visit(
        Overloaded{
            [&](const pattern::Wildcard&) {},
            [&](const pattern::Bind& b) {
              Emit(Opcode::kLoadLocal, slot);
              StoreName(b.name);
            },
            [&](const pattern::Literal& l) {
              Emit(Opcode::kLoadLocal, slot);
              PushConst(l.value);
              Emit(Opcode::kCompareOp, static_cast<int32_t>(CmpOp::kEq));
              EmitJump(Opcode::kJumpIfFalse, fail);
            },
            [&](const pattern::Eq& q) {
              Emit(Opcode::kLoadLocal, slot);
              Expression(*q.expr);
              Emit(Opcode::kCompareOp, static_cast<int32_t>(CmpOp::kEq));
              EmitJump(Opcode::kJumpIfFalse, fail);
            },
            [&](const pattern::Tuple& t) {
              Emit(Opcode::kLoadLocal, slot);
              PushConst(Value::Int(static_cast<int64_t>(t.elems.size())));
              CallBuiltin("$tuple_arity");
              EmitJump(Opcode::kJumpIfFalse, fail);
              for (size_t i = 0; i < t.elems.size(); ++i) {
                const Pattern& sub = t.elems[i];
                if (std::holds_alternative<pattern::Wildcard>(sub.node)) continue;
                Emit(Opcode::kLoadLocal, slot);
                PushConst(Value::Int(static_cast<int64_t>(i)));
                Emit(Opcode::kBinaryOp, static_cast<int32_t>(ArithOp::kIndex));
                if (const auto* b = std::get_if<pattern::Bind>(&sub.node)) {
                  StoreName(b->name);
                } else {
                  int sub_slot = Slot(Temp("m"));
                  Emit(Opcode::kStoreLocal, sub_slot);
                  Match(sub, sub_slot, fail);
                }
              }
            },
        },
        p.node);
  }

  // Statements.

  void LoadLValue(const LValue& lv, size_t depth, Pos pos) {
    if (lv.kind == LValue::Kind::kName) {
      LoadName(lv.name, pos);
    } else {
      Emit(Opcode::kLoadField, FieldIndex(lv.name, pos));
    }
    for (size_t i = 0; i < depth; ++i) {
      Expression(lv.indices[i]);
      Emit(Opcode::kBinaryOp, static_cast<int32_t>(ArithOp::kIndex));
    }
  }

  void StoreBase(const LValue& lv, Pos pos) {
    if (lv.kind == LValue::Kind::kName) {
      StoreName(lv.name);
    } else {
      Emit(Opcode::kStoreField, FieldIndex(lv.name, pos));
    }
  }

  // Pushes base[i1]..[i_depth] with the remaining indices replaced by the
  // value produced by `emit_value`.
  void UpdatedValue(const LValue& lv, size_t depth, Pos pos,
                    const std::function<void()>& emit_value) {
    if (depth == lv.indices.size()) {
      emit_value();
      return;
    }
    LoadLValue(lv, depth, pos);
    Expression(lv.indices[depth]);
    UpdatedValue(lv, depth + 1, pos, emit_value);
    CallBuiltin("$setitem");
  }

  void Assign(const LValue& lv, Pos pos, const std::function<void()>& emit_value) {
    if (lv.kind == LValue::Kind::kField) RequireProcess(pos, "field assignment");
    UpdatedValue(lv, 0, pos, emit_value);
    StoreBase(lv, pos);
  }

  void Wait(Pos pos, int remaining_slot) {
    if (prog_.mode == CompileMode::kSync) {
      PushConst(Value::Bool(true));
      if (remaining_slot >= 0) {
        Emit(Opcode::kLoadLocal, remaining_slot);
      } else {
        PushConst(Value::Absent());
      }
      CallMethod(kYieldSync, 2);
      Discard();
    } else {
      (void)pos;
      if (remaining_slot >= 0) {
        Emit(Opcode::kLoadLocal, remaining_slot);
      } else {
        PushConst(Value::Absent());
      }
      Emit(Opcode::kYieldPoint, 1);
    }
  }

  void AwaitStmt(const stmt::Await& a, Pos pos) {
    RequireProcess(pos, "await");
    if (role_ == UnitRole::kHandler) Fail(ErrorCode::kCompile, pos, "await inside a receive handler");
    const bool timed = a.timeout.has_value();
    int start = -1, limit = -1, elapsed = -1, remaining = -1;
    if (timed) {
      start = Slot(Temp("start"));
      limit = Slot(Temp("timeout"));
      elapsed = Slot(Temp("elapsed"));
      remaining = Slot(Temp("remaining"));
      CallBuiltin("$now");
      Emit(Opcode::kStoreLocal, start);
      Expression(*a.timeout);
      Emit(Opcode::kStoreLocal, limit);
    }
    int top = NewLabel(), exit = NewLabel();
    Bind(top);
    // while not (c1 or ... or ck)
    if (a.branches.empty()) {
      PushConst(Value::Bool(false));
    } else {
      Expression(Disjunction(a, 0));
    }
    Emit(Opcode::kNot);
    EmitJump(Opcode::kJumpIfFalse, exit);
    if (timed) {
      CallBuiltin("$now");
      Emit(Opcode::kLoadLocal, start);
      Emit(Opcode::kBinaryOp, static_cast<int32_t>(ArithOp::kSub));
      Emit(Opcode::kStoreLocal, elapsed);
      Emit(Opcode::kLoadLocal, limit);
      Emit(Opcode::kLoadLocal, elapsed);
      Emit(Opcode::kBinaryOp, static_cast<int32_t>(ArithOp::kSub));
      Emit(Opcode::kStoreLocal, remaining);
      Emit(Opcode::kLoadLocal, remaining);
      PushConst(Value::Int(0));
      Emit(Opcode::kCompareOp, static_cast<int32_t>(CmpOp::kLe));
      int cont = NewLabel();
      EmitJump(Opcode::kJumpIfFalse, cont);
      EmitJump(Opcode::kJump, exit);
      Bind(cont);
    }
    Wait(pos, remaining);
    EmitJump(Opcode::kJump, top);
    Bind(exit);
    if (timed) {
      Emit(Opcode::kLoadLocal, start);
      Emit(Opcode::kLoadLocal, limit);
      CallBuiltin("$await_exit");
      Discard();
    }
    int done = NewLabel();
    for (const auto& br : a.branches) {
      int next = NewLabel();
      Expression(br.cond);
      EmitJump(Opcode::kJumpIfFalse, next);
      Body(br.body);
      EmitJump(Opcode::kJump, done);
      Bind(next);
    }
    if (timed) Body(a.timeout_body);
    Bind(done);
  }

  Expr Disjunction(const stmt::Await& a, size_t i) {
    if (i + 1 == a.branches.size()) return a.branches[i].cond;
    return Expr{expr::Binary{BinOp::kOr, a.branches[i].cond, Disjunction(a, i + 1)}, {}};
  }

  void Statement(const Stmt& s) {
    const Pos pos = s.pos;
    std::visit(
        Overloaded{
            [&](const stmt::Assign& n) {
              Assign(n.target, pos, [&] { Expression(n.value); });
            },
            [&](const stmt::Pass&) { Emit(Opcode::kNop); },
            [&](const stmt::If& n) {
              int lelse = NewLabel(), lend = NewLabel();
              Expression(n.cond);
              EmitJump(Opcode::kJumpIfFalse, lelse);
              Body(n.then_body);
              if (n.has_else) EmitJump(Opcode::kJump, lend);
              Bind(lelse);
              if (n.has_else) Body(n.else_body);
              Bind(lend);
            },
            [&](const stmt::While& n) {
              int top = NewLabel(), end = NewLabel();
              Bind(top);
              Expression(n.cond);
              EmitJump(Opcode::kJumpIfFalse, end);
              loops_.push_back({end, false});
              Body(n.body);
              loops_.pop_back();
              EmitJump(Opcode::kJump, top);
              Bind(end);
            },
            [&](const stmt::For& n) {
              int loop = NewLabel(), brk = NewLabel(), end = NewLabel();
              Expression(n.iter);
              Emit(Opcode::kIterNew);
              Bind(loop);
              EmitJump(Opcode::kIterNext, end);
              if (const auto* b = std::get_if<pattern::Bind>(&n.pattern.node)) {
                StoreName(b->name);
              } else {
                int elem = Slot(Temp("e"));
                Emit(Opcode::kStoreLocal, elem);
                Match(n.pattern, elem, loop);
              }
              loops_.push_back({brk, true});
              Body(n.body);
              bool used = loops_.back().used;
              loops_.pop_back();
              EmitJump(Opcode::kJump, loop);
              if (used) {
                Bind(brk);
                Discard();
              }
              Bind(end);
            },
            [&](const stmt::Return& n) {
              if (role_ == UnitRole::kHandler) {
                PushConst(Value::Bool(true));
              } else if (n.value) {
                Expression(*n.value);
              } else {
                PushConst(Value::Absent());
              }
              Emit(Opcode::kReturn);
            },
            [&](const stmt::ExprStmt& n) {
              Expression(n.expr);
              Discard();
            },
            [&](const stmt::Send& n) {
              RequireProcess(pos, "send");
              Expression(n.msg);
              Expression(n.dest);
              if (prog_.mode == CompileMode::kSync) {
                CallMethod(kSendSync, 2);
                Discard();
              } else {
                Emit(Opcode::kSend);
              }
            },
            [&](const stmt::Await& n) { AwaitStmt(n, pos); },
            [&](const stmt::Yield&) {
              RequireProcess(pos, "yield");
              if (role_ == UnitRole::kHandler) Fail(ErrorCode::kCompile, pos, "yield inside a receive handler");
              if (prog_.mode == CompileMode::kSync) {
                PushConst(Value::Bool(false));
                PushConst(Value::Absent());
                CallMethod(kYieldSync, 2);
                Discard();
              } else {
                Emit(Opcode::kYieldPoint, 0);
              }
            },
            [&](const stmt::Break&) {
              if (loops_.empty()) Fail(ErrorCode::kCompile, pos, "break outside a loop");
              loops_.back().used = true;
              EmitJump(Opcode::kJump, loops_.back().break_label);
            },
            [&](const stmt::SetOp& n) {
              Assign(n.target, pos, [&] {
                LoadLValue(n.target, n.target.indices.size(), pos);
                Expression(n.elem);
                Emit(n.kind == stmt::SetOpKind::kAdd ? Opcode::kSetAdd : Opcode::kSetDel);
              });
            },
        },
        s.node);
  }

  const ProgramScope& prog_;
  const ProcScope* proc_;
  UnitRole role_;
  CodeUnit unit_;
  std::set<std::string> params_;
  std::set<std::string> locals_;
  std::map<std::string, int> slots_;
  std::vector<int> labels_;
  std::vector<std::pair<int, int>> fixups_;
  std::vector<Loop> loops_;
  int temp_counter_ = 0;
};

bool ReferencesReceived(const ProcessDef& p) {
  bool found = false;
  Walker w;
  w.on_expr = [&](const Expr& e) {
    if (std::holds_alternative<expr::Received>(e.node)) found = true;
  };
  for (const ProcMember& m : p.members) {
    w.WalkBlock(m.func.body);
    if (m.msg_pattern) w.WalkPattern(*m.msg_pattern);
    if (m.from_pattern) w.WalkPattern(*m.from_pattern);
  }
  return found;
}

ProcScope BuildProcScope(const ProcessDef& p, CompileMode mode) {
  ProcScope scope;
  scope.name = p.name;
  if (mode == CompileMode::kSync) {
    scope.AddField(kGatewayField);
    scope.AddField(kNumYieldsField);
  }
  Walker w;
  w.on_stmt = [&](const Stmt& s) {
    if (const auto* a = std::get_if<stmt::Assign>(&s.node)) {
      if (a->target.kind == LValue::Kind::kField) scope.AddField(a->target.name);
    } else if (const auto* o = std::get_if<stmt::SetOp>(&s.node)) {
      if (o->target.kind == LValue::Kind::kField) scope.AddField(o->target.name);
    }
  };
  for (const ProcMember& m : p.members) {
    w.WalkBlock(m.func.body);
    if (m.kind == ProcMember::Kind::kMethod) {
      if (scope.methods.count(m.func.name)) {
        Fail(ErrorCode::kCompile, m.func.pos, "duplicate method " + m.func.name);
      }
      if (mode == CompileMode::kSync &&
          (m.func.name == kSendSync || m.func.name == kYieldSync)) {
        Fail(ErrorCode::kCompile, m.func.pos, "method name " + m.func.name + " is reserved");
      }
      scope.methods[m.func.name] = static_cast<int>(m.func.params.size());
    }
  }
  if (ReferencesReceived(p)) {
    scope.AddField(kReceivedField);
    scope.received_field = scope.field_index[kReceivedField];
  }
  if (mode == CompileMode::kSync) {
    scope.methods[kSendSync] = 2;
    scope.methods[kYieldSync] = 2;
  }
  return scope;
}

Expr CallOf(std::string name, std::vector<Expr> args) {
  return Expr{expr::Call{std::move(name), std::move(args)}, {}};
}
Expr FieldOf(std::string name) { return Expr{expr::Field{std::move(name)}, {}}; }

LValue FieldTarget(std::string name) {
  LValue lv;
  lv.kind = LValue::Kind::kField;
  lv.name = std::move(name);
  return lv;
}

// send_sync(m, d): forward (m with own pid -> gateway pid, d) to the gateway.
FuncDef SendSyncDef() {
  FuncDef f;
  f.name = kSendSync;
  f.params = {"m", "d"};
  std::vector<Expr> rp;
  rp.push_back(MakeName("m"));
  rp.push_back(Expr{expr::Self{}, {}});
  rp.push_back(FieldOf(kGatewayField));
  std::vector<Expr> args;
  args.push_back(CallOf("$replace_pid", std::move(rp)));
  args.push_back(MakeName("d"));
  f.body.push_back(Stmt{stmt::ExprStmt{CallOf("$gw_send", std::move(args))}, {}});
  return f;
}

// yield_sync(b, t): bump num_yields, report to the gateway, wait for reply.
FuncDef YieldSyncDef() {
  FuncDef f;
  f.name = kYieldSync;
  f.params = {"b", "t"};
  Expr inc{expr::Binary{BinOp::kAdd, FieldOf(kNumYieldsField), MakeLiteral(Value::Int(1))}, {}};
  f.body.push_back(Stmt{stmt::Assign{FieldTarget(kNumYieldsField), std::move(inc)}, {}});
  std::vector<Expr> args;
  args.push_back(MakeName("b"));
  args.push_back(MakeName("t"));
  args.push_back(FieldOf(kNumYieldsField));
  f.body.push_back(Stmt{stmt::ExprStmt{CallOf("$gw_yield", std::move(args))}, {}});
  return f;
}

CodeUnit CompileFunc(const ProgramScope& prog, const ProcScope* proc, const std::string& name,
                     const FuncDef& f, UnitRole role, const Block* prologue = nullptr,
                     const std::vector<std::string>* extra_params = nullptr) {
  std::vector<std::string> params = f.params;
  if (extra_params) params.insert(params.end(), extra_params->begin(), extra_params->end());
  UnitCompiler uc(prog, proc, name, params, role);
  uc.DeclareLocals(AssignedNames(f.body));
  if (prologue) uc.Body(*prologue);
  uc.Body(f.body);
  return uc.Finish();
}

CompiledProgram CompileImpl(const Ast& ast, CompileMode mode) {
  ProgramScope prog;
  prog.mode = mode;
  CompiledProgram out;
  out.mode = mode;
  std::set<std::string> type_names;
  for (const Item& item : ast.items) {
    if (const auto* g = std::get_if<GlobalVar>(&item)) {
      if (prog.globals.count(g->name)) Fail(ErrorCode::kCompile, g->pos, "duplicate global " + g->name);
      prog.globals[g->name] = static_cast<int>(out.globals.size());
      out.globals.push_back(g->name);
    } else if (const auto* f = std::get_if<FuncDef>(&item)) {
      if (prog.functions.count(f->name)) Fail(ErrorCode::kCompile, f->pos, "duplicate function " + f->name);
      prog.functions[f->name] = static_cast<int>(f->params.size());
    } else {
      const auto& p = std::get<ProcessDef>(item);
      if (!type_names.insert(p.name).second) Fail(ErrorCode::kCompile, p.pos, "duplicate process type " + p.name);
    }
  }

  if (!out.globals.empty()) {
    UnitCompiler uc(prog, nullptr, std::string(kGlobalsUnit), {}, UnitRole::kGlobals);
    Block inits;
    for (const Item& item : ast.items) {
      if (const auto* g = std::get_if<GlobalVar>(&item)) {
        LValue lv;
        lv.name = g->name;
        inits.push_back(Stmt{stmt::Assign{lv, g->init}, g->pos});
      }
    }
    uc.Body(inits);
    out.units.push_back(uc.Finish());
  }

  for (const Item& item : ast.items) {
    if (const auto* f = std::get_if<FuncDef>(&item)) {
      out.units.push_back(CompileFunc(prog, nullptr, f->name, *f, UnitRole::kFunction));
      continue;
    }
    const auto* p = std::get_if<ProcessDef>(&item);
    if (!p) continue;
    ProcScope scope = BuildProcScope(*p, mode);
    ProcessInfo info;
    info.name = p->name;
    info.setup_unit = p->name + ".setup";
    info.run_unit = p->name + ".run";

    const FuncDef* setup = nullptr;
    const FuncDef* run = nullptr;
    for (const ProcMember& m : p->members) {
      if (m.kind == ProcMember::Kind::kSetup) {
        if (setup) Fail(ErrorCode::kCompile, m.func.pos, "duplicate setup");
        setup = &m.func;
      } else if (m.kind == ProcMember::Kind::kRun) {
        if (run) Fail(ErrorCode::kCompile, m.func.pos, "duplicate run");
        run = &m.func;
      }
    }
    FuncDef empty;
    if (!setup) setup = &empty;
    if (!run) run = &empty;

    Block prologue;
    std::vector<std::string> extra;
    if (mode == CompileMode::kSync) {
      extra.push_back(kGatewayField);
      prologue.push_back(Stmt{stmt::Assign{FieldTarget(kGatewayField), MakeName(kGatewayField)}, {}});
      prologue.push_back(Stmt{stmt::Assign{FieldTarget(kNumYieldsField), MakeLiteral(Value::Int(0))}, {}});
    }
    if (scope.received_field >= 0) {
      prologue.push_back(Stmt{stmt::Assign{FieldTarget(kReceivedField),
                                           Expr{expr::SetLit{}, {}}}, {}});
    }
    out.units.push_back(CompileFunc(prog, &scope, info.setup_unit, *setup, UnitRole::kSetup,
                                    &prologue, &extra));
    info.setup_arity = out.units.back().num_params;
    out.units.push_back(CompileFunc(prog, &scope, info.run_unit, *run, UnitRole::kRun));

    std::map<std::string, int> kind_counts;
    for (const ProcMember& m : p->members) {
      if (m.kind == ProcMember::Kind::kMethod) {
        out.units.push_back(CompileFunc(prog, &scope, p->name + "." + m.func.name, m.func,
                                        UnitRole::kMethod));
      } else if (m.kind == ProcMember::Kind::kHandler) {
        std::string kind = HandlerKind(*m.msg_pattern);
        int n = ++kind_counts[kind];
        std::string name = p->name + ".receive_" + kind + (n > 1 ? "_" + std::to_string(n) : "");
        UnitCompiler uc(prog, &scope, name, {"$msg", "$sender"},
                        UnitRole::kHandler);
        std::set<std::string> locals = AssignedNames(m.func.body);
        std::vector<std::string> binders;
        PatternBinders(*m.msg_pattern, &binders);
        if (m.from_pattern) PatternBinders(*m.from_pattern, &binders);
        locals.insert(binders.begin(), binders.end());
        uc.DeclareLocals(locals);
        int fail = uc.NewLabel();
        uc.HandlerPrologue(*m.msg_pattern, m.from_pattern, fail);
        uc.Body(m.func.body);
        uc.PushConst(Value::Bool(true));
        uc.Emit(Opcode::kReturn);
        uc.Bind(fail);
        uc.PushConst(Value::Bool(false));
        uc.Emit(Opcode::kReturn);
        out.units.push_back(uc.Finish());
        info.handlers.push_back({name, kind});
      }
    }
    if (mode == CompileMode::kSync) {
      FuncDef ss = SendSyncDef();
      FuncDef ys = YieldSyncDef();
      out.units.push_back(CompileFunc(prog, &scope, p->name + "." + kSendSync, ss, UnitRole::kMethod));
      out.units.push_back(CompileFunc(prog, &scope, p->name + "." + kYieldSync, ys, UnitRole::kMethod));
    }
    info.fields = scope.fields;
    info.received_field = scope.received_field;
    out.processes.push_back(std::move(info));
  }
  return out;
}

}  // namespace

CompiledProgram Compile(const Ast& ast, CompileMode mode) {
  CompiledProgram out = CompileImpl(ast, mode);
  Verify(out);
  return out;
}

void CheckNames(const Ast& ast) {
  try {
    CompileImpl(ast, CompileMode::kPlain);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kUnresolvedName) throw;
  }
}

}  // namespace algodiv::lang
