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

#include "algodiv/vm/machine.h"

#include <fnmatch.h>

#include <array>

namespace algodiv::vm {
namespace {

using lang::ArithOp;
using lang::Builtin;
using lang::CmpOp;
using lang::Opcode;

const Value& CharValue(unsigned char c) {
  static const auto* table = [] {
    auto* t = new std::array<Value, 256>();
    for (int i = 0; i < 256; ++i) (*t)[i] = Value::Str(std::string(1, static_cast<char>(i)));
    return t;
  }();
  return (*table)[c];
}

int64_t FloorDiv(int64_t a, int64_t b) {
  int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

int64_t FloorMod(int64_t a, int64_t b) {
  int64_t r = a % b;
  if (r != 0 && ((r < 0) != (b < 0))) r += b;
  return r;
}

AccessTag CmpTag(CmpOp op) {
  switch (op) {
    case CmpOp::kEq: return AccessTag::kEq;
    case CmpOp::kNe: return AccessTag::kNe;
    case CmpOp::kLt: return AccessTag::kLt;
    case CmpOp::kLe: return AccessTag::kLe;
    case CmpOp::kGt: return AccessTag::kGt;
    case CmpOp::kGe: return AccessTag::kGe;
    case CmpOp::kIn:
    case CmpOp::kNotIn: return AccessTag::kEq;
  }
  return AccessTag::kRead;
}

}  // namespace

Machine::Machine(std::shared_ptr<const lang::CompiledProgram> program, Hooks hooks, Host* host,
                 const lang::ProcessInfo* process)
    : program_(std::move(program)), hooks_(std::move(hooks)), host_(host) {
  const auto& units = program_->units;
  links_.resize(units.size());
  for (size_t u = 0; u < units.size(); ++u) {
    UnitLink& link = links_[u];
    for (const std::string& pat : hooks_.unit_filter) {
      if (fnmatch(pat.c_str(), units[u].name.c_str(), 0) == 0) link.traced = false;
    }
    link.call_unit.assign(units[u].constants.size(), -1);
    link.builtin.assign(units[u].constants.size(), -1);
    for (size_t c = 0; c < units[u].constants.size(); ++c) {
      const auto* callee = std::get_if<lang::Callee>(&units[u].constants[c]);
      if (!callee) continue;
      if (callee->kind == lang::Callee::Kind::kBuiltin) {
        const lang::BuiltinInfo* b = lang::FindBuiltin(callee->name);
        if (b) link.builtin[c] = static_cast<int>(b->id);
      } else {
        link.call_unit[c] = program_->FindUnitIndex(callee->name);
      }
    }
  }
  globals_.resize(program_->globals.size());
  if (process) fields_.resize(process->fields.size());
}

void Machine::InitGlobals() {
  int u = program_->FindUnitIndex(lang::kGlobalsUnit);
  if (u >= 0) Call(u, {});
}

Execution Machine::Begin(std::string_view unit, std::vector<Value> args) const {
  int u = program_->FindUnitIndex(unit);
  if (u < 0) throw Error(ErrorCode::kUnknownUnit, "unknown unit '" + std::string(unit) + "'");
  return Begin(u, std::move(args));
}

Execution Machine::Begin(int unit, std::vector<Value> args) const {
  const lang::CodeUnit& cu = program_->units.at(unit);
  if (static_cast<int>(args.size()) != cu.num_params) {
    throw Error(ErrorCode::kArity, cu.name + " expects " + std::to_string(cu.num_params) +
                                       " arguments, got " + std::to_string(args.size()));
  }
  Execution ex;
  ex.stack = std::move(args);
  PushFrame(ex, unit, ex.stack.size());
  return ex;
}

void Machine::PushFrame(Execution& ex, int unit, size_t nargs) const {
  const lang::CodeUnit& cu = program_->units[unit];
  size_t base = ex.locals.size();
  ex.locals.resize(base + cu.num_locals());
  size_t first = ex.stack.size() - nargs;
  for (size_t i = 0; i < nargs; ++i) ex.locals[base + i] = std::move(ex.stack[first + i]);
  ex.stack.resize(first);
  ex.frames.push_back({unit, 0, base, ex.stack.size()});
}

void Machine::Fail(const Execution& ex, ErrorCode code, const std::string& msg) const {
  std::string where;
  if (!ex.frames.empty()) {
    const auto& f = ex.frames.back();
    where = program_->units[f.unit].name + "@" + std::to_string(f.pc - 1) + ": ";
  }
  throw Error(code, where + msg);
}

void Machine::LogLeaves(const Value& v, AccessTag tag) {
  if (v.tracked()) accesses_.push_back(AccessRecord::Access(v.track(), tag));
  if (v.is_collection()) {
    for (const Value& e : v.elems()) LogLeaves(e, tag);
  }
}

Value Machine::Arith(const Execution& ex, ArithOp op, const Value& a, const Value& b) {
  if (hooks_.access) {
    AccessTag tag = op == ArithOp::kIndex ? AccessTag::kIndex : AccessTag::kAdd;
    if (op == ArithOp::kIndex) {
      if (a.tracked()) accesses_.push_back(AccessRecord::Access(a.track(), tag));
      if (b.tracked()) accesses_.push_back(AccessRecord::Access(b.track(), tag));
    } else {
      LogLeaves(a, tag);
      LogLeaves(b, tag);
    }
  }
  auto type_error = [&] {
    Fail(ex, ErrorCode::kType, std::string("unsupported operand kinds ") +
                                   Value::KindName(a.kind()) + " and " + Value::KindName(b.kind()));
  };
  if (op == ArithOp::kIndex) {
    if (!b.is_int()) type_error();
    int64_t i = b.as_int();
    int64_t n = static_cast<int64_t>(a.size());
    if (!(a.is_str() || a.is_seq() || a.is_tuple())) type_error();
    if (i < 0) i += n;
    if (i < 0 || i >= n) {
      Fail(ex, ErrorCode::kRuntime, "index " + std::to_string(b.as_int()) + " out of range for " +
                                        Value::KindName(a.kind()) + " of size " + std::to_string(n));
    }
    if (a.is_str()) return CharValue(static_cast<unsigned char>(a.as_str()[i]));
    return a.elems()[i];
  }
  if (a.is_int() && b.is_int()) {
    int64_t x = a.as_int(), y = b.as_int();
    switch (op) {
      case ArithOp::kAdd: return Value::Int(x + y);
      case ArithOp::kSub: return Value::Int(x - y);
      case ArithOp::kMul: return Value::Int(x * y);
      case ArithOp::kDiv:
        if (y == 0) Fail(ex, ErrorCode::kRuntime, "division by zero");
        return Value::Int(FloorDiv(x, y));
      case ArithOp::kMod:
        if (y == 0) Fail(ex, ErrorCode::kRuntime, "modulo by zero");
        return Value::Int(FloorMod(x, y));
      default: break;
    }
  }
  if (op == ArithOp::kAdd && a.kind() == b.kind()) {
    if (a.is_str()) return Value::Str(a.as_str() + b.as_str());
    if (a.is_seq() || a.is_tuple()) {
      Value::Elems e = a.elems();
      e.insert(e.end(), b.elems().begin(), b.elems().end());
      return a.is_seq() ? Value::Seq(std::move(e)) : Value::Tuple(std::move(e));
    }
    if (a.is_set()) {
      Value::Elems e = a.elems();
      e.insert(e.end(), b.elems().begin(), b.elems().end());
      return Value::Set(std::move(e));
    }
  }
  if (op == ArithOp::kSub && a.is_set() && b.is_set()) {
    Value::Elems e;
    for (const Value& x : a.elems()) {
      if (!b.SetContains(x)) e.push_back(x);
    }
    return Value::Set(std::move(e));
  }
  type_error();
  return Value();
}

Value Machine::Compare(const Execution& ex, CmpOp op, const Value& a, const Value& b) {
  if (hooks_.access) {
    AccessTag tag = CmpTag(op);
    LogLeaves(a, tag);
    if (op != CmpOp::kIn && op != CmpOp::kNotIn) {
      LogLeaves(b, tag);
    } else if (b.is_str() && b.tracked()) {
      accesses_.push_back(AccessRecord::Access(b.track(), tag));
    }
  }
  switch (op) {
    case CmpOp::kEq: return Value::Bool(a == b);
    case CmpOp::kNe: return Value::Bool(!(a == b));
    case CmpOp::kLt: return Value::Bool((a <=> b) < 0);
    case CmpOp::kLe: return Value::Bool((a <=> b) <= 0);
    case CmpOp::kGt: return Value::Bool((a <=> b) > 0);
    case CmpOp::kGe: return Value::Bool((a <=> b) >= 0);
    case CmpOp::kIn:
    case CmpOp::kNotIn:
      try {
        bool in = b.Contains(a);
        return Value::Bool(op == CmpOp::kIn ? in : !in);
      } catch (const Error& e) {
        Fail(ex, e.code(), e.what());
      }
  }
  return Value::Bool(false);
}

Value Machine::PureBuiltin(const Execution& ex, Builtin id, std::vector<Value>& args) {
  auto need = [&](bool ok, const char* what) {
    if (!ok) Fail(ex, ErrorCode::kType, std::string(lang::GetBuiltin(id).name) + ": " + what);
  };
  auto read_args = [&] {
    if (!hooks_.access) return;
    for (const Value& a : args) LogLeaves(a, AccessTag::kRead);
  };
  switch (id) {
    case Builtin::kRange: {
      read_args();
      need(args[0].is_int() && args[1].is_int(), "expects integers");
      Value::Elems e;
      for (int64_t i = args[0].as_int(); i < args[1].as_int(); ++i) e.push_back(Value::Int(i));
      return Value::Seq(std::move(e));
    }
    case Builtin::kOrd:
      read_args();
      need(args[0].is_str() && args[0].size() == 1, "expects a one-character string");
      return Value::Int(static_cast<unsigned char>(args[0].as_str()[0]));
    case Builtin::kChr:
      read_args();
      need(args[0].is_int() && args[0].as_int() >= 0 && args[0].as_int() < 256, "expects 0..255");
      return CharValue(static_cast<unsigned char>(args[0].as_int()));
    case Builtin::kMin:
      read_args();
      return (args[1] <=> args[0]) < 0 ? args[1] : args[0];
    case Builtin::kMax:
      read_args();
      return (args[1] <=> args[0]) > 0 ? args[1] : args[0];
    case Builtin::kAbs:
      read_args();
      need(args[0].is_int(), "expects an integer");
      return Value::Int(args[0].as_int() < 0 ? -args[0].as_int() : args[0].as_int());
    case Builtin::kStr:
      read_args();
      if (args[0].is_str()) return args[0].Untracked();
      return Value::Str(args[0].Untracked().ToString());
    case Builtin::kAppend: {
      need(args[0].is_seq(), "expects a sequence");
      Value::Elems e;
      e.reserve(args[0].size() + 1);
      e = args[0].elems();
      e.push_back(std::move(args[1]));
      return Value::Seq(std::move(e));
    }
    case Builtin::kSeq: {
      need(args[0].is_int() && args[0].as_int() >= 0, "expects a non-negative length");
      return Value::Seq(Value::Elems(static_cast<size_t>(args[0].as_int()), args[1]));
    }
    case Builtin::kSetItem: {
      const Value& c = args[0];
      need(c.is_seq() || c.is_tuple(), "expects a sequence or tuple");
      need(args[1].is_int(), "expects an integer index");
      if (hooks_.access && args[1].tracked()) {
        accesses_.push_back(AccessRecord::Access(args[1].track(), AccessTag::kIndex));
      }
      int64_t n = static_cast<int64_t>(c.size());
      int64_t i = args[1].as_int();
      if (i < 0) i += n;
      if (i < 0 || i >= n) Fail(ex, ErrorCode::kRuntime, "assignment index out of range");
      Value::Elems e = c.elems();
      e[i] = std::move(args[2]);
      return c.is_seq() ? Value::Seq(std::move(e)) : Value::Tuple(std::move(e));
    }
    case Builtin::kTupleArity:
      return Value::Bool(args[0].is_tuple() && args[1].is_int() &&
                         static_cast<int64_t>(args[0].size()) == args[1].as_int());
    case Builtin::kReplacePid:
      need(args[1].is_pid() && args[2].is_pid(), "expects process ids");
      return ReplacePid(args[0], args[1].as_pid(), args[2].as_pid());
    default:
      break;
  }
  Fail(ex, ErrorCode::kRuntime, "not a pure builtin");
}

Machine::Status Machine::Resume(Execution& ex, Value value) {
  if (ex.awaiting_value) {
    ex.stack.push_back(std::move(value));
    ex.awaiting_value = false;
  }
  return Run(ex);
}

Value Machine::Call(int unit, std::vector<Value> args) {
  Execution ex = Begin(unit, std::move(args));
  if (Run(ex) != Status::kReturned) {
    throw Error(ErrorCode::kRuntime, program_->units[unit].name + " blocked where blocking is not allowed");
  }
  return std::move(ex.result);
}

Machine::Status Machine::Run(Execution& ex) {
  const auto& units = program_->units;
  const bool tracing = hooks_.trace;
  const bool logging = hooks_.access;
  auto pop = [&ex]() {
    Value v = std::move(ex.stack.back());
    ex.stack.pop_back();
    return v;
  };
  while (true) {
    Execution::Frame& fr = ex.frames.back();
    const lang::CodeUnit& cu = units[fr.unit];
    const lang::Instruction ins = cu.code[fr.pc++];
    if (++ex.steps > hooks_.step_budget) {
      Fail(ex, ErrorCode::kStepBudget, "step budget of " + std::to_string(hooks_.step_budget) + " exceeded");
    }
    if (tracing && links_[fr.unit].traced) trace_.push_back({ins.op, ins.arg});
    switch (ins.op) {
      case Opcode::kPushConst:
        ex.stack.push_back(std::get<Value>(cu.constants[ins.arg]));
        break;
      case Opcode::kLoadLocal:
        ex.stack.push_back(ex.locals[fr.locals_base + ins.arg]);
        break;
      case Opcode::kStoreLocal:
        ex.locals[fr.locals_base + ins.arg] = pop();
        break;
      case Opcode::kLoadGlobal:
        ex.stack.push_back(globals_[ins.arg]);
        break;
      case Opcode::kStoreGlobal:
        globals_[ins.arg] = pop();
        break;
      case Opcode::kLoadField:
        ex.stack.push_back(fields_[ins.arg]);
        break;
      case Opcode::kStoreField:
        fields_[ins.arg] = pop();
        break;
      case Opcode::kBinaryOp: {
        Value b = pop();
        Value a = pop();
        ex.stack.push_back(Arith(ex, static_cast<ArithOp>(ins.arg), a, b));
        break;
      }
      case Opcode::kCompareOp: {
        Value b = pop();
        Value a = pop();
        ex.stack.push_back(Compare(ex, static_cast<CmpOp>(ins.arg), a, b));
        break;
      }
      case Opcode::kNot: {
        Value a = pop();
        if (logging && a.tracked()) accesses_.push_back(AccessRecord::Access(a.track(), AccessTag::kRead));
        ex.stack.push_back(Value::Bool(!a.Truthy()));
        break;
      }
      case Opcode::kJump:
        fr.pc = ins.arg;
        break;
      case Opcode::kJumpIfFalse: {
        Value a = pop();
        if (logging && a.tracked()) accesses_.push_back(AccessRecord::Access(a.track(), AccessTag::kRead));
        if (!a.Truthy()) fr.pc = ins.arg;
        break;
      }
      case Opcode::kCall: {
        const auto& callee = std::get<lang::Callee>(cu.constants[ins.arg]);
        const UnitLink& link = links_[fr.unit];
        if (link.call_unit[ins.arg] >= 0) {
          if (ex.frames.size() > 10000) Fail(ex, ErrorCode::kRuntime, "call depth exceeded");
          PushFrame(ex, link.call_unit[ins.arg], callee.arity);
          break;
        }
        if (link.builtin[ins.arg] < 0) Fail(ex, ErrorCode::kUnknownUnit, "unresolved callee " + callee.name);
        auto id = static_cast<Builtin>(link.builtin[ins.arg]);
        std::vector<Value> args(std::make_move_iterator(ex.stack.end() - callee.arity),
                                std::make_move_iterator(ex.stack.end()));
        ex.stack.resize(ex.stack.size() - callee.arity);
        if (!lang::GetBuiltin(id).needs_host) {
          ex.stack.push_back(PureBuiltin(ex, id, args));
          break;
        }
        if (!host_) Fail(ex, ErrorCode::kRuntime, callee.name + " requires a process context");
        Value result;
        if (!host_->CallBuiltin(id, args, &result)) {
          ex.awaiting_value = true;
          return Status::kBlocked;
        }
        ex.stack.push_back(std::move(result));
        break;
      }
      case Opcode::kReturn: {
        Value v = pop();
        Execution::Frame done = ex.frames.back();
        ex.frames.pop_back();
        ex.stack.resize(done.stack_base);
        ex.locals.resize(done.locals_base);
        if (ex.frames.empty()) {
          ex.result = std::move(v);
          ex.done = true;
          return Status::kReturned;
        }
        ex.stack.push_back(std::move(v));
        break;
      }
      case Opcode::kBuildTuple:
      case Opcode::kBuildSeq:
      case Opcode::kBuildSet: {
        Value::Elems e(std::make_move_iterator(ex.stack.end() - ins.arg),
                       std::make_move_iterator(ex.stack.end()));
        ex.stack.resize(ex.stack.size() - ins.arg);
        ex.stack.push_back(ins.op == Opcode::kBuildTuple ? Value::Tuple(std::move(e))
                           : ins.op == Opcode::kBuildSeq ? Value::Seq(std::move(e))
                                                         : Value::Set(std::move(e)));
        break;
      }
      case Opcode::kSetAdd:
      case Opcode::kSetDel: {
        Value e = pop();
        Value s = pop();
        if (!s.is_set()) Fail(ex, ErrorCode::kType, std::string("add/del on ") + Value::KindName(s.kind()));
        ex.stack.push_back(ins.op == Opcode::kSetAdd ? s.SetWith(e) : s.SetWithout(e));
        break;
      }
      case Opcode::kIterNew: {
        Value c = pop();
        if (c.is_str()) {
          if (logging && c.tracked()) accesses_.push_back(AccessRecord::Access(c.track(), AccessTag::kIterate));
          Value::Elems chars;
          for (char ch : c.as_str()) chars.push_back(CharValue(static_cast<unsigned char>(ch)));
          ex.stack.push_back(Value::Iter(std::make_shared<const Value::Elems>(std::move(chars))));
        } else if (c.is_collection()) {
          ex.stack.push_back(Value::Iter(c.elems_ptr()));
        } else {
          Fail(ex, ErrorCode::kType, std::string("cannot iterate over ") + Value::KindName(c.kind()));
        }
        break;
      }
      case Opcode::kIterNext: {
        Value& it = ex.stack.back();
        if (it.IterDone()) {
          ex.stack.pop_back();
          fr.pc = ins.arg;
        } else {
          Value cur = it.IterCurrent();
          it.IterAdvance();
          ex.stack.push_back(std::move(cur));
        }
        break;
      }
      case Opcode::kSend: {
        Value dest = pop();
        Value msg = pop();
        if (!host_) Fail(ex, ErrorCode::kRuntime, "send requires a process context");
        host_->Send(msg, dest);
        break;
      }
      case Opcode::kYieldPoint: {
        Value timeout = ins.arg == 1 ? pop() : Value::Absent();
        if (!host_) Fail(ex, ErrorCode::kRuntime, "yield point requires a process context");
        if (!host_->YieldPoint(ins.arg == 1, timeout)) return Status::kBlocked;
        break;
      }
      case Opcode::kCount: {
        Value c = pop();
        if (!(c.is_str() || c.is_collection())) {
          Fail(ex, ErrorCode::kType, std::string("count of ") + Value::KindName(c.kind()));
        }
        if (logging && c.tracked()) accesses_.push_back(AccessRecord::Access(c.track(), AccessTag::kRead));
        ex.stack.push_back(Value::Int(static_cast<int64_t>(c.size())));
        break;
      }
      case Opcode::kNop:
        break;
    }
  }
}

}  // namespace algodiv::vm
