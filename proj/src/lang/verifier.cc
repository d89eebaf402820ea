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

#include <deque>

#include "algodiv/core/error.h"
#include "algodiv/lang/builtins.h"
#include "algodiv/lang/bytecode.h"

namespace algodiv::lang {
namespace {

[[noreturn]] void Fail(const CodeUnit& u, size_t pc, const std::string& msg) {
  throw Error(ErrorCode::kVerify, u.name + "@" + std::to_string(pc) + ": " + msg);
}

void VerifyUnit(const CompiledProgram& p, const CodeUnit& u) {
  if (u.code.empty()) throw Error(ErrorCode::kVerify, u.name + ": empty code unit");
  if (u.num_params > u.num_locals()) Fail(u, 0, "more params than locals");
  const ProcessInfo* proc = nullptr;
  std::string owner = u.owner();
  if (!owner.empty()) proc = p.FindProcess(owner);
  const int n = static_cast<int>(u.code.size());

  // Operand ranges and per-instruction stack effect.
  std::vector<int> pops(n), pushes(n);
  for (int pc = 0; pc < n; ++pc) {
    const Instruction& ins = u.code[pc];
    int a = ins.arg;
    auto in_range = [&](int limit, const char* what) {
      if (a < 0 || a >= limit) Fail(u, pc, std::string(what) + " index out of range");
    };
    int pop = 0, push = 0;
    switch (ins.op) {
      case Opcode::kPushConst:
        in_range(static_cast<int>(u.constants.size()), "constant");
        if (!std::holds_alternative<Value>(u.constants[a])) Fail(u, pc, "PUSH_CONST of a callee");
        push = 1;
        break;
      case Opcode::kLoadLocal: in_range(u.num_locals(), "local"); push = 1; break;
      case Opcode::kStoreLocal: in_range(u.num_locals(), "local"); pop = 1; break;
      case Opcode::kLoadGlobal: in_range(static_cast<int>(p.globals.size()), "global"); push = 1; break;
      case Opcode::kStoreGlobal: in_range(static_cast<int>(p.globals.size()), "global"); pop = 1; break;
      case Opcode::kLoadField:
      case Opcode::kStoreField:
        if (!proc) Fail(u, pc, "field access outside a process type");
        in_range(static_cast<int>(proc->fields.size()), "field");
        (ins.op == Opcode::kLoadField ? push : pop) = 1;
        break;
      case Opcode::kBinaryOp: in_range(6, "binary op"); pop = 2; push = 1; break;
      case Opcode::kCompareOp: in_range(8, "compare op"); pop = 2; push = 1; break;
      case Opcode::kNot:
      case Opcode::kCount:
      case Opcode::kIterNew: pop = 1; push = 1; break;
      case Opcode::kJump: in_range(n, "jump target"); break;
      case Opcode::kJumpIfFalse: in_range(n, "jump target"); pop = 1; break;
      case Opcode::kIterNext: in_range(n, "jump target"); push = 1; break;
      case Opcode::kCall: {
        in_range(static_cast<int>(u.constants.size()), "constant");
        const auto* c = std::get_if<Callee>(&u.constants[a]);
        if (!c) Fail(u, pc, "CALL of a non-callee constant");
        if (c->kind == Callee::Kind::kBuiltin) {
          const BuiltinInfo* b = FindBuiltin(c->name);
          if (!b) Fail(u, pc, "unknown builtin " + c->name);
          if (b->arity != c->arity) Fail(u, pc, "builtin arity mismatch");
        } else {
          const CodeUnit* target = p.FindUnit(c->name);
          if (!target) Fail(u, pc, "call to unknown unit " + c->name);
          if (target->num_params != c->arity) Fail(u, pc, "call arity mismatch for " + c->name);
        }
        pop = c->arity;
        push = 1;
        break;
      }
      case Opcode::kReturn: pop = 1; break;
      case Opcode::kBuildTuple:
      case Opcode::kBuildSeq:
      case Opcode::kBuildSet:
        if (a < 0) Fail(u, pc, "negative element count");
        pop = a;
        push = 1;
        break;
      case Opcode::kSetAdd:
      case Opcode::kSetDel: pop = 2; push = 1; break;
      case Opcode::kSend: pop = 2; break;
      case Opcode::kYieldPoint:
        if (a != 0 && a != 1) Fail(u, pc, "YIELD_POINT operand must be 0 or 1");
        pop = a;
        break;
      case Opcode::kNop: break;
    }
    pops[pc] = pop;
    pushes[pc] = push;
  }

  // Stack-depth dataflow; every path must reach RETURN.
  std::vector<int> depth(n, -1);
  std::deque<int> work;
  auto flow = [&](int from, int to, int d) {
    if (to >= n) Fail(u, from, "control falls off the end of the unit");
    if (depth[to] < 0) {
      depth[to] = d;
      work.push_back(to);
    } else if (depth[to] != d) {
      Fail(u, to, "inconsistent stack depth at merge");
    }
  };
  depth[0] = 0;
  work.push_back(0);
  while (!work.empty()) {
    int pc = work.front();
    work.pop_front();
    const Instruction& ins = u.code[pc];
    int d = depth[pc];
    if (d < pops[pc]) Fail(u, pc, "stack underflow");
    int after = d - pops[pc] + pushes[pc];
    switch (ins.op) {
      case Opcode::kReturn: break;
      case Opcode::kJump: flow(pc, ins.arg, after); break;
      case Opcode::kJumpIfFalse:
        flow(pc, pc + 1, after);
        flow(pc, ins.arg, after);
        break;
      case Opcode::kIterNext:
        flow(pc, pc + 1, after);
        flow(pc, ins.arg, d - 1);
        break;
      default: flow(pc, pc + 1, after);
    }
  }
}

}  // namespace

void Verify(const CompiledProgram& p) {
  for (size_t i = 0; i < p.units.size(); ++i) {
    for (size_t j = i + 1; j < p.units.size(); ++j) {
      if (p.units[i].name == p.units[j].name) {
        throw Error(ErrorCode::kVerify, "duplicate unit name " + p.units[i].name);
      }
    }
    VerifyUnit(p, p.units[i]);
  }
  for (const ProcessInfo& pi : p.processes) {
    for (const HandlerInfo& h : pi.handlers) {
      if (!p.FindUnit(h.unit)) throw Error(ErrorCode::kVerify, "handler table names missing unit " + h.unit);
    }
    if (!p.FindUnit(pi.setup_unit) || !p.FindUnit(pi.run_unit)) {
      throw Error(ErrorCode::kVerify, "process " + pi.name + " lacks setup or run unit");
    }
  }
}

}  // namespace algodiv::lang
