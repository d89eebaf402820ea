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

#include "algodiv/vm/trace_verifier.h"

#include <set>
#include <utility>

namespace algodiv::vm {
namespace {

using lang::Opcode;

// Call stack of (unit, pc) plus the index of the active root.
struct State {
  size_t root = 0;
  std::vector<std::pair<int, int>> stack;
  auto operator<=>(const State&) const = default;
};

}  // namespace

TraceCheck VerifyTrace(const lang::CompiledProgram& program, const std::vector<std::string>& roots,
                       const Trace& trace) {
  std::vector<int> root_units;
  for (const std::string& r : roots) {
    int u = program.FindUnitIndex(r);
    if (u < 0) return {false, 0, "unknown root unit " + r};
    root_units.push_back(u);
  }
  std::set<State> states;
  if (!root_units.empty()) states.insert(State{0, {{root_units[0], 0}}});
  for (size_t i = 0; i < trace.size(); ++i) {
    const TraceEvent& ev = trace[i];
    std::set<State> next;
    for (const State& s : states) {
      if (s.stack.empty()) continue;
      auto [u, pc] = s.stack.back();
      const lang::CodeUnit& cu = program.units[u];
      if (pc < 0 || pc >= static_cast<int>(cu.code.size())) continue;
      const lang::Instruction& ins = cu.code[pc];
      if (ins.op != ev.op || ins.arg != ev.arg) continue;
      auto go = [&](int target) {
        State t = s;
        t.stack.back().second = target;
        next.insert(std::move(t));
      };
      switch (ins.op) {
        case Opcode::kJump:
          go(ins.arg);
          break;
        case Opcode::kJumpIfFalse:
        case Opcode::kIterNext:
          go(pc + 1);
          go(ins.arg);
          break;
        case Opcode::kCall: {
          const auto& callee = std::get<lang::Callee>(cu.constants[ins.arg]);
          int target = callee.kind == lang::Callee::Kind::kBuiltin
                           ? -1
                           : program.FindUnitIndex(callee.name);
          State t = s;
          t.stack.back().second = pc + 1;
          if (target >= 0) t.stack.push_back({target, 0});
          next.insert(std::move(t));
          break;
        }
        case Opcode::kReturn: {
          State t = s;
          t.stack.pop_back();
          if (t.stack.empty() && t.root + 1 < root_units.size()) {
            ++t.root;
            t.stack.push_back({root_units[t.root], 0});
          }
          next.insert(std::move(t));
          break;
        }
        default:
          go(pc + 1);
          break;
      }
    }
    if (next.empty()) {
      return {false, i,
              "event " + std::to_string(i) + " (" + lang::OpcodeName(ev.op) + " " +
                  std::to_string(ev.arg) + ") is not a legal successor"};
    }
    states = std::move(next);
  }
  for (const State& s : states) {
    if (s.stack.empty() && s.root + 1 == root_units.size()) return {};
  }
  return {false, trace.size(), "trace ends before all roots returned"};
}

}  // namespace algodiv::vm
