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

#include "algodiv/vm/execute.h"

#include "algodiv/vm/tracking.h"

namespace algodiv::vm {

ExecuteResult Execute(std::shared_ptr<const lang::CompiledProgram> program, std::string_view entry,
                      std::vector<Value> args, const ExecuteOptions& options) {
  int unit = program->FindUnitIndex(entry);
  if (unit < 0 || entry == lang::kGlobalsUnit) {
    throw Error(ErrorCode::kUnknownUnit, "unknown unit '" + std::string(entry) + "'");
  }
  if (options.track_inputs) {
    IdAllocator ids = IdAllocator::ForInputs();
    for (Value& a : args) a = WrapTracked(a, ids);
  }
  Hooks hooks{options.trace, options.access, options.unit_filter, options.step_budget};
  Machine machine(std::move(program), std::move(hooks));
  machine.InitGlobals();
  Execution ex = machine.Begin(unit, std::move(args));
  if (machine.Run(ex) != Machine::Status::kReturned) {
    throw Error(ErrorCode::kRuntime, "sequential execution blocked");
  }
  ExecuteResult out;
  out.result = ex.result.Untracked();
  out.trace = std::move(machine.trace());
  out.accesses = std::move(machine.accesses());
  out.steps = ex.steps;
  return out;
}

ExecuteResult Execute(const lang::CompiledProgram& program, std::string_view entry,
                      std::vector<Value> args, const ExecuteOptions& options) {
  return Execute(std::make_shared<const lang::CompiledProgram>(program), entry, std::move(args),
                 options);
}

}  // namespace algodiv::vm
