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

#ifndef ALGODIV_VM_EXECUTE_H_
#define ALGODIV_VM_EXECUTE_H_

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "algodiv/core/value.h"
#include "algodiv/lang/bytecode.h"
#include "algodiv/vm/logs.h"
#include "algodiv/vm/machine.h"

namespace algodiv::vm {

struct ExecuteOptions {
  bool trace = false;
  bool access = false;
  // Wrap every argument with Seq ids, in argument order.
  bool track_inputs = false;
  std::vector<std::string> unit_filter;
  uint64_t step_budget = kDefaultStepBudget;
};

struct ExecuteResult {
  Value result;  // Untracked.
  Trace trace;
  AccessLog accesses;
  uint64_t steps = 0;
};

// Runs the globals initializer, then `entry` to completion.
ExecuteResult Execute(std::shared_ptr<const lang::CompiledProgram> program, std::string_view entry,
                      std::vector<Value> args, const ExecuteOptions& options = {});
ExecuteResult Execute(const lang::CompiledProgram& program, std::string_view entry,
                      std::vector<Value> args, const ExecuteOptions& options = {});

}  // namespace algodiv::vm

#endif  // ALGODIV_VM_EXECUTE_H_
