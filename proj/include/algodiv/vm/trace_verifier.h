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

#ifndef ALGODIV_VM_TRACE_VERIFIER_H_
#define ALGODIV_VM_TRACE_VERIFIER_H_

#include <string>
#include <vector>

#include "algodiv/lang/bytecode.h"
#include "algodiv/vm/logs.h"

namespace algodiv::vm {

struct TraceCheck {
  bool ok = true;
  size_t failed_at = 0;  // Index of the first event with no legal predecessor state.
  std::string message;
};

// Replays `trace` against the control-flow graph of `program`, starting at
// each root unit in turn (e.g. {"<globals>", "main"}). Every event must be a
// legal successor of the previous one, and the trace must end with all roots
// returned. Intended for unfiltered traces of sequential runs.
TraceCheck VerifyTrace(const lang::CompiledProgram& program, const std::vector<std::string>& roots,
                       const Trace& trace);

}  // namespace algodiv::vm

#endif  // ALGODIV_VM_TRACE_VERIFIER_H_
