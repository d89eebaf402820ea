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

#include "algodiv/core/error.h"

namespace algodiv {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSyntax: return "syntax_error";
    case ErrorCode::kUnresolvedName: return "unresolved_name";
    case ErrorCode::kCompile: return "compile_error";
    case ErrorCode::kVerify: return "verify_error";
    case ErrorCode::kType: return "type_error";
    case ErrorCode::kArity: return "arity_mismatch";
    case ErrorCode::kStepBudget: return "step_budget_exceeded";
    case ErrorCode::kUnknownUnit: return "unknown_unit";
    case ErrorCode::kRuntime: return "runtime_error";
    case ErrorCode::kConfig: return "config_error";
    case ErrorCode::kParameterMismatch: return "parameter_mismatch";
    case ErrorCode::kInsufficientVariants: return "insufficient_variants";
    case ErrorCode::kUnknownBenchmark: return "unknown_benchmark";
    case ErrorCode::kOracle: return "oracle_failure";
    case ErrorCode::kIo: return "io_error";
    case ErrorCode::kUsage: return "usage_error";
  }
  return "error";
}

}  // namespace algodiv
