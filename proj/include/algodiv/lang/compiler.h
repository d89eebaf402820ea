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

#ifndef ALGODIV_LANG_COMPILER_H_
#define ALGODIV_LANG_COMPILER_H_

#include "algodiv/lang/ast.h"
#include "algodiv/lang/bytecode.h"

namespace algodiv::lang {

// Lowers an AST to bytecode. In kSync mode every send goes through the
// generated `send_sync` method, every yield point and await wait through
// `yield_sync`, and setup takes a trailing gateway parameter. The result is
// verified before it is returned. Throws Error(kCompile | kUnresolvedName |
// kArity).
CompiledProgram Compile(const Ast& ast, CompileMode mode);

// Lexical name resolution only; throws Error(kUnresolvedName).
void CheckNames(const Ast& ast);

// Names reserved for the synchronized-execution transformation.
inline constexpr const char* kGatewayField = "$gateway";
inline constexpr const char* kNumYieldsField = "$num_yields";
inline constexpr const char* kReceivedField = "$received";
inline constexpr const char* kSendSync = "send_sync";
inline constexpr const char* kYieldSync = "yield_sync";

}  // namespace algodiv::lang

#endif  // ALGODIV_LANG_COMPILER_H_
