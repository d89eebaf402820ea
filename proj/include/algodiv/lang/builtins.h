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

#ifndef ALGODIV_LANG_BUILTINS_H_
#define ALGODIV_LANG_BUILTINS_H_

#include <optional>
#include <string_view>

namespace algodiv::lang {

enum class Builtin {
  // Pure.
  kRange, kOrd, kChr, kMin, kMax, kAbs, kAppend, kSeq, kStr,
  kSetItem, kTupleArity, kReplacePid,
  // Runtime services (need a host).
  kLogicalTime, kSelfId, kOutput, kCsEnter, kCsExit, kSetup, kStart, kNew,
  kNow, kAwaitExit, kGwSend, kGwYield,
};

struct BuiltinInfo {
  Builtin id;
  std::string_view name;
  int arity;
  bool needs_host;
};

const BuiltinInfo* FindBuiltin(std::string_view name);
const BuiltinInfo& GetBuiltin(Builtin id);

}  // namespace algodiv::lang

#endif  // ALGODIV_LANG_BUILTINS_H_
