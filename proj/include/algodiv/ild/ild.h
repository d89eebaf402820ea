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

#ifndef ALGODIV_ILD_ILD_H_
#define ALGODIV_ILD_ILD_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "algodiv/core/random.h"
#include "algodiv/core/value.h"
#include "algodiv/lang/ast.h"
#include "json.hpp"

namespace algodiv::ild {

// Application order of ApplyIld.
enum class Transform { kFuncReorder, kArgReorder, kFieldReorder, kBranchReorder, kStmtReorder, kNopInsert };
inline constexpr int kNumTransforms = 6;
const char* TransformName(Transform t);
std::optional<Transform> TransformFromName(std::string_view name);

struct IldProfile {
  double nop_probability = 0.05;
  double swap_probability = 0.5;
  std::vector<Transform> enabled = {Transform::kFuncReorder,   Transform::kArgReorder,
                                    Transform::kFieldReorder,  Transform::kBranchReorder,
                                    Transform::kStmtReorder,   Transform::kNopInsert};
  uint64_t seed = 1;

  bool Enabled(Transform t) const;
};

nlohmann::json ProfileToJson(const IldProfile& p);
// Missing keys keep their defaults. Throws kConfig on invalid values.
IldProfile ProfileFromJson(const nlohmann::json& j);

// Calls whose arity did not match the callee; left untransformed.
struct ArgReorderIssue {
  std::string callee;
  lang::Pos pos;
};

lang::Ast NopInsert(lang::Ast ast, double p, SplitMix64& rng);
lang::Ast StmtReorder(lang::Ast ast, double p, SplitMix64& rng);
lang::Ast BranchReorder(lang::Ast ast, double p, SplitMix64& rng);
lang::Ast FuncReorder(lang::Ast ast, double p, SplitMix64& rng);
lang::Ast ArgReorder(lang::Ast ast, std::vector<ArgReorderIssue>* issues = nullptr);
lang::Ast FieldReorder(lang::Ast ast);

lang::Ast ApplyIld(const lang::Ast& ast, const IldProfile& profile);

// The pairwise swap (0<->1, 2<->3, ...) applied to parameter lists; an
// involution. The harness applies it to external entry arguments.
template <typename T>
std::vector<T> SwapPairs(std::vector<T> v) {
  for (size_t i = 0; i + 1 < v.size(); i += 2) std::swap(v[i], v[i + 1]);
  return v;
}

// True when the two statements may be exchanged without changing behavior.
bool Independent(const lang::Stmt& a, const lang::Stmt& b);

}  // namespace algodiv::ild

#endif  // ALGODIV_ILD_ILD_H_
