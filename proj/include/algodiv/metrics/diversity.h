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

#ifndef ALGODIV_METRICS_DIVERSITY_H_
#define ALGODIV_METRICS_DIVERSITY_H_

#include <cstdint>
#include <utility>
#include <vector>

#include "algodiv/metrics/fingerprint.h"
#include "algodiv/vm/logs.h"

namespace algodiv::metrics {

// 1 - Jaccard similarity; 0 when both are empty. Throws kParameterMismatch
// when the fingerprints were built with different parameters.
double CodeDiversity(const Fingerprint& a, const Fingerprint& b);

// Edit distance divided by the average length; 0 when both are empty.
double NormalizedDistance(size_t distance, size_t len_a, size_t len_b);

double TraceDiversity(const vm::Trace& a, const vm::Trace& b);
double AccessDiversity(const vm::AccessLog& a, const vm::AccessLog& b);

// Maps both sequences onto shared dense token ids (exact equality).
std::pair<std::vector<uint32_t>, std::vector<uint32_t>> TraceTokens(const vm::Trace& a,
                                                                    const vm::Trace& b);
std::pair<std::vector<uint32_t>, std::vector<uint32_t>> AccessTokens(const vm::AccessLog& a,
                                                                     const vm::AccessLog& b);

}  // namespace algodiv::metrics

#endif  // ALGODIV_METRICS_DIVERSITY_H_
