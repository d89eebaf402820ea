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

#ifndef ALGODIV_METRICS_EDIT_DISTANCE_H_
#define ALGODIV_METRICS_EDIT_DISTANCE_H_

#include <cstdint>
#include <span>

namespace algodiv::metrics {

// Unit-cost Levenshtein distance over token ids.

// Row-by-row dynamic programming; O(|a||b|) time, O(min) space.
size_t LevenshteinDp(std::span<const uint32_t> a, std::span<const uint32_t> b);

// Myers/Hyyrö bit-vector algorithm over 64-bit blocks; O(|a||b|/64) time.
// Falls back to LevenshteinDp when the match-vector table would be too large.
size_t LevenshteinBitParallel(std::span<const uint32_t> a, std::span<const uint32_t> b);

inline size_t Levenshtein(std::span<const uint32_t> a, std::span<const uint32_t> b) {
  return LevenshteinBitParallel(a, b);
}

}  // namespace algodiv::metrics

#endif  // ALGODIV_METRICS_EDIT_DISTANCE_H_
