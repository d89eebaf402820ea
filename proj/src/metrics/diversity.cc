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

#include "algodiv/metrics/diversity.h"

#include <algorithm>
#include <map>
#include <tuple>

#include "algodiv/core/error.h"
#include "algodiv/metrics/edit_distance.h"

namespace algodiv::metrics {
namespace {

template <typename T, typename KeyFn>
std::pair<std::vector<uint32_t>, std::vector<uint32_t>> Densify(const std::vector<T>& a,
                                                                 const std::vector<T>& b, KeyFn key) {
  using Key = decltype(key(a.front()));
  std::map<Key, uint32_t> ids;
  auto map = [&](const std::vector<T>& v) {
    std::vector<uint32_t> out;
    out.reserve(v.size());
    for (const T& t : v) {
      auto [it, inserted] = ids.try_emplace(key(t), static_cast<uint32_t>(ids.size()));
      out.push_back(it->second);
    }
    return out;
  };
  auto ta = map(a);
  auto tb = map(b);
  return {std::move(ta), std::move(tb)};
}

}  // namespace

double CodeDiversity(const Fingerprint& a, const Fingerprint& b) {
  if (!(a.params == b.params)) {
    throw Error(ErrorCode::kParameterMismatch, "fingerprints built with different (n, w, winnow)");
  }
  if (a.hashes.empty() && b.hashes.empty()) return 0.0;
  std::vector<uint64_t> common;
  std::set_intersection(a.hashes.begin(), a.hashes.end(), b.hashes.begin(), b.hashes.end(),
                        std::back_inserter(common));
  size_t uni = a.hashes.size() + b.hashes.size() - common.size();
  return 1.0 - static_cast<double>(common.size()) / static_cast<double>(uni);
}

double NormalizedDistance(size_t distance, size_t len_a, size_t len_b) {
  if (len_a + len_b == 0) return 0.0;
  return static_cast<double>(distance) / (static_cast<double>(len_a + len_b) / 2.0);
}

std::pair<std::vector<uint32_t>, std::vector<uint32_t>> TraceTokens(const vm::Trace& a,
                                                                    const vm::Trace& b) {
  return Densify(a, b, [](const vm::TraceEvent& e) { return std::pair(static_cast<int>(e.op), e.arg); });
}

std::pair<std::vector<uint32_t>, std::vector<uint32_t>> AccessTokens(const vm::AccessLog& a,
                                                                     const vm::AccessLog& b) {
  return Densify(a, b, [](const vm::AccessRecord& r) {
    return std::tuple(static_cast<int>(r.kind), static_cast<int>(r.tag), static_cast<int>(r.id.kind),
                      r.id.host, r.id.proc, r.id.msg, r.id.obj);
  });
}

double TraceDiversity(const vm::Trace& a, const vm::Trace& b) {
  auto [ta, tb] = TraceTokens(a, b);
  return NormalizedDistance(Levenshtein(ta, tb), ta.size(), tb.size());
}

double AccessDiversity(const vm::AccessLog& a, const vm::AccessLog& b) {
  auto [ta, tb] = AccessTokens(a, b);
  return NormalizedDistance(Levenshtein(ta, tb), ta.size(), tb.size());
}

}  // namespace algodiv::metrics
