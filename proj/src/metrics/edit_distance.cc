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

#include "algodiv/metrics/edit_distance.h"

#include <algorithm>
#include <numeric>
#include <unordered_map>
#include <vector>

namespace algodiv::metrics {
namespace {

constexpr size_t kMaxPeqWords = size_t{1} << 24;

}  // namespace

size_t LevenshteinDp(std::span<const uint32_t> a, std::span<const uint32_t> b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<size_t> row(b.size() + 1);
  std::iota(row.begin(), row.end(), size_t{0});
  for (size_t i = 1; i <= a.size(); ++i) {
    size_t diag = row[0];
    row[0] = i;
    for (size_t j = 1; j <= b.size(); ++j) {
      size_t up = row[j];
      row[j] = std::min({up + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

size_t LevenshteinBitParallel(std::span<const uint32_t> a, std::span<const uint32_t> b) {
  // a is the pattern (rows), b the text (columns).
  if (a.size() > b.size()) std::swap(a, b);
  const size_t m = a.size();
  if (m == 0) return b.size();
  const size_t blocks = (m + 63) / 64;

  // Dense symbol ids for the pattern alphabet; text symbols outside it match nothing.
  std::unordered_map<uint32_t, uint32_t> sym;
  for (uint32_t t : a) sym.try_emplace(t, static_cast<uint32_t>(sym.size()));
  if (sym.size() * blocks > kMaxPeqWords) return LevenshteinDp(a, b);
  std::vector<uint64_t> peq(sym.size() * blocks, 0);
  for (size_t i = 0; i < m; ++i) peq[sym[a[i]] * blocks + i / 64] |= uint64_t{1} << (i % 64);
  const std::vector<uint64_t> zero(blocks, 0);

  std::vector<uint64_t> pv(blocks, ~uint64_t{0});
  std::vector<uint64_t> mv(blocks, 0);
  const uint64_t last_high = uint64_t{1} << ((m - 1) % 64);
  size_t score = m;
  for (uint32_t c : b) {
    auto it = sym.find(c);
    const uint64_t* eqs = it == sym.end() ? zero.data() : &peq[it->second * blocks];
    int hin = 1;  // Top boundary row grows by one per column.
    for (size_t k = 0; k < blocks; ++k) {
      const uint64_t high = k + 1 == blocks ? last_high : uint64_t{1} << 63;
      uint64_t eq = eqs[k];
      uint64_t p = pv[k], mm = mv[k];
      uint64_t xv = eq | mm;
      if (hin < 0) eq |= 1;
      uint64_t xh = (((eq & p) + p) ^ p) | eq;
      uint64_t ph = mm | ~(xh | p);
      uint64_t mh = p & xh;
      int hout = 0;
      if (ph & high) hout = 1;
      if (mh & high) hout = -1;
      ph <<= 1;
      mh <<= 1;
      if (hin < 0) {
        mh |= 1;
      } else if (hin > 0) {
        ph |= 1;
      }
      pv[k] = mh | ~(xv | ph);
      mv[k] = ph & xv;
      hin = hout;
    }
    score += hin;
  }
  return score;
}

}  // namespace algodiv::metrics
