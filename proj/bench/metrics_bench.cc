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

// Edit-distance kernels and the pairwise report, serial against parallel.

#include <benchmark/benchmark.h>
#include <omp.h>

#include <vector>

#include "algodiv/core/random.h"
#include "algodiv/metrics/edit_distance.h"
#include "algodiv/metrics/report.h"

namespace algodiv::metrics {
namespace {

std::vector<uint32_t> RandomTokens(uint64_t seed, size_t n, uint32_t alphabet) {
  SplitMix64 rng(seed);
  std::vector<uint32_t> v(n);
  for (auto& x : v) x = static_cast<uint32_t>(rng.Below(alphabet));
  return v;
}

void BM_LevenshteinDp(benchmark::State& state) {
  auto a = RandomTokens(1, state.range(0), 16), b = RandomTokens(2, state.range(0), 16);
  for (auto _ : state) benchmark::DoNotOptimize(LevenshteinDp(a, b));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_LevenshteinDp)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

void BM_LevenshteinBitParallel(benchmark::State& state) {
  auto a = RandomTokens(1, state.range(0), 16), b = RandomTokens(2, state.range(0), 16);
  for (auto _ : state) benchmark::DoNotOptimize(LevenshteinBitParallel(a, b));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_LevenshteinBitParallel)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

// A `both`-level report over eight algorithms (56 pairs) of trace-sized
// token sequences; arg 1 is the OpenMP thread count.
void BM_PairwiseReport(benchmark::State& state) {
  const int algos = 8;
  std::vector<std::vector<uint32_t>> plain, ild;
  for (int i = 0; i < algos; ++i) {
    plain.push_back(RandomTokens(10 + i, 2000, 24));
    ild.push_back(RandomTokens(100 + i, 2000, 24));
  }
  std::vector<std::string> names(algos, "v");
  auto metric = [&](VariantRef a, VariantRef b) {
    const auto& x = a.ild ? ild[a.algo] : plain[a.algo];
    const auto& y = b.ild ? ild[b.algo] : plain[b.algo];
    return static_cast<double>(Levenshtein(x, y));
  };
  int before = omp_get_max_threads();
  omp_set_num_threads(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(PairwiseReport("bench", names, MetricKind::kTrace, Level::kBoth, metric).average);
  }
  omp_set_num_threads(before);
}
BENCHMARK(BM_PairwiseReport)->Arg(1)->Arg(2)->Arg(4)->UseRealTime();

}  // namespace
}  // namespace algodiv::metrics

BENCHMARK_MAIN();
