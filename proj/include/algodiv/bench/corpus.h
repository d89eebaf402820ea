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

#ifndef ALGODIV_BENCH_CORPUS_H_
#define ALGODIV_BENCH_CORPUS_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "algodiv/core/value.h"
#include "algodiv/sync/record.h"

namespace algodiv::bench {

enum class BenchKind { kSequential, kDistributed };

struct BenchVariant {
  std::string name;    // Also the program name in simulator configs.
  std::string source;  // Mini text.
};

struct Benchmark {
  std::string name;
  BenchKind kind = BenchKind::kSequential;
  std::string entry;  // Sequential entry function, or "main".
  std::vector<BenchVariant> variants;
  // Distributed only: process types to diversify and un-synchronized kinds.
  std::vector<std::string> types;
  std::vector<std::string> unsync;
  // Entry arguments for input `seed`.
  std::function<std::vector<Value>(uint64_t seed)> input;
  // Sequential oracle: nullopt when `output` is correct for `input`.
  std::function<std::optional<std::string>(const std::vector<Value>& input, const Value& output)>
      check_output;
  // Distributed oracle over one run.
  std::function<std::optional<std::string>(const std::vector<Value>& input,
                                           const sync::ExecutionRecord& rec)>
      check_run;
};

// Built-in corpus, in a fixed order.
std::vector<std::string> BenchmarkNames();
// Throws kUnknownBenchmark.
Benchmark LoadBenchmark(const std::string& name);

// A contributed benchmark described by a JSON manifest:
//   {"name", "kind": "sequential"|"distributed", "entry",
//    "variants": [{"name", "file"}], "inputs": [[args...], ...],
//    "types": [...], "unsync": [...]}
// Sequential manifests use an agreement oracle (all variants equal the
// first variant's output); distributed ones require a clean, complete run.
Benchmark LoadManifest(const std::filesystem::path& path);

// corpus/*.mini by file stem, generated at build time.
const std::vector<std::pair<std::string, std::string>>& EmbeddedSources();
// Throws kUnknownBenchmark when no such file was embedded.
const std::string& CorpusSource(const std::string& stem);

// Shared distributed checks: quiescence, no divergence, every process done.
std::optional<std::string> CheckCleanRun(const sync::ExecutionRecord& rec);

}  // namespace algodiv::bench

#endif  // ALGODIV_BENCH_CORPUS_H_
