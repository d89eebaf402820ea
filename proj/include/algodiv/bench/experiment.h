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

#ifndef ALGODIV_BENCH_EXPERIMENT_H_
#define ALGODIV_BENCH_EXPERIMENT_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "algodiv/bench/corpus.h"
#include "algodiv/ild/ild.h"
#include "algodiv/lang/ast.h"
#include "algodiv/metrics/fingerprint.h"
#include "algodiv/metrics/report.h"
#include "algodiv/sync/config.h"
#include "json.hpp"

namespace algodiv::bench {

struct ExperimentConfig {
  std::vector<std::string> benchmarks = BenchmarkNames();
  std::vector<std::filesystem::path> manifests;
  std::vector<metrics::MetricKind> metrics = {metrics::MetricKind::kCode, metrics::MetricKind::kTrace,
                                              metrics::MetricKind::kAccess};
  std::vector<metrics::Level> levels = {metrics::Level::kAlgo, metrics::Level::kImpl, metrics::Level::kBoth};
  ild::IldProfile profile;
  // Values are averaged over ILD seeds, sequential input seeds, and (for
  // distributed benchmarks) scheduler seeds.
  std::vector<uint64_t> ild_seeds = {1};
  std::vector<uint64_t> input_seeds = {1};
  std::vector<uint64_t> scheduler_seeds = {1};
  // Every sequential variant must pass its oracle on inputs 1..oracle_inputs.
  int oracle_inputs = 10;
  // Distributed dynamic metrics: co-execute each pair under one gateway per
  // process (true) or run the two sides as separate plain systems.
  bool synchronized = true;
  metrics::FingerprintParams fingerprint;
  sync::LatencyModel latency{1, 2};
  std::string tsv_path;
  std::string json_path;
};

// Relative paths resolve against `base_dir`. Throws kConfig.
ExperimentConfig ExperimentConfigFromJson(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
nlohmann::json ExperimentConfigToJson(const ExperimentConfig& cfg);

struct BenchmarkFailure {
  std::string benchmark;
  std::string variant;
  std::string reason;
};

struct ExperimentResult {
  std::vector<std::string> benchmarks;  // Evaluation order, failures included.
  std::vector<metrics::DiversityReport> reports;
  std::vector<BenchmarkFailure> failures;
};

// A failing benchmark contributes no rows and one failure entry.
ExperimentResult RunExperiment(const ExperimentConfig& cfg);
nlohmann::json ExperimentResultToJson(const ExperimentResult& result, const ExperimentConfig& cfg);

// Building blocks, also used by the tests.

// Parsed variant `i`, or its ILD transform under (profile, seed).
lang::Ast VariantAst(const Benchmark& b, int i);
lang::Ast IldVariantAst(const Benchmark& b, int i, const ild::IldProfile& profile, uint64_t seed);
// External entry arguments for an ILD variant: arg_reorder also swaps the
// entry function's parameters.
std::vector<Value> IldArgs(const ild::IldProfile& profile, std::vector<Value> args);

struct Side {
  std::string name;  // Program name; must be unique within one system.
  std::shared_ptr<const lang::Ast> ast;
  bool swap_args = false;  // ILD side with arg_reorder: see IldArgs.
};

// One plain system running `side` for every process; main runs from `side`.
sync::SystemConfig PlainSystemConfig(const Benchmark& b, const Side& side, std::vector<Value> args, uint64_t seed,
                                     sync::LatencyModel latency = {1, 2});
// Every process type of `b` diversified as [a, c]; main runs from variant 0
// of the benchmark.
sync::SystemConfig CoExecutionConfig(const Benchmark& b, const Side& a, const Side& c, std::vector<Value> args,
                                     uint64_t seed, sync::LatencyModel latency = {1, 2});

}  // namespace algodiv::bench

#endif  // ALGODIV_BENCH_EXPERIMENT_H_
