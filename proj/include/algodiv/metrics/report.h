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

#ifndef ALGODIV_METRICS_REPORT_H_
#define ALGODIV_METRICS_REPORT_H_

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace algodiv::metrics {

enum class MetricKind { kCode, kTrace, kAccess };
enum class Level { kAlgo, kImpl, kBoth };

const char* MetricKindName(MetricKind m);  // code, trace, input_access
const char* LevelName(Level l);            // algo, impl, both
std::optional<MetricKind> MetricKindFromName(std::string_view name);
std::optional<Level> LevelFromName(std::string_view name);

// One side of a pair: algorithm index and whether it is the ILD variant.
struct VariantRef {
  int algo = 0;
  bool ild = false;
  bool operator==(const VariantRef&) const = default;
};

struct PairValue {
  VariantRef a;
  VariantRef b;
  std::string label_a;
  std::string label_b;
  double value = 0.0;
};

struct DiversityReport {
  std::string benchmark;
  MetricKind metric = MetricKind::kCode;
  Level level = Level::kAlgo;
  std::vector<PairValue> pairs;
  double average = 0.0;
};

// Pairs a level prescribes for `num_algos` algorithms, in a fixed order:
// algo: (ai, aj) i<j; impl: (ai, ild(ai)); both: (ai, ild(aj)) i!=j.
// Throws kInsufficientVariants for algo/both with fewer than two algorithms.
std::vector<std::pair<VariantRef, VariantRef>> LevelPairs(Level level, int num_algos);

// Evaluates `metric` on every pair of the level, in parallel, and averages.
// `metric` must be safe to call concurrently.
DiversityReport PairwiseReport(const std::string& benchmark, const std::vector<std::string>& algo_names,
                               MetricKind kind, Level level,
                               const std::function<double(VariantRef, VariantRef)>& metric);

// Rows are metric x level, columns are `columns` followed by any other
// benchmark in first-seen order; the last column is the mean over the row's
// benchmarks.
std::string ReportsToTsv(const std::vector<DiversityReport>& reports, const std::vector<std::string>& columns = {});
nlohmann::json ReportToJson(const DiversityReport& report);
nlohmann::json ReportsToJson(const std::vector<DiversityReport>& reports);

}  // namespace algodiv::metrics

#endif  // ALGODIV_METRICS_REPORT_H_
