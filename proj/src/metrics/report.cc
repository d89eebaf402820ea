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

#include "algodiv/metrics/report.h"

#include <algorithm>
#include <cstdio>
#include <map>

#include "algodiv/core/error.h"

namespace algodiv::metrics {

const char* MetricKindName(MetricKind m) {
  switch (m) {
    case MetricKind::kCode: return "code";
    case MetricKind::kTrace: return "trace";
    case MetricKind::kAccess: return "input_access";
  }
  return "?";
}

const char* LevelName(Level l) {
  switch (l) {
    case Level::kAlgo: return "algo";
    case Level::kImpl: return "impl";
    case Level::kBoth: return "both";
  }
  return "?";
}

std::optional<MetricKind> MetricKindFromName(std::string_view name) {
  if (name == "code") return MetricKind::kCode;
  if (name == "trace") return MetricKind::kTrace;
  if (name == "access" || name == "input_access") return MetricKind::kAccess;
  return std::nullopt;
}

std::optional<Level> LevelFromName(std::string_view name) {
  if (name == "algo") return Level::kAlgo;
  if (name == "impl") return Level::kImpl;
  if (name == "both") return Level::kBoth;
  return std::nullopt;
}

std::vector<std::pair<VariantRef, VariantRef>> LevelPairs(Level level, int num_algos) {
  if (level != Level::kImpl && num_algos < 2) {
    throw Error(ErrorCode::kInsufficientVariants,
                std::string("level ") + LevelName(level) + " needs at least two algorithms");
  }
  if (num_algos < 1) throw Error(ErrorCode::kInsufficientVariants, "no algorithms");
  std::vector<std::pair<VariantRef, VariantRef>> out;
  for (int i = 0; i < num_algos; ++i) {
    switch (level) {
      case Level::kAlgo:
        for (int j = i + 1; j < num_algos; ++j) out.push_back({{i, false}, {j, false}});
        break;
      case Level::kImpl:
        out.push_back({{i, false}, {i, true}});
        break;
      case Level::kBoth:
        for (int j = 0; j < num_algos; ++j) {
          if (j != i) out.push_back({{i, false}, {j, true}});
        }
        break;
    }
  }
  return out;
}

DiversityReport PairwiseReport(const std::string& benchmark, const std::vector<std::string>& algo_names,
                               MetricKind kind, Level level,
                               const std::function<double(VariantRef, VariantRef)>& metric) {
  auto pairs = LevelPairs(level, static_cast<int>(algo_names.size()));
  DiversityReport rep{benchmark, kind, level, {}, 0.0};
  rep.pairs.resize(pairs.size());
  const int n = static_cast<int>(pairs.size());
  std::vector<std::string> errors(n);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    try {
      rep.pairs[i].value = metric(pairs[i].first, pairs[i].second);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  for (int i = 0; i < n; ++i) {
    if (!errors[i].empty()) throw Error(ErrorCode::kRuntime, errors[i]);
  }
  auto label = [&](VariantRef v) { return algo_names[v.algo] + (v.ild ? "'" : ""); };
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    rep.pairs[i].a = pairs[i].first;
    rep.pairs[i].b = pairs[i].second;
    rep.pairs[i].label_a = label(pairs[i].first);
    rep.pairs[i].label_b = label(pairs[i].second);
    sum += rep.pairs[i].value;
  }
  rep.average = n ? sum / n : 0.0;
  return rep;
}

std::string ReportsToTsv(const std::vector<DiversityReport>& reports, const std::vector<std::string>& columns) {
  std::vector<std::string> benches = columns;
  std::vector<std::pair<MetricKind, Level>> rows;
  std::map<std::pair<std::pair<MetricKind, Level>, std::string>, double> cell;
  for (const auto& r : reports) {
    if (std::find(benches.begin(), benches.end(), r.benchmark) == benches.end()) benches.push_back(r.benchmark);
    std::pair row{r.metric, r.level};
    if (std::find(rows.begin(), rows.end(), row) == rows.end()) rows.push_back(row);
    cell[{row, r.benchmark}] = r.average;
  }
  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return std::string(buf);
  };
  std::string out = "metric\tlevel";
  for (const auto& b : benches) out += "\t" + b;
  out += "\tavg\n";
  for (const auto& row : rows) {
    out += std::string(MetricKindName(row.first)) + "\t" + LevelName(row.second);
    double sum = 0.0;
    int count = 0;
    for (const auto& b : benches) {
      auto it = cell.find({row, b});
      if (it == cell.end()) {
        out += "\t-";
      } else {
        out += "\t" + fmt(it->second);
        sum += it->second;
        ++count;
      }
    }
    out += "\t" + (count ? fmt(sum / count) : std::string("-")) + "\n";
  }
  return out;
}

nlohmann::json ReportToJson(const DiversityReport& report) {
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& p : report.pairs) {
    pairs.push_back({{"a", p.label_a}, {"b", p.label_b}, {"value", p.value}});
  }
  return {{"benchmark", report.benchmark},
          {"metric", MetricKindName(report.metric)},
          {"level", LevelName(report.level)},
          {"pairs", pairs},
          {"average", report.average}};
}

nlohmann::json ReportsToJson(const std::vector<DiversityReport>& reports) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : reports) out.push_back(ReportToJson(r));
  return out;
}

}  // namespace algodiv::metrics
