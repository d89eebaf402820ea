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

#include "algodiv/bench/experiment.h"

#include <algorithm>
#include <map>
#include <optional>
#include <set>

#include "algodiv/core/error.h"
#include "algodiv/lang/compiler.h"
#include "algodiv/lang/parser.h"
#include "algodiv/metrics/diversity.h"
#include "algodiv/sync/record.h"
#include "algodiv/sync/system.h"
#include "algodiv/vm/execute.h"

namespace algodiv::bench {
namespace {

using metrics::Level;
using metrics::MetricKind;
using metrics::VariantRef;

// Compiled form and logs of one side (an algorithm or one of its ILD
// variants under one seed).
struct SeqSide {
  std::shared_ptr<const lang::CompiledProgram> program;
  metrics::Fingerprint fingerprint;
  std::vector<vm::Trace> traces;  // One per input seed.
  std::vector<vm::AccessLog> accesses;
  bool ild = false;
};

struct DistRun {
  vm::Trace trace[2];
  vm::AccessLog accesses[2];
};

double Mean(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

bool NeedsDynamic(const ExperimentConfig& cfg) {
  return std::any_of(cfg.metrics.begin(), cfg.metrics.end(), [](MetricKind m) { return m != MetricKind::kCode; });
}

// Pairs of all requested levels that the benchmark admits.
std::vector<std::pair<Level, std::vector<std::pair<VariantRef, VariantRef>>>> PlannedLevels(
    const ExperimentConfig& cfg, int num_algos) {
  std::vector<std::pair<Level, std::vector<std::pair<VariantRef, VariantRef>>>> out;
  for (Level l : cfg.levels) {
    if (l != Level::kImpl && num_algos < 2) continue;
    out.emplace_back(l, metrics::LevelPairs(l, num_algos));
  }
  return out;
}

std::shared_ptr<const lang::CompiledProgram> CompilePlain(const lang::Ast& ast) {
  return std::make_shared<const lang::CompiledProgram>(lang::Compile(ast, lang::CompileMode::kPlain));
}

// Runs `fn(i)` for i in [0, n) in parallel; the first error (lowest index)
// is rethrown afterwards.
template <typename Fn>
void ParallelFor(int n, Fn fn) {
  std::vector<std::optional<Error>> errors(n);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    try {
      fn(i);
    } catch (const Error& e) {
      errors[i] = e;
    } catch (const std::exception& e) {
      errors[i] = Error(ErrorCode::kRuntime, e.what());
    }
  }
  for (auto& e : errors) {
    if (e) throw *e;
  }
}

class Failure : public std::runtime_error {
 public:
  Failure(std::string variant, const std::string& reason) : std::runtime_error(reason), variant_(std::move(variant)) {}
  const std::string& variant() const { return variant_; }

 private:
  std::string variant_;
};

std::vector<metrics::DiversityReport> RunSequential(const ExperimentConfig& cfg, const Benchmark& b) {
  const int n = static_cast<int>(b.variants.size());
  const int nseeds = static_cast<int>(cfg.ild_seeds.size());
  // sides[i][0] is the original; sides[i][1 + s] the ILD variant for seed s.
  std::vector<std::vector<SeqSide>> sides(n, std::vector<SeqSide>(1 + nseeds));
  std::vector<std::vector<lang::Ast>> asts(n, std::vector<lang::Ast>(1 + nseeds));
  for (int i = 0; i < n; ++i) {
    asts[i][0] = VariantAst(b, i);
    for (int s = 0; s < nseeds; ++s) asts[i][1 + s] = IldVariantAst(b, i, cfg.profile, cfg.ild_seeds[s]);
  }

  std::vector<uint64_t> oracle_seeds;
  for (int k = 1; k <= cfg.oracle_inputs; ++k) oracle_seeds.push_back(static_cast<uint64_t>(k));
  for (uint64_t s : cfg.input_seeds) oracle_seeds.push_back(s);

  // Reference outputs for the agreement oracle of manifest benchmarks.
  std::vector<Value> reference;
  if (!b.check_output) {
    auto prog = CompilePlain(asts[0][0]);
    for (uint64_t s : oracle_seeds) reference.push_back(vm::Execute(prog, b.entry, b.input(s)).result);
  }

  const bool dynamic = NeedsDynamic(cfg);
  const int total = n * (1 + nseeds);
  std::vector<std::optional<std::pair<std::string, std::string>>> failures(total);
  ParallelFor(total, [&](int job) {
    int i = job / (1 + nseeds);
    int s = job % (1 + nseeds);
    SeqSide& side = sides[i][s];
    side.ild = s > 0;
    std::string label = b.variants[i].name + (side.ild ? "'" + std::to_string(cfg.ild_seeds[s - 1]) : "");
    try {
      side.program = CompilePlain(asts[i][s]);
    } catch (const Error& e) {
      failures[job] = {label, e.what()};
      return;
    }
    side.fingerprint = metrics::NgramFingerprint(*side.program, cfg.fingerprint);
    auto args_for = [&](uint64_t seed) {
      std::vector<Value> args = b.input(seed);
      return side.ild ? IldArgs(cfg.profile, std::move(args)) : args;
    };
    for (size_t k = 0; k < oracle_seeds.size(); ++k) {
      std::vector<Value> in = b.input(oracle_seeds[k]);
      Value out;
      try {
        out = vm::Execute(side.program, b.entry, args_for(oracle_seeds[k])).result;
      } catch (const Error& e) {
        failures[job] = {label, e.what()};
        return;
      }
      std::optional<std::string> bad;
      if (b.check_output) {
        bad = b.check_output(in, out);
      } else if (!(out == reference[k])) {
        bad = "output differs from " + b.variants[0].name;
      }
      if (bad) {
        failures[job] = {label, *bad + " (input seed " + std::to_string(oracle_seeds[k]) + ")"};
        return;
      }
    }
    if (!dynamic) return;
    vm::ExecuteOptions opts;
    opts.trace = true;
    opts.access = true;
    opts.track_inputs = true;
    for (uint64_t seed : cfg.input_seeds) {
      vm::ExecuteResult r = vm::Execute(side.program, b.entry, args_for(seed), opts);
      side.traces.push_back(std::move(r.trace));
      side.accesses.push_back(std::move(r.accesses));
    }
  });
  for (const auto& f : failures) {
    if (f) throw Failure(f->first, f->second);
  }

  std::vector<std::string> names;
  for (const auto& v : b.variants) names.push_back(v.name);
  std::vector<metrics::DiversityReport> reports;
  for (MetricKind m : cfg.metrics) {
    for (const auto& [level, unused] : PlannedLevels(cfg, n)) {
      reports.push_back(metrics::PairwiseReport(b.name, names, m, level, [&](VariantRef a, VariantRef c) {
        std::vector<double> vals;
        for (int s = 0; s < nseeds; ++s) {
          const SeqSide& x = sides[a.algo][a.ild ? 1 + s : 0];
          const SeqSide& y = sides[c.algo][c.ild ? 1 + s : 0];
          if (m == MetricKind::kCode) {
            vals.push_back(metrics::CodeDiversity(x.fingerprint, y.fingerprint));
            continue;
          }
          for (size_t k = 0; k < cfg.input_seeds.size(); ++k) {
            vals.push_back(m == MetricKind::kTrace ? metrics::TraceDiversity(x.traces[k], y.traces[k])
                                                   : metrics::AccessDiversity(x.accesses[k], y.accesses[k]));
          }
        }
        return Mean(vals);
      }));
    }
  }
  return reports;
}

std::vector<metrics::DiversityReport> RunDistributed(const ExperimentConfig& cfg, const Benchmark& b) {
  const int n = static_cast<int>(b.variants.size());
  const int nseeds = static_cast<int>(cfg.ild_seeds.size());
  std::vector<std::vector<Side>> sides(n, std::vector<Side>(1 + nseeds));
  std::vector<std::vector<metrics::Fingerprint>> fps(n, std::vector<metrics::Fingerprint>(1 + nseeds));
  for (int i = 0; i < n; ++i) {
    sides[i][0] = {b.variants[i].name, std::make_shared<const lang::Ast>(VariantAst(b, i))};
    for (int s = 0; s < nseeds; ++s) {
      sides[i][1 + s] = {b.variants[i].name + "_ild" + std::to_string(cfg.ild_seeds[s]),
                         std::make_shared<const lang::Ast>(IldVariantAst(b, i, cfg.profile, cfg.ild_seeds[s])),
                         cfg.profile.Enabled(ild::Transform::kArgReorder)};
    }
    for (int s = 0; s <= nseeds; ++s) {
      try {
        fps[i][s] = metrics::NgramFingerprint(*CompilePlain(*sides[i][s].ast), cfg.fingerprint);
      } catch (const Error& e) {
        throw Failure(sides[i][s].name, e.what());
      }
    }
  }
  std::vector<Value> args = b.input(1);

  // Every side must satisfy the benchmark's property on its own.
  std::vector<std::pair<int, int>> solo_sides;
  for (int i = 0; i < n; ++i) {
    for (int s = 0; s <= nseeds; ++s) solo_sides.emplace_back(i, s);
  }
  const int nsched = static_cast<int>(cfg.scheduler_seeds.size());
  std::vector<std::optional<std::pair<std::string, std::string>>> solo_fail(solo_sides.size() * nsched);
  ParallelFor(static_cast<int>(solo_fail.size()), [&](int job) {
    auto [i, s] = solo_sides[job / nsched];
    uint64_t seed = cfg.scheduler_seeds[job % nsched];
    const Side& side = sides[i][s];
    sync::SystemConfig sc = PlainSystemConfig(b, side, args, seed, cfg.latency);
    sync::ExecutionRecord rec = sync::Simulate(sc);
    if (auto bad = b.check_run(args, rec)) solo_fail[job] = {side.name, *bad + " (seed " + std::to_string(seed) + ")"};
  });
  for (const auto& f : solo_fail) {
    if (f) throw Failure(f->first, f->second);
  }

  auto side_of = [&](VariantRef r, int s) -> const Side& { return sides[r.algo][r.ild ? 1 + s : 0]; };

  // Dynamic runs for every (pair, ILD seed, scheduler seed).
  using RunKey = std::tuple<int, bool, int, bool, int, int>;
  std::map<RunKey, DistRun> runs;
  if (NeedsDynamic(cfg)) {
    std::set<RunKey> keys;
    for (const auto& [level, pairs] : PlannedLevels(cfg, n)) {
      for (const auto& [a, c] : pairs) {
        for (int s = 0; s < nseeds; ++s) {
          int seed_slot = (a.ild || c.ild) ? s : 0;
          for (int k = 0; k < nsched; ++k) keys.insert({a.algo, a.ild, c.algo, c.ild, seed_slot, k});
        }
      }
    }
    std::vector<RunKey> order(keys.begin(), keys.end());
    std::vector<DistRun> results(order.size());
    std::vector<std::optional<std::pair<std::string, std::string>>> fails(order.size());
    ParallelFor(static_cast<int>(order.size()), [&](int job) {
      auto [ai, ail, ci, cil, s, k] = order[job];
      const Side& x = side_of({ai, ail}, s);
      const Side& y = side_of({ci, cil}, s);
      uint64_t seed = cfg.scheduler_seeds[k];
      DistRun& out = results[job];
      auto trace_cfg = [](sync::SystemConfig sc) {
        sc.trace = true;
        sc.access = true;
        return sc;
      };
      if (cfg.synchronized) {
        sync::ExecutionRecord rec = sync::Simulate(trace_cfg(CoExecutionConfig(b, x, y, args, seed, cfg.latency)));
        if (auto bad = b.check_run(args, rec)) {
          fails[job] = {x.name + "|" + y.name, *bad + " (seed " + std::to_string(seed) + ")"};
          return;
        }
        for (int side = 0; side < 2; ++side) {
          out.trace[side] = sync::SideTrace(rec, side);
          out.accesses[side] = sync::SideAccesses(rec, side);
        }
      } else {
        const Side* both[2] = {&x, &y};
        for (int side = 0; side < 2; ++side) {
          sync::ExecutionRecord rec =
              sync::Simulate(trace_cfg(PlainSystemConfig(b, *both[side], args, seed, cfg.latency)));
          for (const auto& p : rec.processes) {
            out.trace[side].insert(out.trace[side].end(), p.trace.begin(), p.trace.end());
            out.accesses[side].insert(out.accesses[side].end(), p.accesses.begin(), p.accesses.end());
          }
        }
      }
    });
    for (const auto& f : fails) {
      if (f) throw Failure(f->first, f->second);
    }
    for (size_t j = 0; j < order.size(); ++j) runs.emplace(order[j], std::move(results[j]));
  }

  std::vector<std::string> names;
  for (const auto& v : b.variants) names.push_back(v.name);
  std::vector<metrics::DiversityReport> reports;
  for (MetricKind m : cfg.metrics) {
    for (const auto& [level, unused] : PlannedLevels(cfg, n)) {
      reports.push_back(metrics::PairwiseReport(b.name, names, m, level, [&](VariantRef a, VariantRef c) {
        std::vector<double> vals;
        for (int s = 0; s < nseeds; ++s) {
          if (m == MetricKind::kCode) {
            vals.push_back(metrics::CodeDiversity(fps[a.algo][a.ild ? 1 + s : 0], fps[c.algo][c.ild ? 1 + s : 0]));
            continue;
          }
          int seed_slot = (a.ild || c.ild) ? s : 0;
          for (int k = 0; k < nsched; ++k) {
            const DistRun& r = runs.at({a.algo, a.ild, c.algo, c.ild, seed_slot, k});
            vals.push_back(m == MetricKind::kTrace ? metrics::TraceDiversity(r.trace[0], r.trace[1])
                                                   : metrics::AccessDiversity(r.accesses[0], r.accesses[1]));
          }
        }
        return Mean(vals);
      }));
    }
  }
  return reports;
}

std::vector<uint64_t> SeedList(const nlohmann::json& j, const char* key, std::vector<uint64_t> def) {
  if (!j.contains(key)) return def;
  auto v = j.at(key).get<std::vector<uint64_t>>();
  if (v.empty()) throw Error(ErrorCode::kConfig, std::string("'") + key + "' must not be empty");
  return v;
}

}  // namespace

lang::Ast VariantAst(const Benchmark& b, int i) { return lang::Parse(b.variants.at(i).source); }

lang::Ast IldVariantAst(const Benchmark& b, int i, const ild::IldProfile& profile, uint64_t seed) {
  ild::IldProfile p = profile;
  p.seed = seed;
  return ild::ApplyIld(VariantAst(b, i), p);
}

std::vector<Value> IldArgs(const ild::IldProfile& profile, std::vector<Value> args) {
  if (!profile.Enabled(ild::Transform::kArgReorder)) return args;
  return ild::SwapPairs(std::move(args));
}

sync::SystemConfig PlainSystemConfig(const Benchmark& b, const Side& side, std::vector<Value> args, uint64_t seed,
                                     sync::LatencyModel latency) {
  sync::SystemConfig sc;
  sc.programs.push_back({side.name, "", "", side.ast});
  sc.main_program = side.name;
  sc.entry = b.entry;
  sc.args = side.swap_args ? ild::SwapPairs(std::move(args)) : std::move(args);
  sc.seed = seed;
  sc.latency = latency;
  return sc;
}

sync::SystemConfig CoExecutionConfig(const Benchmark& b, const Side& a, const Side& c, std::vector<Value> args,
                                     uint64_t seed, sync::LatencyModel latency) {
  sync::SystemConfig sc;
  const std::string driver = "$main";
  sc.programs.push_back({driver, b.variants.at(0).source, "", nullptr});
  sc.programs.push_back({a.name, "", "", a.ast});
  if (c.name != a.name) sc.programs.push_back({c.name, "", "", c.ast});
  sc.main_program = driver;
  sc.entry = b.entry;
  sc.args = std::move(args);
  for (const std::string& t : b.types) sc.diversify.push_back({t, {a.name + ":" + t, c.name + ":" + t}, {}});
  sc.unsync_kinds = b.unsync;
  sc.seed = seed;
  sc.latency = latency;
  return sc;
}

ExperimentResult RunExperiment(const ExperimentConfig& cfg) {
  std::vector<Benchmark> benches;
  for (const std::string& name : cfg.benchmarks) benches.push_back(LoadBenchmark(name));
  for (const auto& path : cfg.manifests) benches.push_back(LoadManifest(path));
  if (cfg.ild_seeds.empty() || cfg.input_seeds.empty() || cfg.scheduler_seeds.empty()) {
    throw Error(ErrorCode::kConfig, "seed lists must not be empty");
  }
  ExperimentResult result;
  for (const Benchmark& b : benches) {
    result.benchmarks.push_back(b.name);
    try {
      auto reports = b.kind == BenchKind::kSequential ? RunSequential(cfg, b) : RunDistributed(cfg, b);
      result.reports.insert(result.reports.end(), reports.begin(), reports.end());
    } catch (const Failure& f) {
      result.failures.push_back({b.name, f.variant(), f.what()});
    }
  }
  // Rows grouped by metric, then level, then benchmark order.
  std::stable_sort(result.reports.begin(), result.reports.end(),
                   [&](const metrics::DiversityReport& x, const metrics::DiversityReport& y) {
                     auto rank = [&](const metrics::DiversityReport& r) {
                       auto mi = std::find(cfg.metrics.begin(), cfg.metrics.end(), r.metric) - cfg.metrics.begin();
                       auto li = std::find(cfg.levels.begin(), cfg.levels.end(), r.level) - cfg.levels.begin();
                       return std::pair(mi, li);
                     };
                     return rank(x) < rank(y);
                   });
  return result;
}

ExperimentConfig ExperimentConfigFromJson(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  ExperimentConfig cfg;
  try {
    if (!j.is_object()) throw Error(ErrorCode::kConfig, "experiment config must be an object");
    static const std::set<std::string> kKeys = {"benchmarks", "manifests", "metrics", "levels", "ild",
                                                "ild_seeds", "input_seeds", "scheduler_seeds", "oracle_inputs",
                                                "synchronized", "fingerprint", "latency", "output"};
    for (const auto& [key, unused] : j.items()) {
      if (!kKeys.count(key)) throw Error(ErrorCode::kConfig, "unknown experiment key '" + key + "'");
    }
    if (j.contains("benchmarks")) cfg.benchmarks = j.at("benchmarks").get<std::vector<std::string>>();
    for (const std::string& name : cfg.benchmarks) {
      auto names = BenchmarkNames();
      if (std::find(names.begin(), names.end(), name) == names.end()) {
        throw Error(ErrorCode::kUnknownBenchmark, "unknown benchmark '" + name + "'");
      }
    }
    if (j.contains("manifests")) {
      for (const auto& m : j.at("manifests")) {
        std::filesystem::path p = m.get<std::string>();
        cfg.manifests.push_back(p.is_relative() ? base_dir / p : p);
      }
    }
    if (j.contains("metrics")) {
      cfg.metrics.clear();
      for (const auto& m : j.at("metrics")) {
        auto k = metrics::MetricKindFromName(m.get<std::string>());
        if (!k) throw Error(ErrorCode::kConfig, "unknown metric '" + m.get<std::string>() + "'");
        cfg.metrics.push_back(*k);
      }
    }
    if (j.contains("levels")) {
      cfg.levels.clear();
      for (const auto& l : j.at("levels")) {
        auto k = metrics::LevelFromName(l.get<std::string>());
        if (!k) throw Error(ErrorCode::kConfig, "unknown level '" + l.get<std::string>() + "'");
        cfg.levels.push_back(*k);
      }
    }
    if (j.contains("ild")) cfg.profile = ild::ProfileFromJson(j.at("ild"));
    cfg.ild_seeds = SeedList(j, "ild_seeds", cfg.ild_seeds);
    cfg.input_seeds = SeedList(j, "input_seeds", cfg.input_seeds);
    cfg.scheduler_seeds = SeedList(j, "scheduler_seeds", cfg.scheduler_seeds);
    cfg.oracle_inputs = j.value("oracle_inputs", cfg.oracle_inputs);
    if (cfg.oracle_inputs < 0) throw Error(ErrorCode::kConfig, "oracle_inputs must be non-negative");
    cfg.synchronized = j.value("synchronized", cfg.synchronized);
    if (j.contains("fingerprint")) {
      const auto& f = j.at("fingerprint");
      cfg.fingerprint.n = f.value("n", cfg.fingerprint.n);
      cfg.fingerprint.w = f.value("w", cfg.fingerprint.w);
      cfg.fingerprint.winnow = f.value("winnow", cfg.fingerprint.winnow);
      if (cfg.fingerprint.n < 1 || cfg.fingerprint.w < 1) throw Error(ErrorCode::kConfig, "fingerprint n and w must be >= 1");
    }
    if (j.contains("latency")) {
      cfg.latency.base = j.at("latency").value("base", cfg.latency.base);
      cfg.latency.jitter = j.at("latency").value("jitter", cfg.latency.jitter);
      if (cfg.latency.base < 1 || cfg.latency.jitter < 0) throw Error(ErrorCode::kConfig, "bad latency model");
    }
    if (j.contains("output")) {
      const auto& o = j.at("output");
      auto resolve = [&](const std::string& p) {
        if (p.empty()) return p;
        std::filesystem::path path = p;
        return (path.is_relative() ? base_dir / path : path).string();
      };
      cfg.tsv_path = resolve(o.value("tsv", ""));
      cfg.json_path = resolve(o.value("json", ""));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfig, std::string("experiment config: ") + e.what());
  }
  return cfg;
}

nlohmann::json ExperimentConfigToJson(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["benchmarks"] = cfg.benchmarks;
  nlohmann::json manifests = nlohmann::json::array();
  for (const auto& m : cfg.manifests) manifests.push_back(m.string());
  j["manifests"] = manifests;
  nlohmann::json ms = nlohmann::json::array();
  for (auto m : cfg.metrics) ms.push_back(metrics::MetricKindName(m));
  j["metrics"] = ms;
  nlohmann::json ls = nlohmann::json::array();
  for (auto l : cfg.levels) ls.push_back(metrics::LevelName(l));
  j["levels"] = ls;
  j["ild"] = ild::ProfileToJson(cfg.profile);
  j["ild_seeds"] = cfg.ild_seeds;
  j["input_seeds"] = cfg.input_seeds;
  j["scheduler_seeds"] = cfg.scheduler_seeds;
  j["oracle_inputs"] = cfg.oracle_inputs;
  j["synchronized"] = cfg.synchronized;
  j["fingerprint"] = {{"n", cfg.fingerprint.n}, {"w", cfg.fingerprint.w}, {"winnow", cfg.fingerprint.winnow}};
  j["latency"] = {{"base", cfg.latency.base}, {"jitter", cfg.latency.jitter}};
  j["output"] = {{"tsv", cfg.tsv_path}, {"json", cfg.json_path}};
  return j;
}

nlohmann::json ExperimentResultToJson(const ExperimentResult& result, const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["format"] = "algodiv.experiment";
  j["config"] = ExperimentConfigToJson(cfg);
  j["reports"] = metrics::ReportsToJson(result.reports);
  nlohmann::json fails = nlohmann::json::array();
  for (const auto& f : result.failures) {
    fails.push_back({{"benchmark", f.benchmark}, {"variant", f.variant}, {"reason", f.reason}});
  }
  j["failures"] = fails;
  return j;
}

}  // namespace algodiv::bench
