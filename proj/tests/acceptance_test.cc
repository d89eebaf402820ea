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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Optional arguments select criteria by number.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "algodiv/bench/corpus.h"
#include "algodiv/bench/experiment.h"
#include "algodiv/core/random.h"
#include "algodiv/ild/ild.h"
#include "algodiv/lang/compiler.h"
#include "algodiv/lang/parser.h"
#include "algodiv/metrics/diversity.h"
#include "algodiv/metrics/edit_distance.h"
#include "algodiv/metrics/fingerprint.h"
#include "algodiv/metrics/report.h"
#include "algodiv/sync/system.h"
#include "algodiv/vm/execute.h"
#include "support.h"

namespace algodiv {
namespace {

using test_support::CompileText;
using test_support::MutexCoExecution;
using test_support::MutexPlain;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

bool IsDistributedStem(const std::string& stem) {
  return stem.starts_with("lamutex") || stem.starts_with("ramutex") || stem.starts_with("twopc");
}

// Small inputs keep whole-corpus pairwise edit distances cheap.
std::vector<Value> SmallInput(const std::string& stem) {
  if (stem.starts_with("sort")) return {Value::Seq({Value::Int(5), Value::Int(2), Value::Int(9), Value::Int(2),
                                                    Value::Int(7), Value::Int(1), Value::Int(8)})};
  if (stem.starts_with("patsearch")) return {Value::Str("abaababbabaab"), Value::Str("aba")};
  return {Value::Str("ABCBA"), Value::Str("BACAB")};
}

std::string EntryOf(const std::string& stem) {
  if (stem.starts_with("sort")) return "sort";
  if (stem.starts_with("patsearch")) return "search";
  return "lcs";
}

struct Logs {
  std::string name;
  vm::Trace trace;
  vm::AccessLog accesses;
};

Logs CorpusLogs(const std::string& stem) {
  Logs out{stem, {}, {}};
  if (!IsDistributedStem(stem)) {
    vm::ExecuteOptions opts;
    opts.trace = opts.access = opts.track_inputs = true;
    auto r = vm::Execute(CompileText(bench::CorpusSource(stem)), EntryOf(stem), SmallInput(stem), opts);
    out.trace = std::move(r.trace);
    out.accesses = std::move(r.accesses);
    return out;
  }
  bench::Benchmark b = bench::LoadBenchmark(stem.starts_with("twopc") ? "twopc2" : "lamutex2");
  sync::SystemConfig cfg = bench::PlainSystemConfig(b, test_support::CorpusSide("p", stem), b.input(1), 1, {1, 2});
  cfg.trace = cfg.access = true;
  sync::ExecutionRecord rec = sync::Simulate(cfg);
  for (const auto& p : rec.processes) {
    out.trace.insert(out.trace.end(), p.trace.begin(), p.trace.end());
    out.accesses.insert(out.accesses.end(), p.accesses.begin(), p.accesses.end());
  }
  return out;
}

// 1. Identity, symmetry, and range of every metric over the corpus.
Outcome MetricAxioms() {
  std::vector<std::string> stems = test_support::CorpusStems();
  std::vector<metrics::Fingerprint> fps;
  std::vector<Logs> logs;
  for (const auto& s : stems) {
    fps.push_back(metrics::NgramFingerprint(*CompileText(bench::CorpusSource(s))));
    logs.push_back(CorpusLogs(s));
  }
  size_t checks = 0;
  std::vector<std::string> bad;
  auto check = [&](const std::string& what, double xy, double yx, double hi, bool same) {
    ++checks;
    if ((same && xy != 0.0) || xy != yx || xy < 0.0 || xy > hi) {
      bad.push_back(what + "=" + Fmt(xy) + "/" + Fmt(yx));
    }
  };
  for (size_t i = 0; i < stems.size(); ++i) {
    for (size_t j = i; j < stems.size(); ++j) {
      std::string tag = stems[i] + "," + stems[j];
      check("code(" + tag + ")", metrics::CodeDiversity(fps[i], fps[j]), metrics::CodeDiversity(fps[j], fps[i]), 1.0,
            i == j);
      check("trace(" + tag + ")", metrics::TraceDiversity(logs[i].trace, logs[j].trace),
            metrics::TraceDiversity(logs[j].trace, logs[i].trace), 2.0, i == j);
      check("access(" + tag + ")", metrics::AccessDiversity(logs[i].accesses, logs[j].accesses),
            metrics::AccessDiversity(logs[j].accesses, logs[i].accesses), 2.0, i == j);
    }
  }
  std::string detail = std::to_string(stems.size()) + " programs, " + std::to_string(checks) + " checks";
  if (!bad.empty()) detail += ", first violation " + bad.front();
  return {bad.empty(), detail};
}

// Top-down recursion over prefixes, memoized only to keep runtime bounded.
size_t RecursiveLevenshtein(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
  std::vector<std::vector<long>> memo(a.size() + 1, std::vector<long>(b.size() + 1, -1));
  std::function<size_t(size_t, size_t)> rec = [&](size_t i, size_t j) -> size_t {
    if (i == 0) return j;
    if (j == 0) return i;
    long& m = memo[i][j];
    if (m >= 0) return static_cast<size_t>(m);
    size_t best = std::min(rec(i - 1, j) + 1, rec(i, j - 1) + 1);
    best = std::min(best, rec(i - 1, j - 1) + (a[i - 1] == b[j - 1] ? 0 : 1));
    m = static_cast<long>(best);
    return best;
  };
  return rec(a.size(), b.size());
}

// 2. Levenshtein against the recursive definition.
Outcome LevenshteinOracle() {
  std::vector<std::vector<uint32_t>> all;
  for (int len = 0; len <= 8; ++len) {
    int total = 1;
    for (int k = 0; k < len; ++k) total *= 3;
    for (int code = 0; code < total; ++code) {
      std::vector<uint32_t> s(len);
      int c = code;
      for (int k = 0; k < len; ++k, c /= 3) s[k] = static_cast<uint32_t>(c % 3);
      all.push_back(std::move(s));
    }
  }
  // Every pair among the 121 sequences of length <= 4, then random pairs up
  // to 10^5 in total.
  std::vector<std::pair<size_t, size_t>> pairs;
  for (size_t i = 0; i < 121; ++i) {
    for (size_t j = 0; j < 121; ++j) pairs.emplace_back(i, j);
  }
  SplitMix64 rng(2024);
  while (pairs.size() < 100000) pairs.emplace_back(rng.Below(all.size()), rng.Below(all.size()));
  size_t mismatches = 0;
  for (auto [i, j] : pairs) {
    size_t want = RecursiveLevenshtein(all[i], all[j]);
    if (metrics::LevenshteinDp(all[i], all[j]) != want) ++mismatches;
    if (metrics::LevenshteinBitParallel(all[i], all[j]) != want) ++mismatches;
  }
  return {mismatches == 0, std::to_string(pairs.size()) + " pairs over " + std::to_string(all.size()) +
                               " sequences, " + std::to_string(mismatches) + " mismatches"};
}

// 3. Winnowing selects at least one hash from every window.
Outcome WinnowCoverage() {
  SplitMix64 rng(7);
  size_t failures = 0, windows = 0;
  for (int t = 0; t < 10000; ++t) {
    size_t len = 1 + rng.Below(200);
    int w = 1 + static_cast<int>(rng.Below(12));
    uint64_t range = t % 2 ? 16 : ~0ULL;  // Half the cases have many ties.
    std::vector<uint64_t> h(len);
    for (auto& x : h) x = range == ~0ULL ? rng.Next() : rng.Below(range);
    std::vector<size_t> pos = metrics::WinnowPositions(h, w);
    std::vector<uint64_t> sel = metrics::Winnow(h, w);
    std::set<uint64_t> sel_set(sel.begin(), sel.end());
    size_t last = len < static_cast<size_t>(w) ? 0 : len - w;
    for (size_t s = 0; s <= last; ++s) {
      ++windows;
      size_t e = std::min(len, s + w);
      bool hit_pos = std::any_of(pos.begin(), pos.end(), [&](size_t p) { return p >= s && p < e; });
      bool hit_hash = std::any_of(h.begin() + s, h.begin() + e, [&](uint64_t x) { return sel_set.count(x) > 0; });
      if (!hit_pos || !hit_hash) ++failures;
    }
  }
  return {failures == 0, "10000 sequences, " + std::to_string(windows) + " windows, " + std::to_string(failures) +
                             " uncovered"};
}

// Applies one slot permutation per unit and one global permutation.
lang::CompiledProgram Reindex(lang::CompiledProgram p, uint64_t seed) {
  SplitMix64 rng(seed);
  auto perm = [&](size_t n) {
    std::vector<int32_t> v(n);
    for (size_t i = 0; i < n; ++i) v[i] = static_cast<int32_t>(i);
    for (size_t i = n; i > 1; --i) std::swap(v[i - 1], v[rng.Below(i)]);
    return v;
  };
  std::vector<int32_t> g = perm(p.globals.size());
  for (auto& u : p.units) {
    std::vector<int32_t> l = perm(static_cast<size_t>(u.num_locals()));
    for (auto& ins : u.code) {
      if (ins.op == lang::Opcode::kLoadLocal || ins.op == lang::Opcode::kStoreLocal) ins.arg = l.at(ins.arg);
      if (ins.op == lang::Opcode::kLoadGlobal || ins.op == lang::Opcode::kStoreGlobal) ins.arg = g.at(ins.arg);
    }
  }
  return p;
}

// 4. Fingerprints ignore function order and consistent renaming of slots.
Outcome FingerprintRobustness() {
  size_t checks = 0;
  std::vector<std::string> bad;
  std::vector<metrics::FingerprintParams> params = {{5, 4, false}, {5, 4, true}, {3, 6, true}};
  for (const auto& stem : test_support::CorpusStems()) {
    lang::Ast ast = lang::Parse(bench::CorpusSource(stem));
    lang::CompiledProgram base = lang::Compile(ast, lang::CompileMode::kPlain);
    std::vector<lang::CompiledProgram> others;
    for (uint64_t s = 1; s <= 5; ++s) {
      SplitMix64 rng(s);
      others.push_back(lang::Compile(ild::FuncReorder(ast, s == 1 ? 1.0 : 0.5, rng), lang::CompileMode::kPlain));
      others.push_back(Reindex(base, s));
    }
    for (const auto& fp : params) {
      metrics::Fingerprint want = metrics::NgramFingerprint(base, fp);
      for (const auto& o : others) {
        ++checks;
        if (metrics::NgramFingerprint(o, fp) != want) bad.push_back(stem);
      }
    }
  }
  std::string detail = std::to_string(checks) + " comparisons";
  if (!bad.empty()) detail += ", first mismatch in " + bad.front();
  return {bad.empty(), detail};
}

// 5. ILD variants compute what their originals compute.
Outcome IldPreservation() {
  ild::IldProfile profile;
  bool swap = profile.Enabled(ild::Transform::kArgReorder);
  size_t runs = 0;
  std::vector<std::string> bad;
  for (const std::string& name : bench::BenchmarkNames()) {
    bench::Benchmark b = bench::LoadBenchmark(name);
    for (int i = 0; i < static_cast<int>(b.variants.size()); ++i) {
      const std::string& vname = b.variants[i].name;
      if (b.kind == bench::BenchKind::kSequential) {
        auto orig = std::make_shared<const lang::CompiledProgram>(
            lang::Compile(bench::VariantAst(b, i), lang::CompileMode::kPlain));
        std::vector<Value> want;
        for (uint64_t in = 1; in <= 100; ++in) want.push_back(vm::Execute(orig, b.entry, b.input(in)).result);
        for (uint64_t s = 1; s <= 10; ++s) {
          auto var = std::make_shared<const lang::CompiledProgram>(
              lang::Compile(bench::IldVariantAst(b, i, profile, s), lang::CompileMode::kPlain));
          for (uint64_t in = 1; in <= 100; ++in) {
            ++runs;
            Value got = vm::Execute(var, b.entry, bench::IldArgs(profile, b.input(in))).result;
            if (got != want[in - 1]) bad.push_back(vname + " ild " + std::to_string(s) + " input " + std::to_string(in));
          }
        }
        continue;
      }
      // Distributed: inputs are scheduler seeds; outputs and per-channel
      // payload sequences must match the original under the same seed.
      std::vector<Value> args = b.input(1);
      bench::Side orig{vname, std::make_shared<const lang::Ast>(bench::VariantAst(b, i)), false};
      std::vector<sync::ExecutionRecord> want;
      for (uint64_t seed = 1; seed <= 100; ++seed) {
        want.push_back(sync::Simulate(bench::PlainSystemConfig(b, orig, args, seed, {1, 3})));
      }
      for (uint64_t s = 1; s <= 10; ++s) {
        bench::Side var{vname + "_ild", std::make_shared<const lang::Ast>(bench::IldVariantAst(b, i, profile, s)),
                        swap};
        for (uint64_t seed = 1; seed <= 100; ++seed) {
          ++runs;
          sync::ExecutionRecord got = sync::Simulate(bench::PlainSystemConfig(b, var, args, seed, {1, 3}));
          const sync::ExecutionRecord& w = want[seed - 1];
          if (got.status != w.status || test_support::Outputs(got) != test_support::Outputs(w) ||
              test_support::ChannelPayloads(got) != test_support::ChannelPayloads(w)) {
            bad.push_back(vname + " ild " + std::to_string(s) + " seed " + std::to_string(seed));
          }
        }
      }
    }
  }
  std::string detail = std::to_string(runs) + " variant runs, " + std::to_string(bad.size()) + " deviations";
  if (!bad.empty()) detail += ", first " + bad.front();
  return {bad.empty(), detail};
}

// 6. Diversity trends: algo > impl and both >= algo - 0.02 per corpus.
Outcome Trends() {
  bench::ExperimentConfig cfg;
  cfg.benchmarks = {"sort4", "patsearch3", "lcs3", "lamutex2", "twopc2"};
  cfg.ild_seeds = {1, 2, 3};
  cfg.input_seeds = {1, 2};
  cfg.scheduler_seeds = {1, 2};
  bench::ExperimentResult r = bench::RunExperiment(cfg);
  if (!r.failures.empty()) {
    return {false, "benchmark failure: " + r.failures.front().benchmark + "/" + r.failures.front().variant + ": " +
                       r.failures.front().reason};
  }
  const std::set<std::string> seq = {"sort4", "patsearch3", "lcs3"};
  // (corpus, metric, level) -> (sum, count)
  std::map<std::tuple<int, metrics::MetricKind, metrics::Level>, std::pair<double, int>> acc;
  for (const auto& rep : r.reports) {
    auto& [sum, n] = acc[{seq.count(rep.benchmark) ? 0 : 1, rep.metric, rep.level}];
    sum += rep.average;
    ++n;
  }
  bool ok = true;
  std::string detail;
  for (int corpus = 0; corpus < 2; ++corpus) {
    for (auto m : {metrics::MetricKind::kCode, metrics::MetricKind::kTrace, metrics::MetricKind::kAccess}) {
      auto avg = [&](metrics::Level l) {
        auto [sum, n] = acc[{corpus, m, l}];
        return n ? sum / n : 0.0;
      };
      double algo = avg(metrics::Level::kAlgo), impl = avg(metrics::Level::kImpl), both = avg(metrics::Level::kBoth);
      bool row = algo > impl && both >= algo - 0.02;
      ok = ok && row;
      detail += std::string(corpus ? "dist " : "seq ") + metrics::MetricKindName(m) + " " + Fmt(algo) + "/" +
                Fmt(impl) + "/" + Fmt(both) + (row ? "" : " (violated)") + (corpus || m != metrics::MetricKind::kAccess ? "; " : "");
    }
  }
  return {ok, "algo/impl/both: " + detail};
}

// Runs `seeds` co-executions and applies the lamutex2 oracle.
Outcome MutexRuns(const std::string& a, const std::string& c, uint64_t seeds, std::vector<std::string> unsync) {
  bench::Benchmark b = bench::LoadBenchmark("lamutex2");
  size_t divergences = 0, sections = 0;
  std::string first;
  for (uint64_t seed = 1; seed <= seeds; ++seed) {
    sync::ExecutionRecord rec = sync::Simulate(MutexCoExecution(a, c, seed, unsync));
    divergences += rec.divergences.size();
    sections += rec.cs.size();
    if (auto bad = b.check_run(b.input(1), rec); bad && first.empty()) {
      first = "seed " + std::to_string(seed) + ": " + *bad;
    }
  }
  std::string detail = std::to_string(seeds) + " seeds, " + std::to_string(divergences) + " divergences, " +
                       std::to_string(sections) + " variant critical sections";
  if (!first.empty()) detail += ", " + first;
  return {first.empty() && divergences == 0, detail};
}

// 8. Each injected fault yields its divergence reason.
Outcome FaultDetection() {
  using sync::DivergenceReason;
  using sync::FaultKind;
  const std::vector<std::pair<FaultKind, DivergenceReason>> cases = {
      {FaultKind::kPayloadFlip, DivergenceReason::kPayloadMismatch},
      {FaultKind::kDestinationFlip, DivergenceReason::kDestinationMismatch},
      {FaultKind::kSuppressSend, DivergenceReason::kOutboundTimeout},
      {FaultKind::kBlockFlip, DivergenceReason::kYieldBlockMismatch},
  };
  int hits = 0;
  std::string detail;
  for (auto [fault, want] : cases) {
    sync::SystemConfig cfg = MutexCoExecution("lamutex_a", "lamutex_a", 1);
    for (auto& d : cfg.diversify) d.instances = {0};
    cfg.faults.push_back({fault, 0, 1, 0, "done"});
    sync::ExecutionRecord rec = sync::Simulate(cfg);
    bool ok = !rec.divergences.empty() &&
              std::all_of(rec.divergences.begin(), rec.divergences.end(),
                          [&](const sync::DivergenceReport& d) { return d.reason == want; });
    hits += ok;
    detail += std::string(sync::FaultKindName(fault)) + "->" +
              (rec.divergences.empty() ? "none" : sync::DivergenceReasonName(rec.divergences.front().reason)) + " ";
  }
  return {hits == 4, std::to_string(hits) + "/4: " + detail};
}

// 9. Critical sections never overlap.
Outcome LamutexSafety() {
  size_t runs = 0, violations = 0, sections = 0, unfinished = 0;
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    std::vector<sync::SystemConfig> cfgs = {MutexPlain("lamutex_a", seed), MutexPlain("lamutex_b", seed),
                                            MutexCoExecution("lamutex_a", "lamutex_a", seed),
                                            MutexCoExecution("lamutex_a", "lamutex_b", seed)};
    for (const auto& cfg : cfgs) {
      sync::ExecutionRecord rec = sync::Simulate(cfg);
      ++runs;
      violations += sync::MutualExclusionViolations(rec).size();
      sections += rec.cs.size();
      unfinished += rec.status != sync::RunStatus::kQuiescence;
    }
  }
  return {violations == 0 && sections > 0,
          std::to_string(runs) + " runs, " + std::to_string(sections) + " critical sections, " +
              std::to_string(violations) + " overlapping pairs, " + std::to_string(unfinished) + " not quiescent"};
}

bool SameRecord(const sync::ExecutionRecord& x, const sync::ExecutionRecord& y) {
  if (sync::RecordToJsonl(x) != sync::RecordToJsonl(y) || x.processes.size() != y.processes.size()) return false;
  for (size_t i = 0; i < x.processes.size(); ++i) {
    if (x.processes[i].trace != y.processes[i].trace || x.processes[i].accesses != y.processes[i].accesses) {
      return false;
    }
  }
  return true;
}

// 12. Re-running a configuration reproduces it exactly.
Outcome Determinism() {
  size_t runs = 0, diffs = 0;
  bench::Benchmark twopc = bench::LoadBenchmark("twopc2");
  for (uint64_t seed = 1; seed <= 5; ++seed) {
    std::vector<sync::SystemConfig> cfgs = {
        MutexPlain("lamutex_a", seed), MutexPlain("ramutex", seed),
        MutexCoExecution("lamutex_a", "lamutex_b", seed),
        MutexCoExecution("lamutex_a", "ramutex", seed, {"ack", "release", "response"}),
        bench::CoExecutionConfig(twopc, test_support::CorpusSide("ta", "twopc_a"),
                                 test_support::CorpusSide("tb", "twopc_b"), twopc.input(1), seed, {1, 3})};
    sync::SystemConfig faulty = MutexCoExecution("lamutex_a", "lamutex_a", seed);
    faulty.faults.push_back({sync::FaultKind::kPayloadFlip, 0, 1, 0, "done"});
    cfgs.push_back(faulty);
    for (auto& cfg : cfgs) {
      cfg.trace = cfg.access = true;
      ++runs;
      diffs += !SameRecord(sync::Simulate(cfg), sync::Simulate(cfg));
    }
  }
  for (const auto& stem : test_support::CorpusStems()) {
    if (IsDistributedStem(stem)) continue;
    vm::ExecuteOptions opts;
    opts.trace = opts.access = opts.track_inputs = true;
    auto prog = CompileText(bench::CorpusSource(stem));
    auto x = vm::Execute(prog, EntryOf(stem), SmallInput(stem), opts);
    auto y = vm::Execute(prog, EntryOf(stem), SmallInput(stem), opts);
    ++runs;
    diffs += !(x.result == y.result && x.trace == y.trace && x.accesses == y.accesses && x.steps == y.steps);
  }
  return {diffs == 0, std::to_string(runs) + " paired runs, " + std::to_string(diffs) + " differences"};
}

// 13. No await waits longer than its timeout plus one tick.
Outcome AwaitTimeouts() {
  size_t awaits = 0, violations = 0, runs = 0;
  bench::Benchmark twopc = bench::LoadBenchmark("twopc2");
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    std::vector<sync::SystemConfig> cfgs;
    for (const char* s : {"lamutex_a", "lamutex_b", "ramutex"}) cfgs.push_back(MutexPlain(s, seed));
    for (const char* s : {"twopc_a", "twopc_b"}) {
      cfgs.push_back(
          bench::PlainSystemConfig(twopc, test_support::CorpusSide("t", s), twopc.input(1), seed, {1, 3}));
    }
    cfgs.push_back(MutexCoExecution("lamutex_a", "lamutex_a", seed));
    cfgs.push_back(MutexCoExecution("lamutex_a", "lamutex_b", seed));
    cfgs.push_back(MutexCoExecution("lamutex_b", "ramutex", seed, {"ack", "release", "response"}));
    cfgs.push_back(bench::CoExecutionConfig(twopc, test_support::CorpusSide("ta", "twopc_a"),
                                            test_support::CorpusSide("tb", "twopc_b"), twopc.input(1), seed,
                                            {1, 3}));
    for (const auto& cfg : cfgs) {
      sync::ExecutionRecord rec = sync::Simulate(cfg);
      ++runs;
      for (const auto& a : rec.awaits) awaits += a.timeout > 0;
      violations += sync::AwaitViolations(rec, 1).size();
    }
  }
  return {violations == 0 && awaits > 0, std::to_string(runs) + " runs, " + std::to_string(awaits) +
                                             " timed awaits, " + std::to_string(violations) + " overruns"};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace algodiv

int main(int argc, char** argv) {
  using namespace algodiv;
  const std::vector<Criterion> all = {
      {1, "metric identity/symmetry/range", MetricAxioms},
      {2, "levenshtein oracle", LevenshteinOracle},
      {3, "winnowing window coverage", WinnowCoverage},
      {4, "fingerprint robustness", FingerprintRobustness},
      {5, "ild semantics preservation", IldPreservation},
      {6, "diversity trends", Trends},
      {7, "zero-divergence soundness", [] { return MutexRuns("lamutex_a", "lamutex_a", 20, {}); }},
      {8, "divergence completeness", FaultDetection},
      {9, "lamutex safety", LamutexSafety},
      {10, "variant agreement (lamutex A vs B)", [] { return MutexRuns("lamutex_a", "lamutex_b", 20, {}); }},
      {11, "un-synchronized kinds (lamutex + ramutex)",
       [] { return MutexRuns("lamutex_a", "ramutex", 10, {"ack", "release", "response"}); }},
      {12, "determinism", Determinism},
      {13, "await timeout preservation", AwaitTimeouts},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  int failed = 0;
  for (const Criterion& c : all) {
    if (!only.empty() && !only.count(c.id)) continue;
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !o.pass;
    std::printf("%s %2d %s (%.1fs): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
