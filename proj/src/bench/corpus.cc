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

#include "algodiv/bench/corpus.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "algodiv/core/error.h"
#include "algodiv/core/random.h"
#include "json.hpp"

namespace algodiv::bench {
namespace {

constexpr int kSortLength = 64;
constexpr int kTextLength = 256;
constexpr int kPatternLength = 8;
constexpr int kLcsLength = 8;
constexpr int kProcesses = 3;
constexpr int kTasks = 2;

std::vector<BenchVariant> Variants(std::initializer_list<const char*> stems) {
  std::vector<BenchVariant> out;
  for (const char* s : stems) out.push_back({s, CorpusSource(s)});
  return out;
}

std::string RandomString(SplitMix64& rng, int len, std::string_view alphabet) {
  std::string s;
  for (int i = 0; i < len; ++i) s.push_back(alphabet[rng.Below(alphabet.size())]);
  return s;
}

std::vector<int64_t> Ints(const Value& v) {
  std::vector<int64_t> out;
  for (const Value& e : v.elems()) out.push_back(e.as_int());
  return out;
}

Benchmark Sort4() {
  Benchmark b;
  b.name = "sort4";
  b.entry = "sort";
  b.variants = Variants({"sort_heap", "sort_quick", "sort_insertion", "sort_merge"});
  b.input = [](uint64_t seed) {
    SplitMix64 rng(seed);
    Value::Elems a;
    for (int i = 0; i < kSortLength; ++i) a.push_back(Value::Int(static_cast<int64_t>(rng.Below(1000))));
    return std::vector<Value>{Value::Seq(std::move(a))};
  };
  b.check_output = [](const std::vector<Value>& in, const Value& out) -> std::optional<std::string> {
    if (!out.is_seq()) return "result is not a sequence";
    std::vector<int64_t> want = Ints(in[0]);
    std::sort(want.begin(), want.end());
    for (const Value& e : out.elems()) {
      if (!e.is_int()) return "result holds a non-integer";
    }
    if (Ints(out) != want) return "result is not the sorted permutation of the input";
    return std::nullopt;
  };
  return b;
}

Benchmark Patsearch3() {
  Benchmark b;
  b.name = "patsearch3";
  b.entry = "search";
  b.variants = Variants({"patsearch_naive", "patsearch_kmp", "patsearch_rabinkarp"});
  b.input = [](uint64_t seed) {
    SplitMix64 rng(seed);
    std::string text = RandomString(rng, kTextLength, "ab");
    std::string pat;
    if (rng.Bernoulli(0.75)) {
      pat = text.substr(rng.Below(kTextLength - kPatternLength + 1), kPatternLength);
    } else {
      pat = RandomString(rng, kPatternLength, "ab");
    }
    return std::vector<Value>{Value::Str(text), Value::Str(pat)};
  };
  b.check_output = [](const std::vector<Value>& in, const Value& out) -> std::optional<std::string> {
    const std::string& text = in[0].as_str();
    const std::string& pat = in[1].as_str();
    Value::Elems want;
    for (size_t i = 0; i + pat.size() <= text.size(); ++i) {
      if (text.compare(i, pat.size(), pat) == 0) want.push_back(Value::Int(static_cast<int64_t>(i)));
    }
    if (!(out == Value::Seq(std::move(want)))) return "match positions differ from the reference scan";
    return std::nullopt;
  };
  return b;
}

int64_t ReferenceLcs(const std::string& x, const std::string& y) {
  std::vector<std::vector<int64_t>> t(x.size() + 1, std::vector<int64_t>(y.size() + 1, 0));
  for (size_t i = 1; i <= x.size(); ++i) {
    for (size_t j = 1; j <= y.size(); ++j) {
      t[i][j] = x[i - 1] == y[j - 1] ? t[i - 1][j - 1] + 1 : std::max(t[i - 1][j], t[i][j - 1]);
    }
  }
  return t[x.size()][y.size()];
}

Benchmark Lcs3() {
  Benchmark b;
  b.name = "lcs3";
  b.entry = "lcs";
  b.variants = Variants({"lcs_recursive", "lcs_memo", "lcs_iterative"});
  b.input = [](uint64_t seed) {
    SplitMix64 rng(seed);
    std::string x = RandomString(rng, kLcsLength, "ABC");
    std::string y = RandomString(rng, kLcsLength, "ABC");
    return std::vector<Value>{Value::Str(x), Value::Str(y)};
  };
  b.check_output = [](const std::vector<Value>& in, const Value& out) -> std::optional<std::string> {
    int64_t want = ReferenceLcs(in[0].as_str(), in[1].as_str());
    if (!out.is_int() || out.as_int() != want) {
      return "lcs length " + out.ToString() + ", expected " + std::to_string(want);
    }
    return std::nullopt;
  };
  return b;
}

std::vector<Value> DistributedInput(uint64_t) { return {Value::Int(kProcesses), Value::Int(kTasks)}; }

// Mutual exclusion: disjoint critical sections, ntasks sections per process
// (per variant), and a final ("finished", ntasks) output from each.
std::optional<std::string> CheckMutex(const std::vector<Value>& in, const sync::ExecutionRecord& rec) {
  if (auto bad = CheckCleanRun(rec)) return bad;
  if (!sync::MutualExclusionViolations(rec).empty()) return "overlapping critical sections";
  int64_t ntasks = in[1].as_int();
  std::map<ProcessId, int64_t> sections;
  std::map<ProcessId, int64_t> finished;
  for (const auto& c : rec.cs) ++sections[c.pid];
  Value want = Value::Tuple({Value::Str("finished"), Value::Int(ntasks)});
  for (const auto& o : rec.outputs) {
    if (o.value == want) ++finished[o.pid];
  }
  for (const auto& p : rec.processes) {
    if (sections[p.pid] != ntasks) return p.pid.ToString() + " ran " + std::to_string(sections[p.pid]) + " sections";
    if (finished[p.pid] != 1) return p.pid.ToString() + " did not report completion";
  }
  return std::nullopt;
}

Benchmark MutexBenchmark(const std::string& name, std::initializer_list<const char*> stems) {
  Benchmark b;
  b.name = name;
  b.kind = BenchKind::kDistributed;
  b.entry = "main";
  b.variants = Variants(stems);
  b.types = {"P"};
  b.input = DistributedInput;
  b.check_run = CheckMutex;
  return b;
}

// Mirrors vote_for in the 2PC sources.
std::string ExpectedDecision(int64_t tx, int64_t participants) {
  for (int64_t k = 0; k < participants; ++k) {
    if ((tx * 7 + k * 3) % 5 == 4) return "abort";
  }
  return "commit";
}

std::optional<std::string> CheckTwoPc(const std::vector<Value>& in, const sync::ExecutionRecord& rec) {
  if (auto bad = CheckCleanRun(rec)) return bad;
  int64_t participants = in[0].as_int() - 1;
  int64_t ntasks = in[1].as_int();
  Value::Elems want;
  for (int64_t tx = 0; tx < ntasks; ++tx) {
    want.push_back(Value::Tuple({Value::Int(tx), Value::Str(ExpectedDecision(tx, participants))}));
  }
  std::map<ProcessId, Value::Elems> got;
  for (const auto& o : rec.outputs) got[o.pid].push_back(o.value);
  for (const auto& p : rec.processes) {
    if (got[p.pid] != want) return p.pid.ToString() + " (" + p.type + ") logged a different outcome sequence";
  }
  return std::nullopt;
}

Benchmark TwoPc2() {
  Benchmark b;
  b.name = "twopc2";
  b.kind = BenchKind::kDistributed;
  b.entry = "main";
  b.variants = Variants({"twopc_a", "twopc_b"});
  b.types = {"Coordinator", "Participant"};
  b.input = DistributedInput;
  b.check_run = CheckTwoPc;
  return b;
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::vector<std::string> BenchmarkNames() {
  return {"sort4", "patsearch3", "lcs3", "lamutex2", "ramutex1", "twopc2"};
}

Benchmark LoadBenchmark(const std::string& name) {
  if (name == "sort4") return Sort4();
  if (name == "patsearch3") return Patsearch3();
  if (name == "lcs3") return Lcs3();
  if (name == "lamutex2") return MutexBenchmark(name, {"lamutex_a", "lamutex_b"});
  if (name == "ramutex1") return MutexBenchmark(name, {"ramutex"});
  if (name == "twopc2") return TwoPc2();
  throw Error(ErrorCode::kUnknownBenchmark, "unknown benchmark '" + name + "'");
}

const std::string& CorpusSource(const std::string& stem) {
  for (const auto& [name, text] : EmbeddedSources()) {
    if (name == stem) return text;
  }
  throw Error(ErrorCode::kUnknownBenchmark, "no corpus source '" + stem + "'");
}

std::optional<std::string> CheckCleanRun(const sync::ExecutionRecord& rec) {
  if (rec.status != sync::RunStatus::kQuiescence) {
    return std::string("run ended in ") + sync::RunStatusName(rec.status);
  }
  if (!rec.divergences.empty()) {
    return std::string("divergence: ") + sync::DivergenceReasonName(rec.divergences[0].reason);
  }
  for (const auto& p : rec.processes) {
    if (!p.done) return p.pid.ToString() + " did not finish";
  }
  return std::nullopt;
}

Benchmark LoadManifest(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(ReadFile(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfig, path.string() + ": " + e.what());
  }
  auto need = [&](const char* key) -> const nlohmann::json& {
    if (!j.contains(key)) throw Error(ErrorCode::kConfig, path.string() + ": missing '" + key + "'");
    return j.at(key);
  };
  try {
    Benchmark b;
    b.name = need("name").get<std::string>();
    std::string kind = j.value("kind", "sequential");
    if (kind == "distributed") {
      b.kind = BenchKind::kDistributed;
    } else if (kind != "sequential") {
      throw Error(ErrorCode::kConfig, path.string() + ": kind must be sequential or distributed");
    }
    b.entry = j.value("entry", b.kind == BenchKind::kDistributed ? "main" : "");
    if (b.entry.empty()) throw Error(ErrorCode::kConfig, path.string() + ": missing 'entry'");
    for (const auto& v : need("variants")) {
      std::filesystem::path file = v.at("file").get<std::string>();
      if (file.is_relative()) file = path.parent_path() / file;
      b.variants.push_back({v.at("name").get<std::string>(), ReadFile(file)});
    }
    if (b.variants.empty()) throw Error(ErrorCode::kConfig, path.string() + ": no variants");
    std::vector<std::vector<Value>> inputs;
    for (const auto& in : need("inputs")) {
      std::vector<Value> args;
      for (const auto& a : in) args.push_back(ValueFromJson(a));
      inputs.push_back(std::move(args));
    }
    if (inputs.empty()) throw Error(ErrorCode::kConfig, path.string() + ": no inputs");
    b.input = [inputs](uint64_t seed) { return inputs[seed % inputs.size()]; };
    if (b.kind == BenchKind::kDistributed) {
      b.types = need("types").get<std::vector<std::string>>();
      b.unsync = j.value("unsync", std::vector<std::string>{});
      b.check_run = [](const std::vector<Value>&, const sync::ExecutionRecord& rec) { return CheckCleanRun(rec); };
    } else {
      // Agreement with the first variant, evaluated by the harness.
      b.check_output = nullptr;
    }
    return b;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfig, path.string() + ": " + e.what());
  }
}

}  // namespace algodiv::bench
