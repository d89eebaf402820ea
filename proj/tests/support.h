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

// Helpers shared by the unit and acceptance tests.

#ifndef ALGODIV_TESTS_SUPPORT_H_
#define ALGODIV_TESTS_SUPPORT_H_

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "algodiv/bench/corpus.h"
#include "algodiv/bench/experiment.h"
#include "algodiv/lang/compiler.h"
#include "algodiv/lang/parser.h"
#include "algodiv/sync/config.h"
#include "algodiv/sync/record.h"

namespace algodiv::test_support {

inline std::shared_ptr<const lang::CompiledProgram> CompileText(const std::string& source,
                                                              lang::CompileMode mode = lang::CompileMode::kPlain) {
  return std::make_shared<const lang::CompiledProgram>(lang::Compile(lang::Parse(source), mode));
}

inline std::shared_ptr<const lang::Ast> ParseShared(const std::string& source) {
  return std::make_shared<const lang::Ast>(lang::Parse(source));
}

// Every corpus stem, e.g. "sort_quick", "lamutex_a".
inline std::vector<std::string> CorpusStems() {
  std::vector<std::string> out;
  for (const auto& [stem, text] : bench::EmbeddedSources()) out.push_back(stem);
  return out;
}

inline bench::Side CorpusSide(const std::string& name, const std::string& stem) {
  return {name, ParseShared(bench::CorpusSource(stem)), false};
}

// Lamutex-family co-execution: every P diversified as [a, c].
inline sync::SystemConfig MutexCoExecution(const std::string& stem_a, const std::string& stem_c, uint64_t seed,
                                           std::vector<std::string> unsync = {}) {
  bench::Benchmark b = bench::LoadBenchmark("lamutex2");
  bench::Side a = CorpusSide("va", stem_a);
  bench::Side c = CorpusSide("vc", stem_c);
  sync::SystemConfig cfg = bench::CoExecutionConfig(b, a, c, b.input(1), seed, {1, 3});
  cfg.unsync_kinds = std::move(unsync);
  return cfg;
}

inline sync::SystemConfig MutexPlain(const std::string& stem, uint64_t seed) {
  bench::Benchmark b = bench::LoadBenchmark("lamutex2");
  return bench::PlainSystemConfig(b, CorpusSide("p", stem), b.input(1), seed, {1, 3});
}

// Payload sequence per (src, dst) channel.
inline std::map<std::pair<ProcessId, ProcessId>, std::vector<Value>> ChannelPayloads(
    const sync::ExecutionRecord& rec) {
  std::map<std::pair<ProcessId, ProcessId>, std::vector<Value>> out;
  for (const auto& m : rec.messages) out[{m.src, m.dst}].push_back(m.payload);
  return out;
}

inline std::vector<std::pair<ProcessId, Value>> Outputs(const sync::ExecutionRecord& rec) {
  std::vector<std::pair<ProcessId, Value>> out;
  for (const auto& o : rec.outputs) out.emplace_back(o.pid, o.value);
  return out;
}

}  // namespace algodiv::test_support

#endif  // ALGODIV_TESTS_SUPPORT_H_
