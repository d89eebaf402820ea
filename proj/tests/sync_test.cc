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

#include <gtest/gtest.h>

#include <algorithm>
#include <string>

#include "algodiv/core/error.h"
#include "algodiv/sync/config.h"
#include "algodiv/sync/record.h"
#include "algodiv/sync/system.h"
#include "support.h"

namespace algodiv::sync {
namespace {

const char* kPingPong = R"(
process Pinger {
  setup(peer, n) {
    self.peer = peer
    self.n = n
    self.got = 0
  }
  receive ("pong", k) {
    self.got = self.got + 1
  }
  run() {
    i = 0
    while i < self.n {
      send ("ping", i) to self.peer
      await self.got > i
      i = i + 1
    }
    send ("stop", 0) to self.peer
    output(("pinger", self.got))
  }
}

process Ponger {
  setup(x, y) {
    self.stop = false
  }
  receive ("ping", k) from p {
    send ("pong", k) to p
  }
  receive ("stop", _) {
    self.stop = true
  }
  run() {
    await self.stop
    output(("ponger", "done"))
  }
}

func main(n) {
  a = new(Pinger)
  b = new(Ponger)
  setup(a, (b, n))
  setup(b, (a, 0))
  start(b)
  start(a)
}
)";

SystemConfig PingPong(int n, uint64_t seed = 1) {
  SystemConfig cfg;
  cfg.programs.push_back({"pp", kPingPong, "", nullptr});
  cfg.main_program = "pp";
  cfg.args = {Value::Int(n)};
  cfg.seed = seed;
  cfg.latency = {1, 2};
  return cfg;
}

TEST(SystemTest, PingPongReachesQuiescence) {
  ExecutionRecord rec = Simulate(PingPong(4));
  EXPECT_EQ(rec.status, RunStatus::kQuiescence);
  EXPECT_TRUE(rec.divergences.empty());
  EXPECT_EQ(rec.messages.size(), 9u);
  ASSERT_EQ(rec.outputs.size(), 2u);
  std::vector<Value> outs;
  for (const auto& o : rec.outputs) outs.push_back(o.value);
  EXPECT_NE(std::find(outs.begin(), outs.end(), Value::Tuple({Value::Str("pinger"), Value::Int(4)})), outs.end());
  for (const auto& p : rec.processes) EXPECT_TRUE(p.done) << p.pid.ToString();
}

// Causally chained messages carry strictly increasing Lamport stamps.
TEST(SystemTest, LamportClockAlongACausalChain) {
  ExecutionRecord rec = Simulate(PingPong(5, 7));
  std::vector<MessageRecord> msgs = rec.messages;
  std::stable_sort(msgs.begin(), msgs.end(), [](const auto& a, const auto& b) { return a.time < b.time; });
  for (size_t i = 1; i < msgs.size(); ++i) EXPECT_LT(msgs[i - 1].lamport, msgs[i].lamport) << i;
}

TEST(SystemTest, LatencyBoundsDeliveryTimes) {
  SystemConfig cfg = PingPong(3);
  cfg.latency = {4, 0};
  ExecutionRecord rec = Simulate(cfg);
  // Each round trip takes exactly two hops of 4 ticks.
  EXPECT_GE(rec.end_time, 3 * 8);
  EXPECT_LE(rec.end_time, 3 * 8 + 8);
}

TEST(SystemTest, BlockedProcessesMeanDeadlock) {
  SystemConfig cfg;
  cfg.programs.push_back({"d", R"(
process W {
  setup(x, y) {
    pass
  }
  run() {
    await some (("never", _), _) in received
  }
}
func main() {
  w = new(W)
  setup(w, (0, 0))
  start(w)
}
)", "", nullptr});
  cfg.main_program = "d";
  ExecutionRecord rec = Simulate(cfg);
  EXPECT_EQ(rec.status, RunStatus::kDeadlock);
}

TEST(SystemTest, MaxTimeStopsTheRun) {
  SystemConfig cfg = PingPong(50);
  cfg.max_time = 10;
  EXPECT_EQ(Simulate(cfg).status, RunStatus::kDeadline);
}

TEST(SystemTest, StepwiseMatchesSimulate) {
  System sys(PingPong(3, 4));
  while (sys.Step()) {
  }
  EXPECT_EQ(sys.pending_events(), 0u);
  EXPECT_EQ(RecordToJsonl(sys.Record()), RecordToJsonl(Simulate(PingPong(3, 4))));
}

TEST(SystemTest, DiversifiedIdenticalVariantsAgree) {
  for (uint64_t seed = 1; seed <= 5; ++seed) {
    SystemConfig cfg = PingPong(4, seed);
    cfg.diversify.push_back({"Ponger", {"pp:Ponger", "pp:Ponger"}, {}});
    ExecutionRecord rec = Simulate(cfg);
    EXPECT_EQ(rec.status, RunStatus::kQuiescence);
    EXPECT_TRUE(rec.divergences.empty());
    ASSERT_EQ(rec.gateways.size(), 1u);
    int variants = 0;
    for (const auto& p : rec.processes) {
      if (p.logical == rec.gateways[0] && p.variant >= 0) {
        ++variants;
        EXPECT_EQ(p.pid.sub, static_cast<uint32_t>(p.variant + 1));
      }
    }
    EXPECT_EQ(variants, 2);
  }
}

// The pinger sees the gateway pid, never a variant pid.
TEST(SystemTest, VariantPidsAreRewrittenToTheGateway) {
  SystemConfig cfg = PingPong(2);
  cfg.diversify.push_back({"Ponger", {"pp:Ponger", "pp:Ponger"}, {}});
  ExecutionRecord rec = Simulate(cfg);
  ASSERT_EQ(rec.gateways.size(), 1u);
  for (const auto& m : rec.messages) {
    if (m.dst.sub == 0 && m.dst != rec.gateways[0]) EXPECT_EQ(m.src.sub, 0u);
  }
}

TEST(SystemTest, UnknownVariantProgramIsAConfigError) {
  SystemConfig cfg = PingPong(2);
  cfg.diversify.push_back({"Ponger", {"nope:Ponger", "pp:Ponger"}, {}});
  try {
    Simulate(cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfig);
  }
}

TEST(SystemTest, FaultInjectionIsDetected) {
  SystemConfig cfg = PingPong(3);
  cfg.diversify.push_back({"Ponger", {"pp:Ponger", "pp:Ponger"}, {}});
  cfg.faults.push_back({FaultKind::kPayloadFlip, 0, 1, 1, ""});
  ExecutionRecord rec = Simulate(cfg);
  ASSERT_FALSE(rec.divergences.empty());
  EXPECT_EQ(rec.divergences[0].reason, DivergenceReason::kPayloadMismatch);
  EXPECT_EQ(rec.divergences[0].gateway, rec.gateways[0]);
}

TEST(SystemTest, MainMustNotBlock) {
  SystemConfig cfg;
  cfg.programs.push_back({"m", "func main() {\n  await timeout 3 { pass }\n}", "", nullptr});
  cfg.main_program = "m";
  EXPECT_THROW(Simulate(cfg), Error);
}

TEST(ConfigTest, JsonRoundTrip) {
  SystemConfig cfg = PingPong(3, 9);
  cfg.diversify.push_back({"Ponger", {"pp:Ponger", "pp:Ponger"}, {0}});
  cfg.unsync_kinds = {"pong"};
  cfg.faults.push_back({FaultKind::kBlockFlip, 0, 1, 2, "done"});
  nlohmann::json j = ConfigToJson(cfg);
  EXPECT_EQ(ConfigToJson(ConfigFromJson(j)), j);
}

TEST(ConfigTest, RejectsUnknownKeysAndFaults) {
  nlohmann::json j = ConfigToJson(PingPong(1));
  j["bogus"] = 1;
  EXPECT_THROW(ConfigFromJson(j), Error);
  EXPECT_EQ(FaultKindFromName("payload_flip"), FaultKind::kPayloadFlip);
  EXPECT_EQ(FaultKindFromName("meteor_strike"), std::nullopt);
}

TEST(RecordTest, MutualExclusionViolations) {
  ExecutionRecord rec;
  ProcessId a{0, 1, 0}, b{0, 2, 0}, a1{0, 1, 1}, a2{0, 1, 2};
  rec.cs = {{a1, a, 0, 5}, {a2, a, 1, 6}, {b, b, 6, 8}};
  EXPECT_TRUE(MutualExclusionViolations(rec).empty());
  rec.cs.push_back({b, b, 4, 7});
  EXPECT_EQ(MutualExclusionViolations(rec).size(), 2u);
}

TEST(RecordTest, AwaitViolationsUseSlack) {
  ExecutionRecord rec;
  rec.awaits = {{{0, 1, 0}, 10, 13, 2}, {{0, 1, 0}, 20, 22, 2}};
  EXPECT_EQ(AwaitViolations(rec, 1).size(), 0u);
  EXPECT_EQ(AwaitViolations(rec, 0).size(), 1u);
}

TEST(RecordTest, JsonlStartsWithAHeader) {
  std::string text = RecordToJsonl(Simulate(PingPong(2)));
  auto first = nlohmann::json::parse(text.substr(0, text.find('\n')));
  EXPECT_EQ(first["status"], "quiescence");
  EXPECT_EQ(DivergenceReasonFromName("payload_mismatch"), DivergenceReason::kPayloadMismatch);
}

TEST(SystemTest, EmptySystemIsImmediatelyQuiescent) {
  SystemConfig cfg;
  cfg.programs.push_back({"e", "func main() {\n  pass\n}", "", nullptr});
  cfg.main_program = "e";
  ExecutionRecord rec = Simulate(cfg);
  EXPECT_EQ(rec.status, RunStatus::kQuiescence);
  EXPECT_EQ(rec.end_time, 0);
  EXPECT_TRUE(rec.messages.empty());
}

}  // namespace
}  // namespace algodiv::sync
