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

#include <set>
#include <sstream>
#include <string>

#include "algodiv/bench/corpus.h"
#include "algodiv/core/error.h"
#include "algodiv/vm/execute.h"
#include "algodiv/vm/logs.h"
#include "algodiv/vm/trace_verifier.h"
#include "algodiv/vm/tracking.h"
#include "support.h"

namespace algodiv::vm {
namespace {

using test_support::CompileText;

Value I(int64_t i) { return Value::Int(i); }
Value Ints(std::initializer_list<int64_t> xs) {
  Value::Elems e;
  for (auto x : xs) e.push_back(I(x));
  return Value::Seq(e);
}

Value Eval(const std::string& src, std::vector<Value> args = {}) {
  return Execute(CompileText(src), "f", std::move(args)).result;
}

ErrorCode FailureOf(const std::string& src, std::vector<Value> args = {}, uint64_t budget = kDefaultStepBudget) {
  ExecuteOptions opts;
  opts.step_budget = budget;
  try {
    Execute(CompileText(src), "f", std::move(args), opts);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return ErrorCode::kUsage;
}

TEST(VmTest, Arithmetic) {
  EXPECT_EQ(Eval("func f() { return 7 / 2 }"), I(3));
  EXPECT_EQ(Eval("func f() { return -7 / 2 }"), I(-4));
  EXPECT_EQ(Eval("func f() { return -7 % 3 }"), I(2));
  EXPECT_EQ(Eval("func f() { return 2 + 3 * 4 - 1 }"), I(13));
  EXPECT_EQ(Eval("func f() { return \"ab\" + \"c\" }"), Value::Str("abc"));
}

TEST(VmTest, Collections) {
  EXPECT_EQ(Eval("func f() { return [1, 2] + [3] }"), Ints({1, 2, 3}));
  EXPECT_EQ(Eval("func f() { return {3, 1} - {1} }"), Value::Set({I(3)}));
  EXPECT_EQ(Eval("func f() { a = [1, 2, 3]\n a[1] = 9\n return a }"), Ints({1, 9, 3}));
  EXPECT_EQ(Eval("func f() { return count([4, 5, 6]) }"), I(3));
  EXPECT_EQ(Eval("func f() { return 2 in {1, 2} }"), Value::Bool(true));
  EXPECT_EQ(Eval("func f() { return range(0, 4) }"), Ints({0, 1, 2, 3}));
}

TEST(VmTest, QuantifiersBindPatterns) {
  const char* src =
      "func f(xs) {\n"
      "  if some (\"a\", v) in xs | v > 2 { return v }\n"
      "  return -1\n"
      "}";
  Value xs = Value::Seq({Value::Tuple({Value::Str("b"), I(7)}), Value::Tuple({Value::Str("a"), I(1)}),
                         Value::Tuple({Value::Str("a"), I(5)})});
  EXPECT_EQ(Eval(src, {xs}), I(5));
  EXPECT_EQ(Eval("func f(xs) { return each x in xs | x > 0 }", {Ints({1, 2})}), Value::Bool(true));
  EXPECT_EQ(Eval("func f(xs) { return each x in xs | x > 1 }", {Ints({1, 2})}), Value::Bool(false));
}

TEST(VmTest, ForSkipsNonMatchingElements) {
  const char* src =
      "func f(xs, k) {\n"
      "  s = 0\n"
      "  for (=k, v) in xs { s = s + v }\n"
      "  return s\n"
      "}";
  Value xs = Value::Seq({Value::Tuple({I(1), I(10)}), Value::Tuple({I(2), I(20)}), Value::Tuple({I(1), I(5)})});
  EXPECT_EQ(Eval(src, {xs, I(1)}), I(15));
}

TEST(VmTest, RuntimeErrors) {
  EXPECT_EQ(FailureOf("func f() { return 1 + \"a\" }"), ErrorCode::kType);
  EXPECT_EQ(FailureOf("func f() { return 1 / 0 }"), ErrorCode::kRuntime);
  EXPECT_EQ(FailureOf("func f() { return [1][5] }"), ErrorCode::kRuntime);
  EXPECT_EQ(FailureOf("func f() { while true { pass } }", {}, 10000), ErrorCode::kStepBudget);
  EXPECT_EQ(FailureOf("func f() { return output(1) }"), ErrorCode::kRuntime);
}

TEST(VmTest, UnknownEntry) {
  try {
    Execute(CompileText("func f() { return 1 }"), "g", {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownUnit);
  }
}

TEST(VmTest, GlobalsInitializeBeforeEntry) {
  EXPECT_EQ(Eval("var g = 40\nfunc f() { return g + 2 }"), I(42));
}

// Insertion sort on tracked [3, 1]: its first comparison is a `<` between
// the two inputs.
TEST(TrackingTest, InsertionSortFirstComparison) {
  ExecuteOptions opts;
  opts.access = true;
  opts.track_inputs = true;
  auto r = Execute(CompileText(bench::CorpusSource("sort_insertion")), "sort", {Ints({3, 1})}, opts);
  EXPECT_EQ(r.result, Ints({1, 3}));
  std::vector<ObjectId> lt;
  for (const auto& rec : r.accesses) {
    if (rec.tag == AccessTag::kLt && lt.size() < 2) lt.push_back(rec.id);
  }
  ASSERT_EQ(lt.size(), 2u);
  std::set<uint32_t> ids;
  for (const auto& id : lt) {
    EXPECT_EQ(id.kind, ObjectId::Kind::kSeq);
    ids.insert(id.obj);
  }
  EXPECT_EQ(ids, (std::set<uint32_t>{0, 1}));
}

TEST(TrackingTest, WrapTaggsLeavesDepthFirst) {
  IdAllocator ids = IdAllocator::ForMessage(0, 2, 7);
  Value v = WrapTracked(Value::Tuple({Value::Str("req"), I(4), Value::Pid({0, 1, 0}), Ints({5})}), ids);
  ASSERT_TRUE(v.elems()[0].tracked());
  EXPECT_EQ(v.elems()[0].track(), ObjectId::Msg(0, 2, 7, 0));
  EXPECT_EQ(v.elems()[1].track(), ObjectId::Msg(0, 2, 7, 1));
  EXPECT_FALSE(v.elems()[2].tracked());
  EXPECT_EQ(v.elems()[3].elems()[0].track(), ObjectId::Msg(0, 2, 7, 2));
}

// Property: tracking changes neither results nor the instruction trace.
TEST(TrackingTest, TrackingIsTransparent) {
  for (const std::string& name : {"sort4", "patsearch3", "lcs3"}) {
    bench::Benchmark b = bench::LoadBenchmark(name);
    for (const auto& v : b.variants) {
      auto prog = CompileText(v.source);
      for (uint64_t in = 1; in <= 5; ++in) {
        ExecuteOptions plain;
        plain.trace = true;
        ExecuteOptions tracked = plain;
        tracked.access = tracked.track_inputs = true;
        auto x = Execute(prog, b.entry, b.input(in), plain);
        auto y = Execute(prog, b.entry, b.input(in), tracked);
        EXPECT_EQ(x.result, y.result) << v.name;
        EXPECT_EQ(x.trace, y.trace) << v.name;
        EXPECT_FALSE(y.result.AnyTracked());
        EXPECT_FALSE(y.accesses.empty()) << v.name;
      }
    }
  }
}

TEST(TraceTest, CorpusTracesReplayAgainstTheCfg) {
  for (const std::string& name : {"sort4", "patsearch3", "lcs3"}) {
    bench::Benchmark b = bench::LoadBenchmark(name);
    for (const auto& v : b.variants) {
      auto prog = CompileText(v.source);
      ExecuteOptions opts;
      opts.trace = true;
      auto r = Execute(prog, b.entry, b.input(2), opts);
      std::vector<std::string> roots = {b.entry};
      if (prog->FindUnit(lang::kGlobalsUnit)) roots.insert(roots.begin(), std::string(lang::kGlobalsUnit));
      TraceCheck ok = VerifyTrace(*prog, roots, r.trace);
      EXPECT_TRUE(ok.ok) << v.name << ": " << ok.message;
      Trace cut = r.trace;
      cut.erase(cut.begin() + static_cast<long>(cut.size() / 2));
      EXPECT_FALSE(VerifyTrace(*prog, roots, cut).ok) << v.name;
    }
  }
}

TEST(TraceTest, UnitFilterDropsEvents) {
  auto prog = CompileText("func g(x) { return x + 1 }\nfunc f() { return g(1) + g(2) }");
  ExecuteOptions all;
  all.trace = true;
  ExecuteOptions filtered = all;
  filtered.unit_filter = {"g"};
  EXPECT_GT(Execute(prog, "f", {}, all).trace.size(), Execute(prog, "f", {}, filtered).trace.size());
}

TEST(LogsTest, JsonlRoundTrip) {
  ExecuteOptions opts;
  opts.trace = opts.access = opts.track_inputs = true;
  auto r = Execute(CompileText(bench::CorpusSource("patsearch_kmp")), "search",
                   {Value::Str("abaab"), Value::Str("ab")}, opts);
  std::stringstream ts, as;
  WriteTraceJsonl(ts, r.trace);
  WriteAccessJsonl(as, r.accesses);
  EXPECT_EQ(ReadTraceJsonl(ts), r.trace);
  EXPECT_EQ(ReadAccessJsonl(as), r.accesses);
}

TEST(VmTest, AdditionLowering) {
  ExecuteOptions opts;
  opts.trace = true;
  auto r = Execute(CompileText("func f() { return 2 + 3 }"), "f", {}, opts);
  EXPECT_EQ(r.result, I(5));
  std::vector<lang::Opcode> ops;
  for (const auto& e : r.trace) ops.push_back(e.op);
  EXPECT_EQ(ops, (std::vector<lang::Opcode>{lang::Opcode::kPushConst, lang::Opcode::kPushConst,
                                            lang::Opcode::kBinaryOp, lang::Opcode::kReturn}));
}

TEST(VmTest, ArityMismatchAtEntry) {
  try {
    Execute(CompileText("func f(a) { return a }"), "f", {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kArity);
  }
}

}  // namespace
}  // namespace algodiv::vm
