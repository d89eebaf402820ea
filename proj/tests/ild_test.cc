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

#include "algodiv/ild/ild.h"

#include <gtest/gtest.h>

#include <set>
#include <string>

#include "algodiv/bench/corpus.h"
#include "algodiv/bench/experiment.h"
#include "algodiv/core/error.h"
#include "algodiv/lang/ast.h"
#include "algodiv/lang/compiler.h"
#include "algodiv/lang/parser.h"
#include "algodiv/lang/printer.h"
#include "algodiv/sync/system.h"
#include "algodiv/vm/execute.h"
#include "support.h"

namespace algodiv::ild {
namespace {

using lang::Ast;
using lang::Parse;

size_t Count(const std::string& text, const std::string& needle) {
  size_t n = 0;
  for (size_t p = text.find(needle); p != std::string::npos; p = text.find(needle, p + 1)) ++n;
  return n;
}

Value RunAst(const Ast& ast, const std::string& entry, std::vector<Value> args) {
  auto prog = std::make_shared<const lang::CompiledProgram>(lang::Compile(ast, lang::CompileMode::kPlain));
  return vm::Execute(prog, entry, std::move(args)).result;
}

const char* kBranchy =
    "func f(x, y) {\n"
    "  a = x * 2\n"
    "  b = y + 1\n"
    "  c = 0\n"
    "  if a < b { c = a } else { c = b }\n"
    "  if x == y { c = c + 100 }\n"
    "  return (c, a - b)\n"
    "}\n"
    "func g(p, q) { return p - q }\n"
    "func h() { return g(10, 3) }\n";

TEST(IldTest, SwapPairsIsAnInvolution) {
  std::vector<int> v = {1, 2, 3, 4, 5};
  EXPECT_EQ(SwapPairs(v), (std::vector<int>{2, 1, 4, 3, 5}));
  EXPECT_EQ(SwapPairs(SwapPairs(v)), v);
}

TEST(IldTest, ZeroProbabilityTransformsAreIdentities) {
  Ast ast = Parse(bench::CorpusSource("lamutex_a"));
  SplitMix64 rng(3);
  EXPECT_TRUE(lang::AstEqual(NopInsert(ast, 0.0, rng), ast));
  EXPECT_TRUE(lang::AstEqual(StmtReorder(ast, 0.0, rng), ast));
  EXPECT_TRUE(lang::AstEqual(BranchReorder(ast, 0.0, rng), ast));
  EXPECT_TRUE(lang::AstEqual(FuncReorder(ast, 0.0, rng), ast));
}

TEST(IldTest, NopInsertAddsPasses) {
  Ast ast = Parse(kBranchy);
  SplitMix64 rng(1);
  Ast out = NopInsert(ast, 1.0, rng);
  EXPECT_GT(Count(lang::Print(out), "pass"), Count(lang::Print(ast), "pass"));
  EXPECT_EQ(RunAst(out, "f", {Value::Int(3), Value::Int(3)}), RunAst(ast, "f", {Value::Int(3), Value::Int(3)}));
}

TEST(IldTest, IndependenceRules) {
  auto body = [](const std::string& src) {
    Ast a = Parse("func f(x, y) {\n" + src + "\n}");
    return std::get<lang::FuncDef>(a.items[0]).body;
  };
  auto b1 = body("a = 1\nb = 2");
  EXPECT_TRUE(Independent(b1[0], b1[1]));
  auto b2 = body("a = 1\nb = a");
  EXPECT_FALSE(Independent(b2[0], b2[1]));
  auto b3 = body("a = x\nx = 2");
  EXPECT_FALSE(Independent(b3[0], b3[1]));
  auto b4 = body("a = 1\noutput(a)");
  EXPECT_FALSE(Independent(b4[0], b4[1]));
}

TEST(IldTest, StmtReorderSwapsIndependentNeighbours) {
  Ast ast = Parse(kBranchy);
  SplitMix64 rng(5);
  Ast out = StmtReorder(ast, 1.0, rng);
  EXPECT_FALSE(lang::AstEqual(out, ast));
  for (int x = -3; x <= 3; ++x) {
    for (int y = -3; y <= 3; ++y) {
      std::vector<Value> args = {Value::Int(x), Value::Int(y)};
      EXPECT_EQ(RunAst(out, "f", args), RunAst(ast, "f", args));
    }
  }
}

TEST(IldTest, BranchReorderNegatesConditions) {
  Ast ast = Parse(kBranchy);
  SplitMix64 rng(2);
  Ast out = BranchReorder(ast, 1.0, rng);
  EXPECT_NE(lang::Print(out), lang::Print(ast));
  for (int x = -3; x <= 3; ++x) {
    for (int y = -3; y <= 3; ++y) {
      std::vector<Value> args = {Value::Int(x), Value::Int(y)};
      EXPECT_EQ(RunAst(out, "f", args), RunAst(ast, "f", args));
    }
  }
}

TEST(IldTest, FuncReorderKeepsTheSetOfFunctions) {
  Ast ast = Parse(kBranchy);
  SplitMix64 rng(1);
  Ast out = FuncReorder(ast, 1.0, rng);
  ASSERT_EQ(out.items.size(), ast.items.size());
  std::multiset<std::string> before, after;
  for (const auto& it : ast.items) before.insert(std::get<lang::FuncDef>(it).name);
  for (const auto& it : out.items) after.insert(std::get<lang::FuncDef>(it).name);
  EXPECT_EQ(before, after);
  EXPECT_FALSE(lang::AstEqual(out, ast));
}

TEST(IldTest, ArgReorderSwapsParametersAndCallSites) {
  Ast ast = Parse(kBranchy);
  Ast out = ArgReorder(ast);
  EXPECT_EQ(RunAst(out, "h", {}), Value::Int(7));
  EXPECT_EQ(std::get<lang::FuncDef>(out.items[1]).params, (std::vector<std::string>{"q", "p"}));
  std::vector<Value> args = {Value::Int(1), Value::Int(5)};
  EXPECT_EQ(RunAst(out, "f", SwapPairs(args)), RunAst(ast, "f", args));
}

TEST(IldTest, FieldReorderPreservesDistributedBehaviour) {
  bench::Benchmark b = bench::LoadBenchmark("lamutex2");
  auto ast = std::make_shared<const Ast>(FieldReorder(bench::VariantAst(b, 0)));
  sync::ExecutionRecord rec = sync::Simulate(bench::PlainSystemConfig(b, {"f", ast, false}, b.input(1), 3));
  EXPECT_EQ(b.check_run(b.input(1), rec), std::nullopt);
}

TEST(IldTest, ApplyIldIsDeterministicPerSeed) {
  Ast ast = Parse(bench::CorpusSource("sort_quick"));
  IldProfile p;
  p.seed = 4;
  EXPECT_TRUE(lang::AstEqual(ApplyIld(ast, p), ApplyIld(ast, p)));
  bool differs = false;
  for (uint64_t s = 5; s < 10 && !differs; ++s) {
    IldProfile q = p;
    q.seed = s;
    differs = !lang::AstEqual(ApplyIld(ast, q), ApplyIld(ast, p));
  }
  EXPECT_TRUE(differs);
}

TEST(IldTest, DisabledTransformsAreSkipped) {
  Ast ast = Parse(bench::CorpusSource("lcs_iterative"));
  IldProfile p;
  p.enabled.clear();
  EXPECT_TRUE(lang::AstEqual(ApplyIld(ast, p), ast));
}

// Property: every ILD variant of every sequential program agrees with its
// original on random inputs.
TEST(IldTest, SequentialSemanticsPreserved) {
  IldProfile profile;
  for (const std::string& name : {"sort4", "patsearch3", "lcs3"}) {
    bench::Benchmark b = bench::LoadBenchmark(name);
    for (int i = 0; i < static_cast<int>(b.variants.size()); ++i) {
      Ast orig = bench::VariantAst(b, i);
      for (uint64_t s = 11; s <= 14; ++s) {
        Ast var = bench::IldVariantAst(b, i, profile, s);
        for (uint64_t in = 200; in < 205; ++in) {
          EXPECT_EQ(RunAst(var, b.entry, bench::IldArgs(profile, b.input(in))), RunAst(orig, b.entry, b.input(in)))
              << b.variants[i].name << " seed " << s << " input " << in;
        }
      }
    }
  }
}

TEST(IldProfileTest, JsonRoundTrip) {
  IldProfile p;
  p.nop_probability = 0.25;
  p.seed = 17;
  p.enabled = {Transform::kNopInsert, Transform::kFuncReorder};
  IldProfile q = ProfileFromJson(ProfileToJson(p));
  EXPECT_EQ(ProfileToJson(q), ProfileToJson(p));
  EXPECT_TRUE(q.Enabled(Transform::kNopInsert));
  EXPECT_FALSE(q.Enabled(Transform::kArgReorder));
}

TEST(IldProfileTest, UnknownTransformRejected) {
  EXPECT_THROW(ProfileFromJson(nlohmann::json::parse("{\"enabled\": [\"shuffle_everything\"]}")), Error);
  EXPECT_EQ(TransformFromName("nop_insert"), Transform::kNopInsert);
  EXPECT_EQ(TransformFromName("bogus"), std::nullopt);
}

const std::vector<lang::Stmt>& Body(const Ast& ast) { return std::get<lang::FuncDef>(ast.items[0]).body; }

TEST(IldTest, NopInsertAtProbabilityOne) {
  Ast ast = Parse("func f() {\n  x = 1\n  y = 2\n}");
  SplitMix64 rng(9);
  EXPECT_TRUE(lang::AstEqual(NopInsert(ast, 1.0, rng), Parse("func f() {\n  x = 1\n  pass\n  y = 2\n  pass\n}")));
}

// Binomial(1000, 0.05) lies in [33, 69] with probability 0.99.
TEST(IldTest, NopInsertRateMatchesProbability) {
  std::string src = "func f() {\n";
  for (int i = 0; i < 1000; ++i) src += "  x = 1\n";
  src += "}";
  Ast ast = Parse(src);
  SplitMix64 rng(1);
  size_t passes = Body(NopInsert(ast, 0.05, rng)).size() - 1000;
  EXPECT_GE(passes, 33u);
  EXPECT_LE(passes, 69u);
}

TEST(IldTest, StmtReorderExamples) {
  SplitMix64 rng(1);
  EXPECT_TRUE(lang::AstEqual(StmtReorder(Parse("func f() {\n  x = 1\n  y = 2\n}"), 1.0, rng),
                             Parse("func f() {\n  y = 2\n  x = 1\n}")));
  Ast dep = Parse("func f() {\n  x = 1\n  y = x\n}");
  EXPECT_TRUE(lang::AstEqual(StmtReorder(dep, 1.0, rng), dep));
  Ast snd = Parse("process P {\n  run() {\n    send (\"m\", 1) to self\n    x = 1\n  }\n}");
  EXPECT_TRUE(lang::AstEqual(StmtReorder(snd, 1.0, rng), snd));
}

TEST(IldTest, BranchReorderExample) {
  SplitMix64 rng(1);
  Ast out = BranchReorder(Parse("func f(c) {\n  if c {\n    a = 1\n  } else {\n    a = 2\n  }\n}"), 1.0, rng);
  EXPECT_TRUE(lang::AstEqual(out, Parse("func f(c) {\n  if not c {\n    a = 2\n  } else {\n    a = 1\n  }\n}")))
      << lang::Print(out);
}

TEST(IldTest, QuicksortSeedOneOnHundredInputs) {
  bench::Benchmark b = bench::LoadBenchmark("sort4");
  int quick = -1;
  for (int i = 0; i < static_cast<int>(b.variants.size()); ++i) {
    if (b.variants[i].name == "sort_quick") quick = i;
  }
  ASSERT_GE(quick, 0);
  IldProfile profile;
  auto orig = std::make_shared<const lang::CompiledProgram>(lang::Compile(bench::VariantAst(b, quick), lang::CompileMode::kPlain));
  auto var = std::make_shared<const lang::CompiledProgram>(
      lang::Compile(bench::IldVariantAst(b, quick, profile, 1), lang::CompileMode::kPlain));
  for (uint64_t in = 1; in <= 100; ++in) {
    EXPECT_EQ(vm::Execute(var, "sort", bench::IldArgs(profile, b.input(in))).result,
              vm::Execute(orig, "sort", b.input(in)).result);
  }
}

}  // namespace
}  // namespace algodiv::ild
