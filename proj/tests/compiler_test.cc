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

#include "algodiv/bench/corpus.h"
#include "algodiv/core/error.h"
#include "algodiv/lang/bytecode.h"
#include "algodiv/lang/compiler.h"
#include "algodiv/lang/parser.h"
#include "support.h"

namespace algodiv::lang {
namespace {

CompiledProgram Build(const std::string& src, CompileMode mode = CompileMode::kPlain) {
  return Compile(Parse(src), mode);
}

bool HasOp(const CompiledProgram& p, Opcode op) {
  for (const auto& u : p.units) {
    for (const auto& ins : u.code) {
      if (ins.op == op) return true;
    }
  }
  return false;
}

TEST(CompilerTest, CorpusCompilesAndVerifiesInBothModes) {
  for (const auto& [stem, text] : bench::EmbeddedSources()) {
    for (CompileMode mode : {CompileMode::kPlain, CompileMode::kSync}) {
      CompiledProgram p = Build(text, mode);
      EXPECT_NO_THROW(Verify(p)) << stem;
      EXPECT_EQ(p.FindUnit(kGlobalsUnit) != nullptr, !p.globals.empty()) << stem;
    }
  }
}

TEST(CompilerTest, JsonRoundTrip) {
  for (const auto& [stem, text] : bench::EmbeddedSources()) {
    CompiledProgram p = Build(text, CompileMode::kSync);
    nlohmann::json j = ProgramToJson(p);
    CompiledProgram q = ProgramFromJson(j);
    EXPECT_EQ(ProgramToJson(q), j) << stem;
    EXPECT_EQ(Disassemble(q), Disassemble(p)) << stem;
  }
}

TEST(CompilerTest, SyncModeAddsGatewayPlumbing) {
  const std::string& src = bench::CorpusSource("lamutex_a");
  CompiledProgram plain = Build(src);
  CompiledProgram sync = Build(src, CompileMode::kSync);
  EXPECT_EQ(plain.FindUnit("P.send_sync"), nullptr);
  ASSERT_NE(sync.FindUnit("P.send_sync"), nullptr);
  ASSERT_NE(sync.FindUnit("P.yield_sync"), nullptr);
  const ProcessInfo* pp = plain.FindProcess("P");
  const ProcessInfo* sp = sync.FindProcess("P");
  ASSERT_NE(pp, nullptr);
  ASSERT_NE(sp, nullptr);
  EXPECT_EQ(sp->setup_arity, pp->setup_arity + 1);
  EXPECT_EQ(pp->handlers.size(), 2u);
  EXPECT_EQ(pp->handlers[0].kind, "request");
  EXPECT_EQ(pp->handlers[1].kind, "release");
  // Only the generated send_sync sends directly.
  for (const auto& u : sync.units) {
    bool sends = false;
    for (const auto& ins : u.code) sends |= ins.op == Opcode::kSend;
    if (sends) EXPECT_EQ(u.name, "P.send_sync");
  }
}

TEST(CompilerTest, ProcessOpcodesAppearOnlyWhereUsed) {
  EXPECT_TRUE(HasOp(Build(bench::CorpusSource("lamutex_a")), Opcode::kSend));
  EXPECT_TRUE(HasOp(Build(bench::CorpusSource("lamutex_a")), Opcode::kYieldPoint));
  EXPECT_FALSE(HasOp(Build(bench::CorpusSource("sort_quick")), Opcode::kSend));
  EXPECT_FALSE(HasOp(Build(bench::CorpusSource("sort_quick")), Opcode::kYieldPoint));
}

TEST(CompilerTest, ArityErrors) {
  try {
    Build("func f(a) { return a }\nfunc g() { return f(1, 2) }");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kArity);
  }
  EXPECT_THROW(Build("func g() { return range(1, 2, 3, 4) }"), Error);
}

TEST(CompilerTest, UnresolvedNames) {
  try {
    Build("func g() { return h }");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnresolvedName);
  }
}

TEST(VerifierTest, RejectsBrokenBytecode) {
  CompiledProgram p = Build("func f(x) { if x { return 1 } return 2 }");
  CodeUnit* u = nullptr;
  for (auto& unit : p.units) {
    if (unit.name == "f") u = &unit;
  }
  ASSERT_NE(u, nullptr);
  CompiledProgram bad_jump = p;
  for (auto& unit : bad_jump.units) {
    for (auto& ins : unit.code) {
      if (IsJump(ins.op)) ins.arg = 10000;
    }
  }
  EXPECT_THROW(Verify(bad_jump), Error);

  CompiledProgram bad_local = p;
  for (auto& unit : bad_local.units) {
    for (auto& ins : unit.code) {
      if (ins.op == Opcode::kLoadLocal) ins.arg = 99;
    }
  }
  EXPECT_THROW(Verify(bad_local), Error);

  CompiledProgram no_return = p;
  for (auto& unit : no_return.units) {
    if (unit.name == "f") unit.code = {{Opcode::kPushConst, 0}};
  }
  EXPECT_THROW(Verify(no_return), Error);
}

TEST(DisassembleTest, ListsEveryUnit) {
  CompiledProgram p = Build(bench::CorpusSource("twopc_a"));
  std::string text = Disassemble(p);
  for (const auto& u : p.units) EXPECT_NE(text.find(u.name), std::string::npos) << u.name;
}

TEST(CompilerTest, CompilationIsDeterministic) {
  for (const auto& [stem, text] : bench::EmbeddedSources()) {
    EXPECT_EQ(ProgramToJson(Build(text, CompileMode::kSync)), ProgramToJson(Build(text, CompileMode::kSync))) << stem;
  }
}

TEST(DisassembleTest, EmptyProgramIsHeaderOnly) {
  std::string text = Disassemble(Build(""));
  EXPECT_LE(std::count(text.begin(), text.end(), '\n'), 1);
}

TEST(DisassembleTest, LamutexListingShowsSendAndYield) {
  std::string text = Disassemble(Build(bench::CorpusSource("lamutex_a")));
  EXPECT_NE(text.find("SEND"), std::string::npos);
  EXPECT_NE(text.find("YIELD_POINT"), std::string::npos);
}

}  // namespace
}  // namespace algodiv::lang
