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

#include "cli.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "algodiv/bench/corpus.h"
#include "json.hpp"

namespace algodiv::cli {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("algodiv_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Put(const std::string& name, const std::string& text) {
    std::ofstream(dir_ / name) << text;
    return (dir_ / name).string();
  }
  std::string Corpus(const std::string& stem) { return Put(stem + ".mini", bench::CorpusSource(stem)); }

  int Exec(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return algodiv::cli::Run(args, out_, err_);
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

TEST(FormatValueTest, ShortestDecimal) {
  EXPECT_EQ(FormatValue(0.0), "0.0");
  EXPECT_EQ(FormatValue(1.0), "1.0");
  EXPECT_EQ(FormatValue(0.5), "0.5");
  EXPECT_EQ(FormatValue(1.0 / 3.0), "0.3333333333333333");
}

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(Exec({}), 2);
  EXPECT_EQ(Exec({"frobnicate"}), 2);
  EXPECT_EQ(Exec({"diversity", "--metric", "vibes", "a", "b"}), 2);
  EXPECT_EQ(Exec({"run", Corpus("sort_quick"), "--entry", "sort", "--args", "{not json"}), 2);
  auto j = nlohmann::json::parse(err_.str());
  EXPECT_EQ(j["error"], "usage_error");
}

TEST_F(CliTest, MissingFileIsAnIoError) {
  EXPECT_EQ(Exec({"compile", (dir_ / "absent.mini").string()}), 1);
  EXPECT_EQ(nlohmann::json::parse(err_.str())["error"], "io_error");
}

TEST_F(CliTest, SyntaxErrorsAreReported) {
  EXPECT_EQ(Exec({"compile", Put("bad.mini", "func f( {")}), 1);
  EXPECT_EQ(nlohmann::json::parse(err_.str())["error"], "syntax_error");
}

TEST_F(CliTest, CompileThenRunFromJson) {
  std::string src = Corpus("sort_heap");
  std::string json = (dir_ / "heap.json").string();
  ASSERT_EQ(Exec({"compile", src, "-o", json}), 0);
  ASSERT_EQ(Exec({"run", json, "--entry", "sort", "--args", "[[5, 3, 9, 1]]"}), 0);
  auto j = nlohmann::json::parse(out_.str());
  EXPECT_EQ(j["result"], nlohmann::json::parse("{\"seq\": [1, 3, 5, 9]}"));
  EXPECT_GT(j["steps"].get<int>(), 0);
}

TEST_F(CliTest, DisasmSyncShowsGatewayUnits) {
  ASSERT_EQ(Exec({"disasm", "--sync", Corpus("ramutex")}), 0);
  EXPECT_NE(out_.str().find("send_sync"), std::string::npos);
}

TEST_F(CliTest, IldIsSeeded) {
  std::string src = Corpus("lcs_memo");
  ASSERT_EQ(Exec({"ild", src, "--seed", "3"}), 0);
  std::string a = out_.str();
  ASSERT_EQ(Exec({"ild", src, "--seed", "3"}), 0);
  EXPECT_EQ(out_.str(), a);
  std::string var = Put("var.mini", a);
  EXPECT_EQ(Exec({"compile", var}), 0);
}

TEST_F(CliTest, DiversityOfProgramsAndTraces) {
  std::string a = Corpus("sort_quick"), b = Corpus("sort_merge");
  ASSERT_EQ(Exec({"diversity", "--metric", "code", a, a}), 0);
  EXPECT_EQ(out_.str(), "0.0\n");
  ASSERT_EQ(Exec({"diversity", "--metric", "code", a, b}), 0);
  double v = std::stod(out_.str());
  EXPECT_GT(v, 0.0);
  EXPECT_LE(v, 1.0);

  std::string ta = (dir_ / "a.trace").string(), tb = (dir_ / "b.trace").string();
  std::string xa = (dir_ / "a.acc").string(), xb = (dir_ / "b.acc").string();
  ASSERT_EQ(Exec({"run", a, "--entry", "sort", "--args", "[[3, 1, 2]]", "--trace", ta, "--access", xa,
                  "--track-input"}),
            0);
  ASSERT_EQ(Exec({"run", b, "--entry", "sort", "--args", "[[3, 1, 2]]", "--trace", tb, "--access", xb,
                  "--track-input"}),
            0);
  ASSERT_EQ(Exec({"diversity", "--metric", "trace", ta, ta}), 0);
  EXPECT_EQ(out_.str(), "0.0\n");
  ASSERT_EQ(Exec({"diversity", "--metric", "access", xa, xb}), 0);
  v = std::stod(out_.str());
  EXPECT_GT(v, 0.0);
  EXPECT_LE(v, 2.0);
}

TEST_F(CliTest, FingerprintJson) {
  ASSERT_EQ(Exec({"fingerprint", Corpus("patsearch_naive"), "--n", "4", "--winnow", "3"}), 0);
  auto j = nlohmann::json::parse(out_.str());
  EXPECT_TRUE(j.contains("hashes"));
}

TEST_F(CliTest, SimulateWritesJsonl) {
  Corpus("lamutex_a");
  Corpus("lamutex_b");
  nlohmann::json cfg = {{"programs", {{"a", "lamutex_a.mini"}, {"b", "lamutex_b.mini"}}},
                        {"main", {{"program", "a"}, {"args", {3, 2}}}},
                        {"diversify", {{{"type", "P"}, {"variants", {"a:P", "b:P"}}}}}};
  std::string path = Put("sys.json", cfg.dump());
  ASSERT_EQ(Exec({"simulate", path, "--seed", "4"}), 0) << err_.str();
  std::istringstream lines(out_.str());
  std::string first;
  std::getline(lines, first);
  auto header = nlohmann::json::parse(first);
  EXPECT_EQ(header["status"], "quiescence");
  EXPECT_EQ(header["seed"], 4);
  EXPECT_EQ(out_.str().find("\"divergence\""), std::string::npos);
}

TEST_F(CliTest, ExperimentWritesTsvAndReport) {
  nlohmann::json cfg = {{"benchmarks", {"ramutex1"}}, {"metrics", {"code"}}};
  std::string path = Put("exp.json", cfg.dump());
  ASSERT_EQ(Exec({"experiment", path}), 0) << err_.str();
  EXPECT_TRUE(fs::exists(dir_ / "exp.tsv"));
  EXPECT_TRUE(fs::exists(dir_ / "exp.report.json"));
  EXPECT_NE(out_.str().find("ramutex1"), std::string::npos);
}

TEST_F(CliTest, BenchmarksListing) {
  ASSERT_EQ(Exec({"benchmarks"}), 0);
  EXPECT_EQ(out_.str().substr(0, 6), "sort4\t");
}

TEST_F(CliTest, ShippedDiversifiedConfigHasNoDivergence) {
  std::string path = std::string(ALGODIV_SOURCE_DIR) + "/configs/lamutex_diversified.json";
  ASSERT_EQ(Exec({"simulate", path}), 0) << err_.str();
  EXPECT_NE(out_.str().find("quiescence"), std::string::npos);
  EXPECT_EQ(out_.str().find("\"divergence\""), std::string::npos);
}

}  // namespace
}  // namespace algodiv::cli
