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

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "algodiv/bench/experiment.h"
#include "algodiv/core/error.h"
#include "algodiv/ild/ild.h"
#include "algodiv/lang/bytecode.h"
#include "algodiv/lang/compiler.h"
#include "algodiv/lang/parser.h"
#include "algodiv/lang/printer.h"
#include "algodiv/metrics/diversity.h"
#include "algodiv/metrics/fingerprint.h"
#include "algodiv/sync/config.h"
#include "algodiv/sync/system.h"
#include "algodiv/vm/execute.h"
#include "algodiv/vm/logs.h"
#include "json.hpp"

namespace algodiv::cli {
namespace {

std::string ReadFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json ReadJson(const std::string& path) {
  try {
    return nlohmann::json::parse(ReadFile(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kConfig, path + ": " + e.what());
  }
}

// Writes to `path`, or to `out` when path is empty or "-".
void Emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::kIo, "cannot write " + path);
  f << text;
}

// A Mini source, or a compiled program as written by `compile`.
lang::CompiledProgram LoadProgram(const std::string& path, bool sync) {
  std::string text = ReadFile(path);
  size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    try {
      nlohmann::json j = nlohmann::json::parse(text);
      if (j.contains("units")) return lang::ProgramFromJson(j);
    } catch (const nlohmann::json::parse_error&) {
    }
  }
  return lang::Compile(lang::Parse(text), sync ? lang::CompileMode::kSync : lang::CompileMode::kPlain);
}

template <typename T>
T ReadLogFile(const std::string& path, T (*reader)(std::istream&)) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path);
  return reader(in);
}

}  // namespace

std::string FormatValue(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Algorithm and implementation diversity toolkit"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  std::string file, out_path;
  bool sync = false;
  auto* compile = app.add_subcommand("compile", "Compile a Mini program to bytecode JSON");
  compile->add_option("file", file, "Mini source")->required();
  compile->add_flag("--sync", sync, "Apply the synchronized-execution transformation");
  compile->add_option("-o,--out", out_path, "Output file");

  auto* disasm = app.add_subcommand("disasm", "Print a bytecode listing");
  disasm->add_option("file", file, "Mini source or compiled JSON")->required();
  disasm->add_flag("--sync", sync, "Apply the synchronized-execution transformation");

  uint64_t seed = 1;
  std::string profile_path;
  auto* ild_cmd = app.add_subcommand("ild", "Print an implementation-level variant");
  ild_cmd->add_option("file", file, "Mini source")->required();
  ild_cmd->add_option("--seed", seed, "Transformation seed");
  ild_cmd->add_option("--profile", profile_path, "ILD profile JSON");
  ild_cmd->add_option("-o,--out", out_path, "Output file");

  std::string entry, args_json, trace_path, access_path;
  bool track_input = false;
  auto* run = app.add_subcommand("run", "Run one function of a sequential program");
  run->add_option("file", file, "Mini source or compiled JSON")->required();
  run->add_option("--entry", entry, "Function to call")->required();
  run->add_option("--args", args_json, "JSON array of arguments");
  run->add_option("--trace", trace_path, "Write the instruction trace (JSONL)");
  run->add_option("--access", access_path, "Write the input access log (JSONL)");
  run->add_flag("--track-input", track_input, "Track the arguments as inputs");

  int ngram = 5;
  int winnow = 0;
  auto* fp = app.add_subcommand("fingerprint", "Print a program's n-gram fingerprint");
  fp->add_option("file", file, "Mini source or compiled JSON")->required();
  fp->add_option("--n", ngram, "n-gram length")->check(CLI::PositiveNumber);
  fp->add_option("--winnow", winnow, "Winnow with this window size")->check(CLI::PositiveNumber);

  std::string metric;
  std::string file_b;
  auto* div = app.add_subcommand("diversity", "Diversity of two programs (code) or two logs (trace, access)");
  div->add_option("--metric", metric, "code, trace or access")
      ->required()
      ->check(CLI::IsMember({"code", "trace", "access", "input_access"}));
  div->add_option("a", file, "First program or log")->required();
  div->add_option("b", file_b, "Second program or log")->required();
  div->add_option("--n", ngram, "n-gram length")->check(CLI::PositiveNumber);
  div->add_option("--winnow", winnow, "Winnow with this window size")->check(CLI::PositiveNumber);

  std::optional<uint64_t> sim_seed;
  bool sim_trace = false;
  auto* sim = app.add_subcommand("simulate", "Run a system configuration; print the execution record");
  sim->add_option("config", file, "System configuration JSON")->required();
  sim->add_option("--seed", sim_seed, "Override the scheduler seed");
  sim->add_flag("--trace", sim_trace, "Record traces and access logs");
  sim->add_option("-o,--out", out_path, "Output file (JSONL)");

  auto* exp = app.add_subcommand("experiment", "Run a diversity experiment");
  exp->add_option("config", file, "Experiment configuration JSON")->required();

  auto* list = app.add_subcommand("benchmarks", "List the built-in benchmarks");

  std::vector<std::string> argv_store = {"algodiv"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << nlohmann::json{{"error", ErrorCodeName(ErrorCode::kUsage)}, {"message", e.what()}}.dump() << "\n";
    return 2;
  }

  try {
    if (*compile) {
      lang::CompiledProgram p =
          lang::Compile(lang::Parse(ReadFile(file)), sync ? lang::CompileMode::kSync : lang::CompileMode::kPlain);
      Emit(out_path, lang::ProgramToJson(p).dump(2) + "\n", out);
    } else if (*disasm) {
      out << lang::Disassemble(LoadProgram(file, sync));
    } else if (*ild_cmd) {
      ild::IldProfile profile;
      if (!profile_path.empty()) profile = ild::ProfileFromJson(ReadJson(profile_path));
      profile.seed = seed;
      lang::Ast ast = ild::ApplyIld(lang::Parse(ReadFile(file)), profile);
      Emit(out_path, lang::Print(ast), out);
    } else if (*run) {
      std::vector<Value> call_args;
      if (!args_json.empty()) {
        nlohmann::json j;
        try {
          j = nlohmann::json::parse(args_json);
        } catch (const nlohmann::json::parse_error& e) {
          throw Error(ErrorCode::kUsage, std::string("--args: ") + e.what());
        }
        if (!j.is_array()) throw Error(ErrorCode::kUsage, "--args must be a JSON array");
        for (const auto& a : j) call_args.push_back(ValueFromJson(a));
      }
      vm::ExecuteOptions opts;
      opts.trace = !trace_path.empty();
      opts.access = !access_path.empty();
      opts.track_inputs = track_input;
      vm::ExecuteResult r = vm::Execute(LoadProgram(file, false), entry, call_args, opts);
      if (opts.trace) {
        std::ofstream f(trace_path);
        if (!f) throw Error(ErrorCode::kIo, "cannot write " + trace_path);
        vm::WriteTraceJsonl(f, r.trace);
      }
      if (opts.access) {
        std::ofstream f(access_path);
        if (!f) throw Error(ErrorCode::kIo, "cannot write " + access_path);
        vm::WriteAccessJsonl(f, r.accesses);
      }
      out << nlohmann::json{{"result", ValueToJson(r.result)}, {"steps", r.steps}}.dump() << "\n";
    } else if (*fp) {
      metrics::FingerprintParams params;
      params.n = ngram;
      if (winnow > 0) {
        params.winnow = true;
        params.w = winnow;
      }
      out << metrics::FingerprintToJson(metrics::NgramFingerprint(LoadProgram(file, false), params)).dump() << "\n";
    } else if (*div) {
      double v = 0;
      if (metric == "code") {
        metrics::FingerprintParams params;
        params.n = ngram;
        if (winnow > 0) {
          params.winnow = true;
          params.w = winnow;
        }
        v = metrics::CodeDiversity(metrics::NgramFingerprint(LoadProgram(file, false), params),
                                   metrics::NgramFingerprint(LoadProgram(file_b, false), params));
      } else if (metric == "trace") {
        v = metrics::TraceDiversity(ReadLogFile(file, &vm::ReadTraceJsonl), ReadLogFile(file_b, &vm::ReadTraceJsonl));
      } else {
        v = metrics::AccessDiversity(ReadLogFile(file, &vm::ReadAccessJsonl),
                                     ReadLogFile(file_b, &vm::ReadAccessJsonl));
      }
      out << FormatValue(v) << "\n";
    } else if (*sim) {
      sync::SystemConfig cfg = sync::ConfigFromJson(ReadJson(file), std::filesystem::path(file).parent_path());
      if (sim_seed) cfg.seed = *sim_seed;
      if (sim_trace) {
        cfg.trace = true;
        cfg.access = true;
      }
      Emit(out_path, sync::RecordToJsonl(sync::Simulate(cfg)), out);
    } else if (*exp) {
      std::filesystem::path path = file;
      bench::ExperimentConfig cfg = bench::ExperimentConfigFromJson(ReadJson(file), path.parent_path());
      std::filesystem::path stem = path.parent_path() / path.stem();
      if (cfg.tsv_path.empty()) cfg.tsv_path = stem.string() + ".tsv";
      if (cfg.json_path.empty()) cfg.json_path = stem.string() + ".report.json";
      bench::ExperimentResult result = bench::RunExperiment(cfg);
      std::string tsv = metrics::ReportsToTsv(result.reports, result.benchmarks);
      Emit(cfg.tsv_path, tsv, out);
      Emit(cfg.json_path, bench::ExperimentResultToJson(result, cfg).dump(2) + "\n", out);
      out << tsv;
      for (const auto& f : result.failures) {
        err << nlohmann::json{{"benchmark", f.benchmark}, {"variant", f.variant}, {"oracle_failure", f.reason}}.dump()
            << "\n";
      }
      if (!result.failures.empty()) return 1;
    } else if (*list) {
      for (const std::string& name : bench::BenchmarkNames()) {
        bench::Benchmark b = bench::LoadBenchmark(name);
        out << name << "\t" << (b.kind == bench::BenchKind::kSequential ? "sequential" : "distributed");
        for (const auto& v : b.variants) out << "\t" << v.name;
        out << "\n";
      }
    }
  } catch (const Error& e) {
    err << nlohmann::json{{"error", ErrorCodeName(e.code())}, {"message", e.what()}}.dump() << "\n";
    return e.code() == ErrorCode::kUsage ? 2 : 1;
  } catch (const std::exception& e) {
    err << nlohmann::json{{"error", "internal"}, {"message", e.what()}}.dump() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace algodiv::cli
