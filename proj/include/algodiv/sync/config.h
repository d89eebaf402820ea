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

#ifndef ALGODIV_SYNC_CONFIG_H_
#define ALGODIV_SYNC_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "algodiv/core/value.h"
#include "algodiv/lang/ast.h"
#include "json.hpp"

namespace algodiv::sync {

// A Mini program: inline source, a file, or an already parsed AST.
struct ProgramSpec {
  std::string name;
  std::string source;
  std::string file;
  std::shared_ptr<const lang::Ast> ast;
};

// Instances of `type` (as created by the main program) are replaced by a
// gateway running one variant per entry of `variants`. Entries are
// "program:Type" or "program" (same type name).
struct Diversification {
  std::string type;
  std::vector<std::string> variants;
  std::vector<int> instances;  // Creation indices of `type`; empty means all.
};

struct LatencyModel {
  int64_t base = 1;
  int64_t jitter = 0;  // Extra delay drawn uniformly from [0, jitter].
};

enum class FaultKind { kPayloadFlip, kDestinationFlip, kSuppressSend, kBlockFlip };
const char* FaultKindName(FaultKind k);
std::optional<FaultKind> FaultKindFromName(std::string_view name);

struct FaultSpec {
  FaultKind kind = FaultKind::kPayloadFlip;
  int gateway = 0;  // Gateway creation index.
  int variant = 1;
  // Which synchronized send (1-based) or yield to alter; 0 picks the
  // default: the first one, or for kSuppressSend the first send of
  // `message_kind`.
  int at = 0;
  std::string message_kind = "done";
};

struct SystemConfig {
  std::vector<ProgramSpec> programs;
  std::string main_program;
  std::string entry = "main";
  std::vector<Value> args;
  std::vector<Diversification> diversify;
  std::vector<std::string> unsync_kinds;
  uint64_t seed = 1;
  LatencyModel latency;
  int64_t outbound_deadline = 1000;
  double epsilon_fraction = 0.05;
  int64_t epsilon_min = 1;
  int64_t max_time = 1'000'000;
  uint64_t max_events = 20'000'000;
  bool trace = false;
  bool access = false;
  std::vector<std::string> unit_filter = {"*.send_sync", "*.yield_sync"};
  uint64_t step_budget = 10'000'000;
  std::vector<FaultSpec> faults;
};

// Relative "file" entries resolve against `base_dir`. Throws kConfig.
SystemConfig ConfigFromJson(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
nlohmann::json ConfigToJson(const SystemConfig& cfg);

}  // namespace algodiv::sync

#endif  // ALGODIV_SYNC_CONFIG_H_
