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

#include "algodiv/sync/config.h"

#include <set>
#include <string>

#include "algodiv/core/error.h"

namespace algodiv::sync {

const char* FaultKindName(FaultKind k) {
  switch (k) {
    case FaultKind::kPayloadFlip: return "payload_flip";
    case FaultKind::kDestinationFlip: return "destination_flip";
    case FaultKind::kSuppressSend: return "suppress_send";
    case FaultKind::kBlockFlip: return "block_flip";
  }
  return "?";
}

std::optional<FaultKind> FaultKindFromName(std::string_view name) {
  for (FaultKind k : {FaultKind::kPayloadFlip, FaultKind::kDestinationFlip, FaultKind::kSuppressSend,
                      FaultKind::kBlockFlip}) {
    if (name == FaultKindName(k)) return k;
  }
  return std::nullopt;
}

SystemConfig ConfigFromJson(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  SystemConfig c;
  try {
    if (!j.is_object()) throw Error(ErrorCode::kConfig, "configuration must be a JSON object");
    static const std::set<std::string> kKeys = {
        "programs", "main",     "diversify",  "unsync",      "seed",  "latency",     "outbound_deadline",
        "epsilon_fraction", "epsilon_min", "max_time", "max_events", "trace", "access", "unit_filter",
        "step_budget", "faults"};
    for (const auto& [key, unused] : j.items()) {
      if (!kKeys.count(key)) throw Error(ErrorCode::kConfig, "unknown configuration key '" + key + "'");
    }
    if (!j.at("programs").is_object()) throw Error(ErrorCode::kConfig, "'programs' must map names to programs");
    for (const auto& [name, p] : j.at("programs").items()) {
      ProgramSpec spec;
      spec.name = name;
      if (p.is_string()) {
        spec.file = p.get<std::string>();
      } else {
        spec.source = p.value("source", "");
        spec.file = p.value("file", "");
      }
      if (!spec.file.empty() && std::filesystem::path(spec.file).is_relative() && !base_dir.empty()) {
        spec.file = (base_dir / spec.file).string();
      }
      if (spec.file.empty() && spec.source.empty()) {
        throw Error(ErrorCode::kConfig, "program '" + name + "' needs a source or file");
      }
      c.programs.push_back(std::move(spec));
    }
    const auto& main = j.at("main");
    c.main_program = main.at("program").get<std::string>();
    c.entry = main.value("entry", "main");
    if (main.contains("args")) {
      for (const auto& a : main["args"]) c.args.push_back(ValueFromJson(a));
    }
    if (j.contains("diversify")) {
      for (const auto& d : j["diversify"]) {
        Diversification div;
        div.type = d.at("type").get<std::string>();
        div.variants = d.at("variants").get<std::vector<std::string>>();
        if (d.contains("instances")) div.instances = d["instances"].get<std::vector<int>>();
        if (div.variants.empty()) throw Error(ErrorCode::kConfig, "empty variant list for " + div.type);
        c.diversify.push_back(std::move(div));
      }
    }
    if (j.contains("unsync")) c.unsync_kinds = j["unsync"].get<std::vector<std::string>>();
    c.seed = j.value("seed", c.seed);
    if (j.contains("latency")) {
      c.latency.base = j["latency"].value("base", c.latency.base);
      c.latency.jitter = j["latency"].value("jitter", c.latency.jitter);
    }
    c.outbound_deadline = j.value("outbound_deadline", c.outbound_deadline);
    c.epsilon_fraction = j.value("epsilon_fraction", c.epsilon_fraction);
    c.epsilon_min = j.value("epsilon_min", c.epsilon_min);
    c.max_time = j.value("max_time", c.max_time);
    c.max_events = j.value("max_events", c.max_events);
    c.trace = j.value("trace", c.trace);
    c.access = j.value("access", c.access);
    if (j.contains("unit_filter")) c.unit_filter = j["unit_filter"].get<std::vector<std::string>>();
    c.step_budget = j.value("step_budget", c.step_budget);
    if (j.contains("faults")) {
      for (const auto& f : j["faults"]) {
        FaultSpec fs;
        auto kind = FaultKindFromName(f.at("kind").get<std::string>());
        if (!kind) throw Error(ErrorCode::kConfig, "unknown fault kind " + f["kind"].dump());
        fs.kind = *kind;
        fs.gateway = f.value("gateway", fs.gateway);
        fs.variant = f.value("variant", fs.variant);
        fs.at = f.value("at", fs.at);
        fs.message_kind = f.value("message_kind", fs.message_kind);
        c.faults.push_back(fs);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfig, std::string("bad system configuration: ") + e.what());
  }
  if (c.latency.base < 0 || c.latency.jitter < 0) throw Error(ErrorCode::kConfig, "latency must be non-negative");
  if (c.outbound_deadline < 1) throw Error(ErrorCode::kConfig, "outbound_deadline must be positive");
  return c;
}

nlohmann::json ConfigToJson(const SystemConfig& c) {
  nlohmann::json programs = nlohmann::json::object();
  for (const auto& p : c.programs) {
    nlohmann::json e = nlohmann::json::object();
    if (!p.file.empty()) e["file"] = p.file;
    if (!p.source.empty()) e["source"] = p.source;
    programs[p.name] = e;
  }
  nlohmann::json args = nlohmann::json::array();
  for (const auto& a : c.args) args.push_back(ValueToJson(a));
  nlohmann::json div = nlohmann::json::array();
  for (const auto& d : c.diversify) {
    div.push_back({{"type", d.type}, {"variants", d.variants}, {"instances", d.instances}});
  }
  nlohmann::json faults = nlohmann::json::array();
  for (const auto& f : c.faults) {
    faults.push_back({{"kind", FaultKindName(f.kind)},
                      {"gateway", f.gateway},
                      {"variant", f.variant},
                      {"at", f.at},
                      {"message_kind", f.message_kind}});
  }
  return {{"programs", programs},
          {"main", {{"program", c.main_program}, {"entry", c.entry}, {"args", args}}},
          {"diversify", div},
          {"unsync", c.unsync_kinds},
          {"seed", c.seed},
          {"latency", {{"base", c.latency.base}, {"jitter", c.latency.jitter}}},
          {"outbound_deadline", c.outbound_deadline},
          {"epsilon_fraction", c.epsilon_fraction},
          {"epsilon_min", c.epsilon_min},
          {"max_time", c.max_time},
          {"max_events", c.max_events},
          {"trace", c.trace},
          {"access", c.access},
          {"unit_filter", c.unit_filter},
          {"step_budget", c.step_budget},
          {"faults", faults}};
}

}  // namespace algodiv::sync
