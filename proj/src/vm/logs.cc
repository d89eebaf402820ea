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

#include "algodiv/vm/logs.h"

#include <istream>
#include <ostream>

#include "algodiv/core/error.h"

namespace algodiv::vm {
namespace {

constexpr const char* kTagNames[] = {"read", "add", "eq", "lt", "le",
                                     "gt", "ge", "ne", "index", "iterate"};

AccessTag TagFromName(const std::string& s) {
  for (int i = 0; i < 10; ++i) {
    if (s == kTagNames[i]) return static_cast<AccessTag>(i);
  }
  throw Error(ErrorCode::kIo, "unknown access tag " + s);
}

nlohmann::json IdToJson(const ObjectId& id) {
  if (id.kind == ObjectId::Kind::kSeq) return nlohmann::json{{"seq", id.obj}};
  return nlohmann::json{{"msg", {id.host, id.proc, id.msg, id.obj}}};
}

ObjectId IdFromJson(const nlohmann::json& j) {
  if (j.contains("seq")) return ObjectId::Seq(j.at("seq").get<uint32_t>());
  const auto& m = j.at("msg");
  return ObjectId::Msg(m.at(0).get<uint32_t>(), m.at(1).get<uint32_t>(),
                       m.at(2).get<uint32_t>(), m.at(3).get<uint32_t>());
}

}  // namespace

const char* AccessTagName(AccessTag tag) { return kTagNames[static_cast<int>(tag)]; }

uint64_t AccessRecord::Key() const {
  uint64_t h = 1469598103934665603ULL;
  auto mix = [&](uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xff;
      h *= 1099511628211ULL;
    }
  };
  mix(static_cast<uint64_t>(kind));
  mix(static_cast<uint64_t>(id.kind));
  mix(id.host);
  mix(id.proc);
  mix(id.msg);
  mix(id.obj);
  mix(static_cast<uint64_t>(tag));
  return h;
}

uint64_t TraceKey(const TraceEvent& e) {
  return (static_cast<uint64_t>(e.op) << 32) | static_cast<uint32_t>(e.arg);
}

nlohmann::json TraceEventToJson(const TraceEvent& e) {
  return nlohmann::json{{"op", lang::OpcodeName(e.op)}, {"arg", e.arg}};
}

TraceEvent TraceEventFromJson(const nlohmann::json& j) {
  auto op = lang::OpcodeFromName(j.at("op").get<std::string>());
  if (!op) throw Error(ErrorCode::kIo, "unknown opcode in trace: " + j.dump());
  return {*op, j.at("arg").get<int32_t>()};
}

nlohmann::json AccessRecordToJson(const AccessRecord& r) {
  if (r.kind == AccessRecord::Kind::kReceive) {
    return nlohmann::json{{"receive", {r.id.host, r.id.proc, r.id.msg}}};
  }
  return nlohmann::json{{"id", IdToJson(r.id)}, {"op", AccessTagName(r.tag)}};
}

AccessRecord AccessRecordFromJson(const nlohmann::json& j) {
  if (j.contains("receive")) {
    const auto& m = j.at("receive");
    return AccessRecord::Receive(m.at(0).get<uint32_t>(), m.at(1).get<uint32_t>(),
                                 m.at(2).get<uint32_t>());
  }
  return AccessRecord::Access(IdFromJson(j.at("id")), TagFromName(j.at("op").get<std::string>()));
}

void WriteTraceJsonl(std::ostream& out, const Trace& trace) {
  for (const TraceEvent& e : trace) out << TraceEventToJson(e).dump() << "\n";
}

void WriteAccessJsonl(std::ostream& out, const AccessLog& log) {
  for (const AccessRecord& r : log) out << AccessRecordToJson(r).dump() << "\n";
}

Trace ReadTraceJsonl(std::istream& in) {
  Trace t;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    t.push_back(TraceEventFromJson(nlohmann::json::parse(line)));
  }
  return t;
}

AccessLog ReadAccessJsonl(std::istream& in) {
  AccessLog log;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    log.push_back(AccessRecordFromJson(nlohmann::json::parse(line)));
  }
  return log;
}

}  // namespace algodiv::vm
