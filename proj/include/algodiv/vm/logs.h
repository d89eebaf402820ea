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

#ifndef ALGODIV_VM_LOGS_H_
#define ALGODIV_VM_LOGS_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "algodiv/core/value.h"
#include "algodiv/lang/bytecode.h"
#include "json.hpp"

namespace algodiv::vm {

struct TraceEvent {
  lang::Opcode op = lang::Opcode::kNop;
  int32_t arg = 0;
  bool operator==(const TraceEvent&) const = default;
};

enum class AccessTag : uint8_t {
  kRead, kAdd, kEq, kLt, kLe, kGt, kGe, kNe, kIndex, kIterate
};
const char* AccessTagName(AccessTag tag);

struct AccessRecord {
  enum class Kind : uint8_t { kAccess, kReceive };
  Kind kind = Kind::kAccess;
  // kAccess: the tracked object. kReceive: Msg(host, proc, msg, 0) naming
  // the delivered message.
  ObjectId id;
  AccessTag tag = AccessTag::kRead;

  static AccessRecord Access(ObjectId id, AccessTag tag) {
    return {Kind::kAccess, id, tag};
  }
  static AccessRecord Receive(uint32_t host, uint32_t proc, uint32_t msg) {
    return {Kind::kReceive, ObjectId::Msg(host, proc, msg, 0), AccessTag::kRead};
  }
  bool operator==(const AccessRecord&) const = default;
  // Stable 64-bit key for token comparisons.
  uint64_t Key() const;
};

using Trace = std::vector<TraceEvent>;
using AccessLog = std::vector<AccessRecord>;

uint64_t TraceKey(const TraceEvent& e);

// One JSON object per line.
nlohmann::json TraceEventToJson(const TraceEvent& e);
TraceEvent TraceEventFromJson(const nlohmann::json& j);
nlohmann::json AccessRecordToJson(const AccessRecord& r);
AccessRecord AccessRecordFromJson(const nlohmann::json& j);

void WriteTraceJsonl(std::ostream& out, const Trace& trace);
void WriteAccessJsonl(std::ostream& out, const AccessLog& log);
Trace ReadTraceJsonl(std::istream& in);
AccessLog ReadAccessJsonl(std::istream& in);

}  // namespace algodiv::vm

#endif  // ALGODIV_VM_LOGS_H_
