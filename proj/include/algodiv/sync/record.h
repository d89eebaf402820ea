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

#ifndef ALGODIV_SYNC_RECORD_H_
#define ALGODIV_SYNC_RECORD_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "algodiv/core/value.h"
#include "algodiv/vm/logs.h"
#include "json.hpp"

namespace algodiv::sync {

enum class DivergenceReason {
  kPayloadMismatch,
  kDestinationMismatch,
  kOutboundTimeout,
  kYieldBlockMismatch,
  kYieldTimeoutMismatch,
  kProtocolViolation,
};
const char* DivergenceReasonName(DivergenceReason r);
std::optional<DivergenceReason> DivergenceReasonFromName(std::string_view name);

struct DivergenceReport {
  ProcessId gateway;
  DivergenceReason reason = DivergenceReason::kPayloadMismatch;
  int64_t time = 0;
  std::vector<int> variants;
  nlohmann::json evidence;
};

// A message handled by a process (or variant).
struct MessageRecord {
  int64_t time = 0;
  ProcessId src;
  ProcessId dst;
  std::string kind;
  uint32_t msg_num = 0;
  int64_t lamport = 0;
  Value payload;  // Untracked.
};

struct CsInterval {
  ProcessId pid;
  ProcessId logical;  // Gateway-level identity.
  int64_t enter = 0;
  int64_t exit = 0;
};

struct AwaitRecord {
  ProcessId pid;
  int64_t start = 0;
  int64_t end = 0;
  int64_t timeout = 0;
};

struct OutputRecord {
  ProcessId pid;
  int64_t time = 0;
  Value value;
};

struct ProcessLog {
  ProcessId pid;
  ProcessId logical;
  std::string type;
  int variant = -1;  // Index under its gateway; -1 when undiversified.
  bool done = false;
  vm::Trace trace;
  vm::AccessLog accesses;
};

enum class RunStatus { kQuiescence, kDeadlock, kDeadline };
const char* RunStatusName(RunStatus s);

struct ExecutionRecord {
  RunStatus status = RunStatus::kQuiescence;
  int64_t end_time = 0;
  uint64_t events = 0;
  uint64_t seed = 0;
  std::vector<ProcessId> gateways;
  std::vector<ProcessLog> processes;  // Ordered by pid.
  std::vector<MessageRecord> messages;
  std::vector<DivergenceReport> divergences;
  std::vector<CsInterval> cs;
  std::vector<AwaitRecord> awaits;
  std::vector<OutputRecord> outputs;
};

// One JSON object per line: a header, then processes, messages,
// divergences, critical sections, awaits and outputs, in record order.
void WriteRecordJsonl(std::ostream& out, const ExecutionRecord& rec);
std::string RecordToJsonl(const ExecutionRecord& rec);

// Pairs of critical-section intervals of distinct logical processes that
// overlap in virtual time.
std::vector<std::pair<CsInterval, CsInterval>> MutualExclusionViolations(const ExecutionRecord& rec);

// Awaits that waited longer than timeout + slack.
std::vector<AwaitRecord> AwaitViolations(const ExecutionRecord& rec, int64_t slack = 1);

// Per-variant traces/accesses of every gateway, concatenated in gateway
// order; `variant` selects the side. Undiversified processes are skipped.
vm::Trace SideTrace(const ExecutionRecord& rec, int variant);
vm::AccessLog SideAccesses(const ExecutionRecord& rec, int variant);

}  // namespace algodiv::sync

#endif  // ALGODIV_SYNC_RECORD_H_
