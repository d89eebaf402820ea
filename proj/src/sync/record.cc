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

#include "algodiv/sync/record.h"

#include <ostream>
#include <sstream>

namespace algodiv::sync {
namespace {

nlohmann::json PidJson(ProcessId p) { return {p.host, p.num, p.sub}; }

}  // namespace

const char* DivergenceReasonName(DivergenceReason r) {
  switch (r) {
    case DivergenceReason::kPayloadMismatch: return "payload_mismatch";
    case DivergenceReason::kDestinationMismatch: return "destination_mismatch";
    case DivergenceReason::kOutboundTimeout: return "outbound_timeout";
    case DivergenceReason::kYieldBlockMismatch: return "yield_block_mismatch";
    case DivergenceReason::kYieldTimeoutMismatch: return "yield_timeout_mismatch";
    case DivergenceReason::kProtocolViolation: return "protocol_violation";
  }
  return "?";
}

std::optional<DivergenceReason> DivergenceReasonFromName(std::string_view name) {
  for (int i = 0; i <= static_cast<int>(DivergenceReason::kProtocolViolation); ++i) {
    auto r = static_cast<DivergenceReason>(i);
    if (name == DivergenceReasonName(r)) return r;
  }
  return std::nullopt;
}

const char* RunStatusName(RunStatus s) {
  switch (s) {
    case RunStatus::kQuiescence: return "quiescence";
    case RunStatus::kDeadlock: return "deadlock";
    case RunStatus::kDeadline: return "deadline";
  }
  return "?";
}

void WriteRecordJsonl(std::ostream& out, const ExecutionRecord& rec) {
  nlohmann::json gws = nlohmann::json::array();
  for (ProcessId g : rec.gateways) gws.push_back(PidJson(g));
  out << nlohmann::json{{"type", "header"},
                        {"format", "algodiv.execution"},
                        {"version", 1},
                        {"status", RunStatusName(rec.status)},
                        {"end_time", rec.end_time},
                        {"events", rec.events},
                        {"seed", rec.seed},
                        {"gateways", gws}}
             .dump()
      << "\n";
  for (const ProcessLog& p : rec.processes) {
    nlohmann::json trace = nlohmann::json::array();
    for (const auto& e : p.trace) trace.push_back({lang::OpcodeName(e.op), e.arg});
    nlohmann::json acc = nlohmann::json::array();
    for (const auto& a : p.accesses) acc.push_back(vm::AccessRecordToJson(a));
    out << nlohmann::json{{"type", "process"},
                          {"pid", PidJson(p.pid)},
                          {"logical", PidJson(p.logical)},
                          {"process_type", p.type},
                          {"variant", p.variant},
                          {"done", p.done},
                          {"trace", trace},
                          {"accesses", acc}}
               .dump()
        << "\n";
  }
  for (const MessageRecord& m : rec.messages) {
    out << nlohmann::json{{"type", "message"},
                          {"time", m.time},
                          {"src", PidJson(m.src)},
                          {"dst", PidJson(m.dst)},
                          {"kind", m.kind},
                          {"msg_num", m.msg_num},
                          {"lamport", m.lamport},
                          {"payload", ValueToJson(m.payload)}}
               .dump()
        << "\n";
  }
  for (const DivergenceReport& d : rec.divergences) {
    out << nlohmann::json{{"type", "divergence"},
                          {"gateway", PidJson(d.gateway)},
                          {"reason", DivergenceReasonName(d.reason)},
                          {"time", d.time},
                          {"variants", d.variants},
                          {"evidence", d.evidence}}
               .dump()
        << "\n";
  }
  for (const CsInterval& c : rec.cs) {
    out << nlohmann::json{{"type", "cs"},
                          {"pid", PidJson(c.pid)},
                          {"logical", PidJson(c.logical)},
                          {"enter", c.enter},
                          {"exit", c.exit}}
               .dump()
        << "\n";
  }
  for (const AwaitRecord& a : rec.awaits) {
    out << nlohmann::json{{"type", "await"},
                          {"pid", PidJson(a.pid)},
                          {"start", a.start},
                          {"end", a.end},
                          {"timeout", a.timeout}}
               .dump()
        << "\n";
  }
  for (const OutputRecord& o : rec.outputs) {
    out << nlohmann::json{{"type", "output"}, {"pid", PidJson(o.pid)}, {"time", o.time}, {"value", ValueToJson(o.value)}}
               .dump()
        << "\n";
  }
}

std::string RecordToJsonl(const ExecutionRecord& rec) {
  std::ostringstream out;
  WriteRecordJsonl(out, rec);
  return out.str();
}

std::vector<std::pair<CsInterval, CsInterval>> MutualExclusionViolations(const ExecutionRecord& rec) {
  std::vector<std::pair<CsInterval, CsInterval>> out;
  for (size_t i = 0; i < rec.cs.size(); ++i) {
    for (size_t j = i + 1; j < rec.cs.size(); ++j) {
      const CsInterval& a = rec.cs[i];
      const CsInterval& b = rec.cs[j];
      if (a.logical == b.logical) continue;
      if (a.enter < b.exit && b.enter < a.exit) out.push_back({a, b});
    }
  }
  return out;
}

std::vector<AwaitRecord> AwaitViolations(const ExecutionRecord& rec, int64_t slack) {
  std::vector<AwaitRecord> out;
  for (const AwaitRecord& a : rec.awaits) {
    if (a.end - a.start > a.timeout + slack) out.push_back(a);
  }
  return out;
}

vm::Trace SideTrace(const ExecutionRecord& rec, int variant) {
  vm::Trace out;
  for (ProcessId g : rec.gateways) {
    for (const ProcessLog& p : rec.processes) {
      if (p.logical == g && p.variant == variant) out.insert(out.end(), p.trace.begin(), p.trace.end());
    }
  }
  return out;
}

vm::AccessLog SideAccesses(const ExecutionRecord& rec, int variant) {
  vm::AccessLog out;
  for (ProcessId g : rec.gateways) {
    for (const ProcessLog& p : rec.processes) {
      if (p.logical == g && p.variant == variant) out.insert(out.end(), p.accesses.begin(), p.accesses.end());
    }
  }
  return out;
}

}  // namespace algodiv::sync
