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

#include "algodiv/sync/system.h"

#include <algorithm>
#include <deque>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "algodiv/core/error.h"
#include "algodiv/core/random.h"
#include "algodiv/lang/compiler.h"
#include "algodiv/lang/parser.h"
#include "algodiv/vm/machine.h"
#include "algodiv/vm/tracking.h"

namespace algodiv::sync {
namespace {

using lang::Builtin;

// Unit of transfer between nodes. Gateway traffic uses the extra fields.
struct Envelope {
  enum class Type { kMessage, kOutbound, kYield, kYieldReply, kTagged, kArray };
  Type type = Type::kMessage;
  ProcessId src;  // Logical sender, or the variant for kOutbound/kYield.
  ProcessId dst;
  Value payload;
  Value dest;  // kOutbound: original destination.
  std::string kind;
  uint32_t msg_num = 0;
  int64_t lamport = 0;
  int variant = -1;
  std::vector<Envelope> elems;  // kArray: one kMessage per variant.
  bool block = false;
  Value timeout;
  int64_t num_yields = 0;
};

enum class EventKind { kDeliver, kResume, kFlush, kProcTimer, kYieldDeadline, kOutboundDeadline };

struct Event {
  EventKind kind = EventKind::kDeliver;
  int target = -1;  // Process or gateway index.
  uint64_t epoch = 0;
  Envelope env;
};

using EventKey = std::tuple<int64_t, int, ProcessId, uint64_t>;

std::string KindOf(const Value& payload) {
  if (payload.is_tuple() && payload.size() > 0 && payload.elems()[0].is_str()) {
    return payload.elems()[0].as_str();
  }
  return "";
}

uint64_t PidKey(ProcessId p) {
  return (uint64_t{p.host} << 42) | (uint64_t{p.num} << 21) | uint64_t{p.sub};
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

class System::Impl {
 public:
  explicit Impl(SystemConfig config);

  bool Step();
  ExecutionRecord RunUntil(const System& outer, const Predicate& stop);
  ExecutionRecord Record() const;
  int64_t now() const { return now_; }
  size_t pending() const { return events_.size(); }

 private:
  struct Program {
    std::string name;
    std::shared_ptr<const lang::CompiledProgram> plain;
    std::shared_ptr<const lang::CompiledProgram> sync;
  };

  struct Proc;

  class ProcHost : public vm::Host {
   public:
    ProcHost(Impl* sys, int proc) : sys_(sys), proc_(proc) {}
    bool CallBuiltin(Builtin id, std::vector<Value>& args, Value* result) override {
      return sys_->HostBuiltin(proc_, id, args, result);
    }
    void Send(const Value& payload, const Value& dest) override { sys_->PlainSend(proc_, payload, dest); }
    bool YieldPoint(bool blocking, const Value& timeout) override {
      return sys_->PlainYield(proc_, blocking, timeout);
    }

   private:
    Impl* sys_;
    int proc_;
  };

  enum class State { kCreated, kStarted, kRunning, kBlocked, kDone };
  enum class Blocked { kNone, kAwait, kGwYield };

  struct Proc {
    ProcessId pid;
    ProcessId logical;
    std::string type;
    const lang::ProcessInfo* info = nullptr;
    int gateway = -1;
    int variant = -1;
    std::unique_ptr<ProcHost> host;
    std::unique_ptr<vm::Machine> machine;
    vm::Execution run;
    State state = State::kCreated;
    Blocked blocked = Blocked::kNone;
    uint64_t epoch = 0;
    std::optional<EventKey> timer;
    std::deque<Envelope> mailbox;
    int64_t clock = 0;
    uint32_t msg_num = 0;
    int64_t cs_enter = -1;
    int synced_sends = 0;
    int yields = 0;
    std::vector<int> handlers;
    int setup_unit = -1;
    int run_unit = -1;
  };

  struct Gateway {
    struct Slot {
      std::deque<Envelope> outq;
      bool awaiting = false;
      bool block = false;
      Value timeout;
      int64_t num = 0;
    };
    ProcessId pid;
    std::string type;
    std::vector<int> variants;
    std::vector<Slot> slots;
    std::deque<Envelope> inbound;
    std::vector<FaultSpec> faults;
    bool forwarded = false;
    bool deadline_fired = false;
    bool quarantined = false;
    bool flush_pending = false;
    bool yield_armed = false;
    uint64_t yield_epoch = 0;
    bool out_armed = false;
    uint64_t out_epoch = 0;
    std::optional<EventKey> yield_timer;
    std::optional<EventKey> out_timer;
  };

  struct Node {
    bool gateway = false;
    int index = -1;
  };

  // Setup.
  void LoadPrograms();
  int ProgramIndex(const std::string& name) const;
  int NewProc(ProcessId pid, ProcessId logical, int program, bool sync, const std::string& type);
  Value CreateProcesses(int creator, const std::string& type, const Value& count);
  ProcessId CreateOne(int program, const std::string& type);

  // Scheduling.
  EventKey Schedule(int64_t time, int cls, ProcessId pid, Event ev);
  void Cancel(std::optional<EventKey>& timer);
  void Transmit(Envelope env);
  void SendLocal(Envelope env);
  int64_t Latency(ProcessId src, ProcessId dst, int64_t when) const;
  const Node& NodeOf(ProcessId pid) const;
  bool IsGateway(ProcessId pid) const;
  std::vector<ProcessId> Members(const Value& dest) const;
  bool Unsync(const std::string& kind) const;

  // Processes.
  bool HostBuiltin(int pi, Builtin id, std::vector<Value>& args, Value* result);
  void PlainSend(int pi, const Value& payload, const Value& dest);
  bool PlainYield(int pi, bool blocking, const Value& timeout);
  void GwSend(Proc& p, Value payload, Value dest);
  void GwYield(Proc& p, bool block, const Value& timeout, int64_t num);
  void SetupTarget(ProcessId target, const Value& args);
  void StartTarget(ProcessId target);
  void Deliver(int pi, Envelope env);
  int HandlePending(Proc& p);
  void HandleMessage(Proc& p, const Envelope& env);
  void Continue(Proc& p, vm::Machine::Status status);
  void Resume(Proc& p);

  // Gateways.
  void GwOnOutbound(Gateway& g, Envelope env);
  void GwForwardUnsync(Gateway& g, const Envelope& env);
  void GwTryMatch(Gateway& g);
  void GwOnInbound(Gateway& g, Envelope env);
  void GwRoute(Gateway& g, const Envelope& env);
  void GwOnYield(Gateway& g, const Envelope& env);
  void GwFlush(Gateway& g);
  void GwScheduleFlush(Gateway& g);
  void GwArmOutbound(Gateway& g);
  void Diverge(Gateway& g, DivergenceReason reason, std::vector<int> variants, nlohmann::json evidence);
  const FaultSpec* FindFault(const Proc& p, FaultKind kind) const;

  SystemConfig cfg_;
  std::vector<Program> programs_;
  int main_program_ = -1;
  std::map<std::string, const Diversification*> diversify_;
  std::map<std::string, int> type_instances_;
  std::vector<std::unique_ptr<Proc>> procs_;
  std::vector<std::unique_ptr<Gateway>> gateways_;
  std::map<ProcessId, Node> nodes_;
  uint32_t next_num_ = 0;
  int driver_ = -1;

  std::map<EventKey, Event> events_;
  uint64_t seq_ = 0;
  int64_t now_ = 0;
  uint64_t steps_ = 0;
  std::map<std::pair<ProcessId, ProcessId>, int64_t> channel_last_;

  std::vector<MessageRecord> messages_;
  std::vector<DivergenceReport> divergences_;
  std::vector<CsInterval> cs_;
  std::vector<AwaitRecord> awaits_;
  std::vector<OutputRecord> outputs_;
};

System::Impl::Impl(SystemConfig config) : cfg_(std::move(config)) {
  LoadPrograms();
  for (const Diversification& d : cfg_.diversify) diversify_[d.type] = &d;
  driver_ = NewProc({kHostDriver, 0, 0}, {kHostDriver, 0, 0}, main_program_, false, "<driver>");
  Proc& drv = *procs_[driver_];
  drv.state = State::kRunning;
  vm::Execution ex = drv.machine->Begin(cfg_.entry, cfg_.args);
  if (drv.machine->Run(ex) != vm::Machine::Status::kReturned) {
    throw Error(ErrorCode::kRuntime, "main entry blocked");
  }
  drv.state = State::kDone;
}

void System::Impl::LoadPrograms() {
  std::map<std::string, bool> need_sync;
  for (const Diversification& d : cfg_.diversify) {
    for (const std::string& v : d.variants) need_sync[v.substr(0, v.find(':'))] = true;
  }
  for (const ProgramSpec& spec : cfg_.programs) {
    lang::Ast ast;
    if (spec.ast) {
      ast = *spec.ast;
    } else {
      ast = lang::Parse(spec.source.empty() ? ReadFile(spec.file) : spec.source);
    }
    Program prog;
    prog.name = spec.name;
    prog.plain = std::make_shared<const lang::CompiledProgram>(lang::Compile(ast, lang::CompileMode::kPlain));
    if (need_sync.count(spec.name)) {
      prog.sync = std::make_shared<const lang::CompiledProgram>(lang::Compile(ast, lang::CompileMode::kSync));
    }
    programs_.push_back(std::move(prog));
  }
  for (const auto& [name, unused] : need_sync) {
    if (ProgramIndex(name) < 0) throw Error(ErrorCode::kConfig, "unknown variant program '" + name + "'");
  }
  main_program_ = ProgramIndex(cfg_.main_program);
  if (main_program_ < 0) throw Error(ErrorCode::kConfig, "unknown main program '" + cfg_.main_program + "'");
}

int System::Impl::ProgramIndex(const std::string& name) const {
  for (size_t i = 0; i < programs_.size(); ++i) {
    if (programs_[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

int System::Impl::NewProc(ProcessId pid, ProcessId logical, int program, bool sync, const std::string& type) {
  auto p = std::make_unique<Proc>();
  int index = static_cast<int>(procs_.size());
  p->pid = pid;
  p->logical = logical;
  const auto& cp = sync ? programs_[program].sync : programs_[program].plain;
  if (!type.empty() && type != "<driver>") {
    p->info = cp->FindProcess(type);
    if (!p->info) {
      throw Error(ErrorCode::kConfig, "unknown process type '" + type + "' in program " + programs_[program].name);
    }
    p->type = programs_[program].name + ":" + type;
  } else {
    p->type = "<driver>";
  }
  p->host = std::make_unique<ProcHost>(this, index);
  vm::Hooks hooks{cfg_.trace, cfg_.access, cfg_.unit_filter, cfg_.step_budget};
  p->machine = std::make_unique<vm::Machine>(cp, hooks, p->host.get(), p->info);
  if (p->info) {
    for (const auto& h : p->info->handlers) p->handlers.push_back(cp->FindUnitIndex(h.unit));
    p->setup_unit = cp->FindUnitIndex(p->info->setup_unit);
    p->run_unit = cp->FindUnitIndex(p->info->run_unit);
  }
  p->machine->InitGlobals();
  nodes_[pid] = Node{false, index};
  procs_.push_back(std::move(p));
  return index;
}

ProcessId System::Impl::CreateOne(int program, const std::string& type) {
  int instance = type_instances_[type]++;
  auto it = diversify_.find(type);
  bool diversified = it != diversify_.end() &&
                     (it->second->instances.empty() ||
                      std::count(it->second->instances.begin(), it->second->instances.end(), instance) > 0);
  ProcessId pid{kHostLocal, next_num_++, 0};
  if (!diversified) {
    NewProc(pid, pid, program, false, type);
    return pid;
  }
  auto g = std::make_unique<Gateway>();
  g->pid = pid;
  g->type = type;
  int gindex = static_cast<int>(gateways_.size());
  for (const FaultSpec& f : cfg_.faults) {
    if (f.gateway == gindex) g->faults.push_back(f);
  }
  nodes_[pid] = Node{true, gindex};
  const auto& variants = it->second->variants;
  for (size_t i = 0; i < variants.size(); ++i) {
    const std::string& spec = variants[i];
    size_t colon = spec.find(':');
    std::string prog = spec.substr(0, colon);
    std::string vtype = colon == std::string::npos ? type : spec.substr(colon + 1);
    ProcessId vpid{pid.host, pid.num, static_cast<uint32_t>(i + 1)};
    int pi = NewProc(vpid, pid, ProgramIndex(prog), true, vtype);
    procs_[pi]->gateway = gindex;
    procs_[pi]->variant = static_cast<int>(i);
    g->variants.push_back(pi);
  }
  g->slots.resize(variants.size());
  gateways_.push_back(std::move(g));
  return pid;
}

Value System::Impl::CreateProcesses(int creator, const std::string& type, const Value& count) {
  const Proc& c = *procs_[creator];
  int program = main_program_;
  if (c.info) {
    std::string prog = c.type.substr(0, c.type.find(':'));
    program = ProgramIndex(prog);
  }
  if (count.is_absent()) return Value::Pid(CreateOne(program, type));
  if (!count.is_int() || count.as_int() < 0) throw Error(ErrorCode::kType, "new: count must be a non-negative integer");
  Value::Elems pids;
  for (int64_t i = 0; i < count.as_int(); ++i) pids.push_back(Value::Pid(CreateOne(program, type)));
  return Value::Set(std::move(pids));
}

EventKey System::Impl::Schedule(int64_t time, int cls, ProcessId pid, Event ev) {
  EventKey key{time, cls, pid, seq_++};
  events_.emplace(key, std::move(ev));
  return key;
}

void System::Impl::Cancel(std::optional<EventKey>& timer) {
  if (timer) events_.erase(*timer);
  timer.reset();
}

const System::Impl::Node& System::Impl::NodeOf(ProcessId pid) const {
  auto it = nodes_.find(pid);
  if (it == nodes_.end()) throw Error(ErrorCode::kRuntime, "no process " + pid.ToString());
  return it->second;
}

bool System::Impl::IsGateway(ProcessId pid) const { return NodeOf(pid).gateway; }

std::vector<ProcessId> System::Impl::Members(const Value& dest) const {
  std::vector<ProcessId> out;
  if (dest.is_pid()) {
    out.push_back(dest.as_pid());
  } else if (dest.is_collection()) {
    for (const Value& v : dest.elems()) {
      if (!v.is_pid()) throw Error(ErrorCode::kType, "send destination contains a non-process value");
      out.push_back(v.as_pid());
    }
  } else {
    throw Error(ErrorCode::kType, "send destination must be a process or a collection of processes");
  }
  return out;
}

bool System::Impl::Unsync(const std::string& kind) const {
  return std::find(cfg_.unsync_kinds.begin(), cfg_.unsync_kinds.end(), kind) != cfg_.unsync_kinds.end();
}

int64_t System::Impl::Latency(ProcessId src, ProcessId dst, int64_t when) const {
  int64_t lat = cfg_.latency.base;
  if (cfg_.latency.jitter > 0) {
    uint64_t h = SplitMix64::Mix(cfg_.seed ^ SplitMix64::Mix(PidKey(src) * 0x9e3779b97f4a7c15ULL) ^
                                 SplitMix64::Mix(PidKey(dst) + 0x632be59bd9b4e019ULL) ^
                                 SplitMix64::Mix(static_cast<uint64_t>(when) * 0xd1b54a32d192ed03ULL));
    lat += static_cast<int64_t>(h % static_cast<uint64_t>(cfg_.latency.jitter + 1));
  }
  return lat;
}

void System::Impl::Transmit(Envelope env) {
  NodeOf(env.dst);
  auto channel = std::pair(env.src, env.dst);
  int64_t arrival = now_ + Latency(env.src, env.dst, now_);
  int64_t& last = channel_last_[channel];
  arrival = std::max(arrival, last);
  last = arrival;
  ProcessId dst = env.dst;
  Schedule(arrival, 0, dst, Event{EventKind::kDeliver, -1, 0, std::move(env)});
}

void System::Impl::SendLocal(Envelope env) {
  ProcessId dst = env.dst;
  Schedule(now_, 0, dst, Event{EventKind::kDeliver, -1, 0, std::move(env)});
}

bool System::Impl::HostBuiltin(int pi, Builtin id, std::vector<Value>& args, Value* result) {
  Proc& p = *procs_[pi];
  *result = Value::Absent();
  switch (id) {
    case Builtin::kLogicalTime:
      *result = Value::Int(p.clock);
      return true;
    case Builtin::kSelfId:
      *result = Value::Pid(p.pid);
      return true;
    case Builtin::kOutput:
      outputs_.push_back({p.pid, now_, args[0].Untracked()});
      return true;
    case Builtin::kCsEnter:
      p.cs_enter = now_;
      return true;
    case Builtin::kCsExit:
      if (p.cs_enter < 0) throw Error(ErrorCode::kRuntime, p.pid.ToString() + ": cs_exit without cs_enter");
      cs_.push_back({p.pid, p.logical, p.cs_enter, now_});
      p.cs_enter = -1;
      return true;
    case Builtin::kNew:
      if (!args[0].is_str()) throw Error(ErrorCode::kType, "new: type must be a name");
      *result = CreateProcesses(pi, args[0].as_str(), args[1]);
      return true;
    case Builtin::kSetup:
      for (ProcessId t : Members(args[0])) SetupTarget(t, args[1]);
      return true;
    case Builtin::kStart:
      for (ProcessId t : Members(args[0])) StartTarget(t);
      return true;
    case Builtin::kNow:
      *result = Value::Int(now_);
      return true;
    case Builtin::kAwaitExit:
      if (args[0].is_int() && args[1].is_int()) {
        awaits_.push_back({p.pid, args[0].as_int(), now_, args[1].as_int()});
      }
      return true;
    case Builtin::kGwSend:
      if (p.gateway < 0) throw Error(ErrorCode::kRuntime, "send_sync outside a diversified process");
      GwSend(p, args[0], args[1]);
      return true;
    case Builtin::kGwYield:
      if (p.gateway < 0) throw Error(ErrorCode::kRuntime, "yield_sync outside a diversified process");
      if (!args[0].is_bool() || !args[2].is_int()) throw Error(ErrorCode::kType, "yield_sync: bad arguments");
      GwYield(p, args[0].as_bool(), args[1], args[2].as_int());
      return false;
    default:
      break;
  }
  throw Error(ErrorCode::kRuntime, std::string("builtin ") + std::string(lang::GetBuiltin(id).name) +
                                       " is not a runtime service");
}

void System::Impl::SetupTarget(ProcessId target, const Value& args) {
  if (!(args.is_tuple() || args.is_seq())) throw Error(ErrorCode::kType, "setup: arguments must be a tuple");
  const Node& n = NodeOf(target);
  std::vector<int> targets;
  std::vector<Value> extra;
  if (n.gateway) {
    targets = gateways_[n.index]->variants;
    extra.push_back(Value::Pid(target));
  } else {
    targets.push_back(n.index);
  }
  for (int pi : targets) {
    Proc& p = *procs_[pi];
    if (!p.info) throw Error(ErrorCode::kRuntime, "setup of the driver");
    std::vector<Value> a(args.elems().begin(), args.elems().end());
    a.insert(a.end(), extra.begin(), extra.end());
    if (static_cast<int>(a.size()) != p.info->setup_arity) {
      throw Error(ErrorCode::kArity, p.type + " setup expects " +
                                         std::to_string(p.info->setup_arity - static_cast<int>(extra.size())) +
                                         " arguments");
    }
    p.machine->Call(p.setup_unit, std::move(a));
  }
}

void System::Impl::StartTarget(ProcessId target) {
  const Node& n = NodeOf(target);
  std::vector<int> targets = n.gateway ? gateways_[n.index]->variants : std::vector<int>{n.index};
  for (int pi : targets) {
    Proc& p = *procs_[pi];
    if (p.state != State::kCreated) continue;
    p.state = State::kStarted;
    Schedule(now_, 0, p.pid, Event{EventKind::kResume, pi, 0, {}});
  }
}

void System::Impl::PlainSend(int pi, const Value& payload, const Value& dest) {
  Proc& p = *procs_[pi];
  std::string kind = KindOf(payload);
  bool unsync = Unsync(kind);
  ++p.msg_num;
  if (!unsync) ++p.clock;
  Value wire = payload;
  if (cfg_.access) {
    vm::IdAllocator ids = vm::IdAllocator::ForMessage(p.logical.host, p.logical.num, p.msg_num);
    wire = vm::WrapTracked(payload, ids);
  }
  for (ProcessId m : Members(dest)) {
    Envelope env;
    env.type = Envelope::Type::kMessage;
    env.src = p.logical;
    env.dst = m;
    env.payload = wire;
    env.kind = kind;
    env.msg_num = p.msg_num;
    env.lamport = p.clock;
    Transmit(std::move(env));
  }
}

const FaultSpec* System::Impl::FindFault(const Proc& p, FaultKind kind) const {
  if (p.gateway < 0) return nullptr;
  for (const FaultSpec& f : gateways_[p.gateway]->faults) {
    if (f.kind == kind && f.variant == p.variant) return &f;
  }
  return nullptr;
}

void System::Impl::GwSend(Proc& p, Value payload, Value dest) {
  std::string kind = KindOf(payload);
  bool unsync = Unsync(kind);
  ++p.msg_num;
  if (!unsync) {
    ++p.clock;
    ++p.synced_sends;
    if (const FaultSpec* f = FindFault(p, FaultKind::kPayloadFlip); f && p.synced_sends == std::max(f->at, 1)) {
      Value::Elems e = payload.is_tuple() ? payload.elems() : Value::Elems{payload};
      e.push_back(Value::Str("$fault"));
      payload = Value::Tuple(std::move(e));
    }
    if (const FaultSpec* f = FindFault(p, FaultKind::kDestinationFlip);
        f && p.synced_sends == std::max(f->at, 1)) {
      dest = Value::Pid(procs_[driver_]->pid);
    }
    if (const FaultSpec* f = FindFault(p, FaultKind::kSuppressSend)) {
      bool hit = f->at > 0 ? p.synced_sends == f->at : kind == f->message_kind;
      if (hit) {
        gateways_[p.gateway]->faults.erase(
            std::find_if(gateways_[p.gateway]->faults.begin(), gateways_[p.gateway]->faults.end(),
                         [&](const FaultSpec& x) { return &x == f; }));
        return;
      }
    }
  }
  Envelope env;
  env.type = Envelope::Type::kOutbound;
  env.src = p.pid;
  env.dst = gateways_[p.gateway]->pid;
  env.payload = payload;
  if (cfg_.access) {
    vm::IdAllocator ids = vm::IdAllocator::ForMessage(p.logical.host, p.logical.num, p.msg_num);
    env.payload = vm::WrapTracked(payload, ids);
  }
  env.dest = dest;
  env.kind = kind;
  env.msg_num = p.msg_num;
  env.lamport = p.clock;
  env.variant = p.variant;
  SendLocal(std::move(env));
}

void System::Impl::GwYield(Proc& p, bool block, const Value& timeout, int64_t num) {
  ++p.yields;
  if (const FaultSpec* f = FindFault(p, FaultKind::kBlockFlip); f && p.yields == std::max(f->at, 1)) {
    block = !block;
  }
  HandlePending(p);
  Envelope env;
  env.type = Envelope::Type::kYield;
  env.src = p.pid;
  env.dst = gateways_[p.gateway]->pid;
  env.block = block;
  env.timeout = timeout.Untracked();
  env.num_yields = num;
  env.variant = p.variant;
  SendLocal(std::move(env));
  p.state = State::kBlocked;
  p.blocked = Blocked::kGwYield;
}

bool System::Impl::PlainYield(int pi, bool blocking, const Value& timeout) {
  Proc& p = *procs_[pi];
  int handled = HandlePending(p);
  if (!blocking || handled > 0) return true;
  p.state = State::kBlocked;
  p.blocked = Blocked::kAwait;
  ++p.epoch;
  if (timeout.is_int()) {
    p.timer = Schedule(now_ + std::max<int64_t>(0, timeout.as_int()), 2, p.pid,
                       Event{EventKind::kProcTimer, pi, p.epoch, {}});
  }
  return false;
}

int System::Impl::HandlePending(Proc& p) {
  int n = 0;
  while (!p.mailbox.empty()) {
    Envelope env = std::move(p.mailbox.front());
    p.mailbox.pop_front();
    HandleMessage(p, env);
    ++n;
  }
  return n;
}

void System::Impl::HandleMessage(Proc& p, const Envelope& env) {
  if (!Unsync(env.kind)) p.clock = std::max(p.clock, env.lamport) + 1;
  p.machine->LogReceive(env.src.host, env.src.num, env.msg_num);
  messages_.push_back({now_, env.src, p.pid, env.kind, env.msg_num, env.lamport, env.payload.Untracked()});
  if (!p.info) return;
  Value sender = Value::Pid(env.src);
  if (p.info->received_field >= 0) {
    Value& rec = p.machine->fields()[p.info->received_field];
    rec = rec.SetWith(Value::Tuple({env.payload, sender}));
  }
  for (int unit : p.handlers) p.machine->Call(unit, {env.payload, sender});
}

void System::Impl::Continue(Proc& p, vm::Machine::Status status) {
  if (status == vm::Machine::Status::kReturned) {
    p.state = State::kDone;
    p.blocked = Blocked::kNone;
  }
}

void System::Impl::Resume(Proc& p) {
  Cancel(p.timer);
  p.state = State::kRunning;
  p.blocked = Blocked::kNone;
  Continue(p, p.machine->Resume(p.run, Value::Absent()));
}

void System::Impl::Deliver(int pi, Envelope env) {
  Proc& p = *procs_[pi];
  if (env.type == Envelope::Type::kYieldReply) {
    if (p.state != State::kBlocked || p.blocked != Blocked::kGwYield) {
      throw Error(ErrorCode::kRuntime, p.pid.ToString() + ": unexpected yield reply");
    }
    HandlePending(p);
    Resume(p);
    return;
  }
  p.mailbox.push_back(std::move(env));
  if (p.state != State::kBlocked) return;
  HandlePending(p);
  if (p.blocked == Blocked::kAwait) Resume(p);
}

void System::Impl::GwOnOutbound(Gateway& g, Envelope env) {
  if (g.quarantined) return;
  if (env.variant < 0 || env.variant >= static_cast<int>(g.slots.size())) {
    throw Error(ErrorCode::kRuntime, "outbound message from unknown variant");
  }
  if (Unsync(env.kind)) {
    GwForwardUnsync(g, env);
    return;
  }
  g.slots[env.variant].outq.push_back(std::move(env));
  if (!g.out_armed) GwArmOutbound(g);
  GwTryMatch(g);
}

void System::Impl::GwArmOutbound(Gateway& g) {
  g.out_armed = true;
  ++g.out_epoch;
  int gi = NodeOf(g.pid).index;
  Cancel(g.out_timer);
  g.out_timer = Schedule(now_ + cfg_.outbound_deadline, 2, g.pid, Event{EventKind::kOutboundDeadline, gi, g.out_epoch, {}});
}

void System::Impl::GwForwardUnsync(Gateway& g, const Envelope& env) {
  for (ProcessId m : Members(env.dest)) {
    Envelope out;
    out.src = g.pid;
    out.dst = m;
    out.payload = env.payload;
    out.kind = env.kind;
    out.msg_num = env.msg_num;
    out.lamport = env.lamport;
    if (IsGateway(m)) {
      out.type = Envelope::Type::kTagged;
      out.variant = env.variant;
    } else if (env.variant == 0) {
      out.type = Envelope::Type::kMessage;
    } else {
      continue;
    }
    Transmit(std::move(out));
  }
}

void System::Impl::GwTryMatch(Gateway& g) {
  auto all_nonempty = [&] {
    for (const auto& s : g.slots) {
      if (s.outq.empty()) return false;
    }
    return true;
  };
  bool matched = false;
  while (!g.quarantined && all_nonempty()) {
    const Envelope& h0 = g.slots[0].outq.front();
    for (size_t i = 1; i < g.slots.size(); ++i) {
      const Envelope& hi = g.slots[i].outq.front();
      if (!(hi.dest == h0.dest)) {
        Diverge(g, DivergenceReason::kDestinationMismatch, {0, static_cast<int>(i)},
                {{"dest", {ValueToJson(h0.dest), ValueToJson(hi.dest)}},
                 {"payload", {ValueToJson(h0.payload.Untracked()), ValueToJson(hi.payload.Untracked())}}});
        return;
      }
    }
    std::vector<ProcessId> members = Members(h0.dest);
    bool any_plain = std::any_of(members.begin(), members.end(), [&](ProcessId m) { return !IsGateway(m); });
    if (any_plain) {
      for (size_t i = 1; i < g.slots.size(); ++i) {
        const Envelope& hi = g.slots[i].outq.front();
        if (!(hi.payload == h0.payload)) {
          Diverge(g, DivergenceReason::kPayloadMismatch, {0, static_cast<int>(i)},
                  {{"dest", ValueToJson(h0.dest)},
                   {"payload", {ValueToJson(h0.payload.Untracked()), ValueToJson(hi.payload.Untracked())}}});
          return;
        }
      }
    }
    for (ProcessId m : members) {
      Envelope out;
      out.src = g.pid;
      out.dst = m;
      out.kind = h0.kind;
      out.msg_num = h0.msg_num;
      out.lamport = h0.lamport;
      if (IsGateway(m)) {
        out.type = Envelope::Type::kArray;
        for (const auto& s : g.slots) {
          const Envelope& h = s.outq.front();
          Envelope e;
          e.src = g.pid;
          e.dst = m;
          e.payload = h.payload;
          e.kind = h.kind;
          e.msg_num = h.msg_num;
          e.lamport = h.lamport;
          out.elems.push_back(std::move(e));
        }
      } else {
        out.type = Envelope::Type::kMessage;
        out.payload = h0.payload;
      }
      Transmit(std::move(out));
    }
    for (auto& s : g.slots) s.outq.pop_front();
    matched = true;
  }
  if (!matched || g.quarantined) return;
  bool pending = std::any_of(g.slots.begin(), g.slots.end(), [](const auto& s) { return !s.outq.empty(); });
  if (pending) {
    GwArmOutbound(g);
  } else {
    g.out_armed = false;
    ++g.out_epoch;
    Cancel(g.out_timer);
  }
}

void System::Impl::GwOnInbound(Gateway& g, Envelope env) {
  if (g.quarantined) return;
  bool indexed = env.type == Envelope::Type::kTagged || env.type == Envelope::Type::kArray;
  if (indexed && g.inbound.empty()) {
    GwRoute(g, env);
    g.forwarded = true;
  } else {
    g.inbound.push_back(std::move(env));
  }
  GwScheduleFlush(g);
}

void System::Impl::GwRoute(Gateway& g, const Envelope& env) {
  auto to_variant = [&](size_t i, const Envelope& m) {
    if (i >= g.variants.size()) return;
    const Proc& v = *procs_[g.variants[i]];
    Envelope copy;
    copy.type = Envelope::Type::kMessage;
    copy.src = m.src;
    copy.dst = v.pid;
    copy.payload = ReplacePid(m.payload, g.pid, v.pid);
    copy.kind = m.kind;
    copy.msg_num = m.msg_num;
    copy.lamport = m.lamport;
    SendLocal(std::move(copy));
  };
  switch (env.type) {
    case Envelope::Type::kMessage:
      for (size_t i = 0; i < g.variants.size(); ++i) to_variant(i, env);
      break;
    case Envelope::Type::kTagged:
      to_variant(static_cast<size_t>(env.variant), env);
      break;
    case Envelope::Type::kArray:
      for (size_t i = 0; i < env.elems.size(); ++i) to_variant(i, env.elems[i]);
      break;
    default:
      break;
  }
}

void System::Impl::GwOnYield(Gateway& g, const Envelope& env) {
  if (g.quarantined) return;
  auto& slot = g.slots.at(env.variant);
  if (env.num_yields != slot.num + 1) {
    Diverge(g, DivergenceReason::kProtocolViolation, {env.variant},
            {{"expected", slot.num + 1}, {"got", env.num_yields}});
    return;
  }
  slot.num = env.num_yields;
  slot.block = env.block;
  slot.timeout = env.timeout;
  slot.awaiting = true;
  GwScheduleFlush(g);
}

void System::Impl::GwScheduleFlush(Gateway& g) {
  if (g.flush_pending) return;
  g.flush_pending = true;
  Schedule(now_, 1, g.pid, Event{EventKind::kFlush, NodeOf(g.pid).index, 0, {}});
}

void System::Impl::GwFlush(Gateway& g) {
  g.flush_pending = false;
  if (g.quarantined) return;
  for (const auto& s : g.slots) {
    if (!s.awaiting || s.num != g.slots[0].num) return;
  }
  const auto& s0 = g.slots[0];
  auto yield_json = [&] {
    nlohmann::json ys = nlohmann::json::array();
    for (const auto& s : g.slots) {
      ys.push_back({{"block", s.block}, {"timeout", ValueToJson(s.timeout)}, {"num_yields", s.num}});
    }
    return ys;
  };
  for (size_t i = 1; i < g.slots.size(); ++i) {
    if (g.slots[i].block != s0.block) {
      Diverge(g, DivergenceReason::kYieldBlockMismatch, {0, static_cast<int>(i)}, {{"yields", yield_json()}});
      return;
    }
  }
  bool any_int = false;
  bool any_absent = false;
  int64_t lo = 0;
  int64_t hi = 0;
  for (const auto& s : g.slots) {
    if (s.timeout.is_int()) {
      int64_t t = s.timeout.as_int();
      lo = any_int ? std::min(lo, t) : t;
      hi = any_int ? std::max(hi, t) : t;
      any_int = true;
    } else {
      any_absent = true;
    }
  }
  if (s0.block && any_int) {
    int64_t eps = std::max<int64_t>(cfg_.epsilon_min, static_cast<int64_t>(cfg_.epsilon_fraction * hi));
    if (any_absent || hi - lo > eps) {
      std::vector<int> offenders;
      for (size_t i = 0; i < g.slots.size(); ++i) offenders.push_back(static_cast<int>(i));
      Diverge(g, DivergenceReason::kYieldTimeoutMismatch, offenders, {{"yields", yield_json()}, {"epsilon", eps}});
      return;
    }
  }
  if (!g.inbound.empty()) {
    for (const Envelope& env : g.inbound) GwRoute(g, env);
    g.inbound.clear();
    g.forwarded = true;
  }
  if (!s0.block || g.forwarded || g.deadline_fired) {
    for (size_t i = 0; i < g.variants.size(); ++i) {
      Envelope reply;
      reply.type = Envelope::Type::kYieldReply;
      reply.src = g.pid;
      reply.dst = procs_[g.variants[i]]->pid;
      SendLocal(std::move(reply));
      g.slots[i].awaiting = false;
    }
    g.forwarded = false;
    g.deadline_fired = false;
    g.yield_armed = false;
    ++g.yield_epoch;
    Cancel(g.yield_timer);
  } else if (any_int && !g.yield_armed) {
    g.yield_armed = true;
    ++g.yield_epoch;
    g.yield_timer = Schedule(now_ + std::max<int64_t>(0, lo), 2, g.pid,
                             Event{EventKind::kYieldDeadline, NodeOf(g.pid).index, g.yield_epoch, {}});
  }
}

void System::Impl::Diverge(Gateway& g, DivergenceReason reason, std::vector<int> variants,
                           nlohmann::json evidence) {
  if (g.quarantined) return;
  g.quarantined = true;
  Cancel(g.out_timer);
  Cancel(g.yield_timer);
  divergences_.push_back({g.pid, reason, now_, std::move(variants), std::move(evidence)});
}

bool System::Impl::Step() {
  if (events_.empty()) return false;
  auto node = events_.extract(events_.begin());
  now_ = std::get<0>(node.key());
  Event& ev = node.mapped();
  ++steps_;
  switch (ev.kind) {
    case EventKind::kDeliver: {
      const Node& n = NodeOf(ev.env.dst);
      if (!n.gateway) {
        Deliver(n.index, std::move(ev.env));
        break;
      }
      Gateway& g = *gateways_[n.index];
      switch (ev.env.type) {
        case Envelope::Type::kOutbound:
          GwOnOutbound(g, std::move(ev.env));
          break;
        case Envelope::Type::kYield:
          GwOnYield(g, ev.env);
          break;
        default:
          GwOnInbound(g, std::move(ev.env));
          break;
      }
      break;
    }
    case EventKind::kResume: {
      Proc& p = *procs_[ev.target];
      if (p.state != State::kStarted) break;
      p.state = State::kRunning;
      p.run = p.machine->Begin(p.run_unit, {});
      Continue(p, p.machine->Run(p.run));
      break;
    }
    case EventKind::kFlush:
      GwFlush(*gateways_[ev.target]);
      break;
    case EventKind::kProcTimer: {
      Proc& p = *procs_[ev.target];
      p.timer.reset();
      if (p.state == State::kBlocked && p.blocked == Blocked::kAwait && p.epoch == ev.epoch) {
        HandlePending(p);
        Resume(p);
      }
      break;
    }
    case EventKind::kYieldDeadline: {
      Gateway& g = *gateways_[ev.target];
      g.yield_timer.reset();
      if (g.yield_armed && g.yield_epoch == ev.epoch && !g.quarantined) {
        g.deadline_fired = true;
        GwScheduleFlush(g);
      }
      break;
    }
    case EventKind::kOutboundDeadline: {
      Gateway& g = *gateways_[ev.target];
      g.out_timer.reset();
      if (g.out_armed && g.out_epoch == ev.epoch && !g.quarantined) {
        std::vector<int> empty;
        nlohmann::json heads = nlohmann::json::array();
        for (size_t i = 0; i < g.slots.size(); ++i) {
          if (g.slots[i].outq.empty()) {
            empty.push_back(static_cast<int>(i));
            heads.push_back(nullptr);
          } else {
            const Envelope& h = g.slots[i].outq.front();
            heads.push_back({{"dest", ValueToJson(h.dest)}, {"payload", ValueToJson(h.payload.Untracked())}});
          }
        }
        if (!empty.empty()) {
          Diverge(g, DivergenceReason::kOutboundTimeout, empty, {{"heads", heads}});
        }
      }
      break;
    }
  }
  return true;
}

ExecutionRecord System::Impl::RunUntil(const System& outer, const Predicate& stop) {
  bool deadline = false;
  while (!events_.empty()) {
    if (stop && stop(outer)) break;
    if (std::get<0>(events_.begin()->first) > cfg_.max_time || steps_ >= cfg_.max_events) {
      deadline = true;
      break;
    }
    Step();
  }
  ExecutionRecord rec = Record();
  if (deadline) rec.status = RunStatus::kDeadline;
  return rec;
}

ExecutionRecord System::Impl::Record() const {
  ExecutionRecord rec;
  rec.end_time = now_;
  rec.events = steps_;
  rec.seed = cfg_.seed;
  bool blocked = false;
  for (const auto& p : procs_) {
    if (p->state == State::kStarted || p->state == State::kRunning || p->state == State::kBlocked) blocked = true;
  }
  rec.status = events_.empty() ? (blocked ? RunStatus::kDeadlock : RunStatus::kQuiescence) : RunStatus::kDeadline;
  for (const auto& g : gateways_) rec.gateways.push_back(g->pid);
  std::sort(rec.gateways.begin(), rec.gateways.end());
  for (const auto& p : procs_) {
    if (!p->info) continue;
    ProcessLog log;
    log.pid = p->pid;
    log.logical = p->logical;
    log.type = p->type;
    log.variant = p->variant;
    log.done = p->state == State::kDone;
    log.trace = p->machine->trace();
    log.accesses = p->machine->accesses();
    rec.processes.push_back(std::move(log));
  }
  std::sort(rec.processes.begin(), rec.processes.end(),
            [](const ProcessLog& a, const ProcessLog& b) { return a.pid < b.pid; });
  rec.messages = messages_;
  rec.divergences = divergences_;
  rec.cs = cs_;
  rec.awaits = awaits_;
  rec.outputs = outputs_;
  return rec;
}

System::System(SystemConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {}
System::~System() = default;
bool System::Step() { return impl_->Step(); }
int64_t System::now() const { return impl_->now(); }
size_t System::pending_events() const { return impl_->pending(); }
ExecutionRecord System::RunUntil(const Predicate& stop) { return impl_->RunUntil(*this, stop); }
ExecutionRecord System::Record() const { return impl_->Record(); }

ExecutionRecord Simulate(const SystemConfig& config) {
  System sys(config);
  return sys.RunUntil();
}

}  // namespace algodiv::sync
