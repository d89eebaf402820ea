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

#ifndef ALGODIV_VM_MACHINE_H_
#define ALGODIV_VM_MACHINE_H_

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "algodiv/core/error.h"
#include "algodiv/core/value.h"
#include "algodiv/lang/builtins.h"
#include "algodiv/lang/bytecode.h"
#include "algodiv/vm/logs.h"

namespace algodiv::vm {

inline constexpr uint64_t kDefaultStepBudget = 10'000'000;

// Runtime services for process-level builtins, sends, and yield points.
class Host {
 public:
  virtual ~Host() = default;
  // Returns false to block the calling execution; it is later resumed with
  // the call's result.
  virtual bool CallBuiltin(lang::Builtin id, std::vector<Value>& args, Value* result) = 0;
  virtual void Send(const Value& payload, const Value& dest) = 0;
  // Returns false to block; the execution resumes after the yield point.
  virtual bool YieldPoint(bool blocking, const Value& timeout) = 0;
};

struct Hooks {
  bool trace = false;
  bool access = false;
  std::vector<std::string> unit_filter;  // Glob patterns of units not traced.
  uint64_t step_budget = kDefaultStepBudget;
};

// A resumable call of one code unit.
struct Execution {
  struct Frame {
    int unit;
    int pc;
    size_t locals_base;
    size_t stack_base;
  };
  std::vector<Frame> frames;
  std::vector<Value> stack;
  std::vector<Value> locals;
  Value result;
  bool done = false;
  bool awaiting_value = false;
  uint64_t steps = 0;
};

// Interpreter state for one program instance: globals, process fields, and
// the trace and access sinks. Single-threaded.
class Machine {
 public:
  Machine(std::shared_ptr<const lang::CompiledProgram> program, Hooks hooks,
          Host* host = nullptr, const lang::ProcessInfo* process = nullptr);

  // Runs the globals initializer, if any.
  void InitGlobals();

  enum class Status { kReturned, kBlocked };

  Execution Begin(std::string_view unit, std::vector<Value> args) const;
  Execution Begin(int unit, std::vector<Value> args) const;
  Status Run(Execution& ex);
  // Continues a blocked execution; `value` is the blocked builtin's result.
  Status Resume(Execution& ex, Value value);
  // Runs a unit that must not block (handlers, setup).
  Value Call(int unit, std::vector<Value> args);

  void set_host(Host* host) { host_ = host; }
  const lang::CompiledProgram& program() const { return *program_; }
  const std::shared_ptr<const lang::CompiledProgram>& program_ptr() const { return program_; }
  std::vector<Value>& fields() { return fields_; }
  std::vector<Value>& globals() { return globals_; }
  Trace& trace() { return trace_; }
  AccessLog& accesses() { return accesses_; }
  const Hooks& hooks() const { return hooks_; }
  void LogReceive(uint32_t host, uint32_t proc, uint32_t msg) {
    if (hooks_.access) accesses_.push_back(AccessRecord::Receive(host, proc, msg));
  }

 private:
  struct UnitLink {
    bool traced = true;
    std::vector<int> call_unit;  // Per constant: target unit or -1.
    std::vector<int> builtin;    // Per constant: builtin id or -1.
  };

  [[noreturn]] void Fail(const Execution& ex, ErrorCode code, const std::string& msg) const;
  void LogLeaves(const Value& v, AccessTag tag);
  void PushFrame(Execution& ex, int unit, size_t nargs) const;
  Value PureBuiltin(const Execution& ex, lang::Builtin id, std::vector<Value>& args);
  Value Arith(const Execution& ex, lang::ArithOp op, const Value& a, const Value& b);
  Value Compare(const Execution& ex, lang::CmpOp op, const Value& a, const Value& b);

  std::shared_ptr<const lang::CompiledProgram> program_;
  Hooks hooks_;
  Host* host_;
  std::vector<UnitLink> links_;
  std::vector<Value> globals_;
  std::vector<Value> fields_;
  Trace trace_;
  AccessLog accesses_;
};

}  // namespace algodiv::vm

#endif  // ALGODIV_VM_MACHINE_H_
