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

#ifndef ALGODIV_SYNC_SYSTEM_H_
#define ALGODIV_SYNC_SYSTEM_H_

#include <cstdint>
#include <functional>
#include <memory>

#include "algodiv/sync/config.h"
#include "algodiv/sync/record.h"

namespace algodiv::sync {

// Deterministic discrete-event simulation of Mini processes, gateways and
// their variants. Events run in (time, class, pid, sequence) order, where
// class 0 is delivery/resumption, 1 a gateway's end-of-tick flush and 2 a
// timer.
class System {
 public:
  // Compiles the programs, creates the driver and runs the main entry,
  // which creates, sets up and starts the processes.
  explicit System(SystemConfig config);
  ~System();
  System(const System&) = delete;
  System& operator=(const System&) = delete;

  // Executes one pending event; false when none is left.
  bool Step();
  int64_t now() const;
  size_t pending_events() const;

  using Predicate = std::function<bool(const System&)>;
  // Steps until quiescence/deadlock, the virtual deadline, the event cap, or
  // `stop` returns true.
  ExecutionRecord RunUntil(const Predicate& stop = nullptr);

  // Snapshot of what has been recorded so far.
  ExecutionRecord Record() const;

 private:
  class Impl;
  std::unique_ptr<Impl> impl_;
};

ExecutionRecord Simulate(const SystemConfig& config);

}  // namespace algodiv::sync

#endif  // ALGODIV_SYNC_SYSTEM_H_
