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

#ifndef ALGODIV_VM_TRACKING_H_
#define ALGODIV_VM_TRACKING_H_

#include <cstdint>

#include "algodiv/core/value.h"

namespace algodiv::vm {

// Source of fresh object ids: Seq(n) for direct inputs, or Msg ids for one
// message with objNum assigned in depth-first order.
class IdAllocator {
 public:
  static IdAllocator ForInputs() { return IdAllocator(ObjectId::Kind::kSeq, 0, 0, 0); }
  static IdAllocator ForMessage(uint32_t host, uint32_t proc, uint32_t msg) {
    return IdAllocator(ObjectId::Kind::kMsg, host, proc, msg);
  }

  ObjectId Next();

 private:
  IdAllocator(ObjectId::Kind kind, uint32_t host, uint32_t proc, uint32_t msg)
      : kind_(kind), host_(host), proc_(proc), msg_(msg) {}

  ObjectId::Kind kind_;
  uint32_t host_, proc_, msg_;
  uint32_t next_ = 0;
};

// Tags every int, string, and bool leaf (through tuples, sequences, and
// sets) with a fresh id. Process ids and the absent marker are left alone.
Value WrapTracked(const Value& v, IdAllocator& ids);

}  // namespace algodiv::vm

#endif  // ALGODIV_VM_TRACKING_H_
