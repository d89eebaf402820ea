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

#include "algodiv/vm/tracking.h"

namespace algodiv::vm {

ObjectId IdAllocator::Next() {
  ObjectId id;
  id.kind = kind_;
  id.host = host_;
  id.proc = proc_;
  id.msg = msg_;
  id.obj = next_++;
  return id;
}

Value WrapTracked(const Value& v, IdAllocator& ids) {
  switch (v.kind()) {
    case Value::Kind::kInt:
    case Value::Kind::kStr:
    case Value::Kind::kBool:
      return v.WithTrack(ids.Next());
    case Value::Kind::kTuple:
    case Value::Kind::kSeq:
    case Value::Kind::kSet: {
      Value::Elems elems;
      elems.reserve(v.size());
      for (const Value& e : v.elems()) elems.push_back(WrapTracked(e, ids));
      if (v.is_tuple()) return Value::Tuple(std::move(elems));
      if (v.is_seq()) return Value::Seq(std::move(elems));
      return Value::Set(std::move(elems));
    }
    default:
      return v;
  }
}

}  // namespace algodiv::vm
