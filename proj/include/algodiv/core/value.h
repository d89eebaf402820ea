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

#ifndef ALGODIV_CORE_VALUE_H_
#define ALGODIV_CORE_VALUE_H_

#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace algodiv {

// Identity of a simulated process. Logical processes have sub == 0. Variant i
// of the gateway (host, num) is (host, num, i + 1), so variants order right
// after their gateway and keep its relative order among other processes.
struct ProcessId {
  uint32_t host = 0;
  uint32_t num = 0;
  uint32_t sub = 0;

  auto operator<=>(const ProcessId&) const = default;
  ProcessId Logical() const { return {host, num, 0}; }
  std::string ToString() const;
};

enum : uint32_t { kHostLocal = 0, kHostDriver = 1 };

// Identity of a tracked input object.
struct ObjectId {
  enum class Kind : uint8_t { kNone, kSeq, kMsg };
  Kind kind = Kind::kNone;
  uint32_t host = 0;
  uint32_t proc = 0;
  uint32_t msg = 0;
  uint32_t obj = 0;  // Seq number for kSeq, depth-first index for kMsg.

  static ObjectId Seq(uint32_t n) { return {Kind::kSeq, 0, 0, 0, n}; }
  static ObjectId Msg(uint32_t host, uint32_t proc, uint32_t msg,
                      uint32_t obj) {
    return {Kind::kMsg, host, proc, msg, obj};
  }
  bool valid() const { return kind != Kind::kNone; }
  bool operator==(const ObjectId&) const = default;
  std::string ToString() const;
};

class Value {
 public:
  // Declaration order is the canonical cross-kind order.
  enum class Kind : uint8_t {
    kAbsent, kBool, kInt, kStr, kPid, kTuple, kSeq, kSet, kIter
  };
  using Elems = std::vector<Value>;

  Value() = default;
  static Value Absent() { return Value(); }
  static Value Bool(bool b);
  static Value Int(int64_t i);
  static Value Str(std::string s);
  static Value Pid(ProcessId p);
  static Value Tuple(Elems elems);
  static Value Seq(Elems elems);
  // Sorts and deduplicates.
  static Value Set(Elems elems);
  static Value Iter(std::shared_ptr<const Elems> elems);

  Kind kind() const { return kind_; }
  bool is_absent() const { return kind_ == Kind::kAbsent; }
  bool is_bool() const { return kind_ == Kind::kBool; }
  bool is_int() const { return kind_ == Kind::kInt; }
  bool is_str() const { return kind_ == Kind::kStr; }
  bool is_pid() const { return kind_ == Kind::kPid; }
  bool is_tuple() const { return kind_ == Kind::kTuple; }
  bool is_seq() const { return kind_ == Kind::kSeq; }
  bool is_set() const { return kind_ == Kind::kSet; }
  bool is_iter() const { return kind_ == Kind::kIter; }
  bool is_collection() const {
    return kind_ == Kind::kTuple || kind_ == Kind::kSeq || kind_ == Kind::kSet;
  }

  // Accessors; callers check kind first (type errors are raised by the VM).
  bool as_bool() const { return scalar_ != 0; }
  int64_t as_int() const { return scalar_; }
  const std::string& as_str() const { return *str_; }
  ProcessId as_pid() const;
  const Elems& elems() const { return *elems_; }
  const std::shared_ptr<const Elems>& elems_ptr() const { return elems_; }
  size_t size() const;

  // Iterator protocol (kIter only).
  bool IterDone() const { return static_cast<size_t>(scalar_) >= elems_->size(); }
  const Value& IterCurrent() const { return (*elems_)[scalar_]; }
  void IterAdvance() { ++scalar_; }

  // Set operations returning new sets (copy on write).
  Value SetWith(const Value& v) const;
  Value SetWithout(const Value& v) const;
  bool SetContains(const Value& v) const;
  bool Contains(const Value& v) const;  // tuple, seq, set, or substring.

  // Tracking tag; ignored by equality and ordering.
  const ObjectId& track() const { return track_; }
  bool tracked() const { return track_.valid(); }
  Value WithTrack(ObjectId id) const {
    Value v = *this;
    v.track_ = id;
    return v;
  }
  // Removes tracking recursively.
  Value Untracked() const;
  bool AnyTracked() const;

  bool Truthy() const;

  friend bool operator==(const Value& a, const Value& b);
  friend std::strong_ordering operator<=>(const Value& a, const Value& b);

  // Mini literal syntax, e.g. ("request", 3, local:1).
  std::string ToString() const;
  static const char* KindName(Kind k);

 private:
  Kind kind_ = Kind::kAbsent;
  ObjectId track_;
  int64_t scalar_ = 0;  // bool, int, pid (packed host/num/sub), iter position.
  std::shared_ptr<const std::string> str_;
  std::shared_ptr<const Elems> elems_;
};

// Replaces every occurrence of `from` with `to`, recursively.
Value ReplacePid(const Value& v, ProcessId from, ProcessId to);

// JSON interchange (untracked; tracking is serialized separately).
nlohmann::json ValueToJson(const Value& v);
Value ValueFromJson(const nlohmann::json& j);

}  // namespace algodiv

#endif  // ALGODIV_CORE_VALUE_H_
