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

#include "algodiv/core/value.h"

#include <algorithm>

#include "algodiv/core/error.h"

namespace algodiv {
namespace {

constexpr int kPidBits = 21;
constexpr int64_t kPidMask = (int64_t{1} << kPidBits) - 1;

int64_t PackPid(ProcessId p) {
  return (static_cast<int64_t>(p.host) << (2 * kPidBits)) |
         (static_cast<int64_t>(p.num) << kPidBits) | p.sub;
}

std::strong_ordering CompareElems(const Value::Elems& a,
                                  const Value::Elems& b) {
  size_t n = std::min(a.size(), b.size());
  for (size_t i = 0; i < n; ++i) {
    auto c = a[i] <=> b[i];
    if (c != 0) return c;
  }
  return a.size() <=> b.size();
}

void AppendEscaped(std::string* out, const std::string& s) {
  out->push_back('"');
  for (char c : s) {
    switch (c) {
      case '"': out->append("\\\""); break;
      case '\\': out->append("\\\\"); break;
      case '\n': out->append("\\n"); break;
      case '\t': out->append("\\t"); break;
      default: out->push_back(c);
    }
  }
  out->push_back('"');
}

}  // namespace

std::string ProcessId::ToString() const {
  std::string s = host == kHostDriver ? "driver" : "local";
  s += ":" + std::to_string(num);
  if (sub != 0) s += "/v" + std::to_string(sub - 1);
  return s;
}

std::string ObjectId::ToString() const {
  switch (kind) {
    case Kind::kNone: return "none";
    case Kind::kSeq: return "Seq(" + std::to_string(obj) + ")";
    case Kind::kMsg:
      return "Msg(" + std::to_string(host) + "," + std::to_string(proc) +
             "," + std::to_string(msg) + "," + std::to_string(obj) + ")";
  }
  return "none";
}

Value Value::Bool(bool b) {
  Value v;
  v.kind_ = Kind::kBool;
  v.scalar_ = b ? 1 : 0;
  return v;
}

Value Value::Int(int64_t i) {
  Value v;
  v.kind_ = Kind::kInt;
  v.scalar_ = i;
  return v;
}

Value Value::Str(std::string s) {
  Value v;
  v.kind_ = Kind::kStr;
  v.str_ = std::make_shared<const std::string>(std::move(s));
  return v;
}

Value Value::Pid(ProcessId p) {
  Value v;
  v.kind_ = Kind::kPid;
  v.scalar_ = PackPid(p);
  return v;
}

Value Value::Tuple(Elems elems) {
  Value v;
  v.kind_ = Kind::kTuple;
  v.elems_ = std::make_shared<const Elems>(std::move(elems));
  return v;
}

Value Value::Seq(Elems elems) {
  Value v;
  v.kind_ = Kind::kSeq;
  v.elems_ = std::make_shared<const Elems>(std::move(elems));
  return v;
}

Value Value::Set(Elems elems) {
  std::sort(elems.begin(), elems.end(),
            [](const Value& a, const Value& b) { return (a <=> b) < 0; });
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  Value v;
  v.kind_ = Kind::kSet;
  v.elems_ = std::make_shared<const Elems>(std::move(elems));
  return v;
}

Value Value::Iter(std::shared_ptr<const Elems> elems) {
  Value v;
  v.kind_ = Kind::kIter;
  v.elems_ = std::move(elems);
  return v;
}

ProcessId Value::as_pid() const {
  return {static_cast<uint32_t>(scalar_ >> (2 * kPidBits)),
          static_cast<uint32_t>((scalar_ >> kPidBits) & kPidMask),
          static_cast<uint32_t>(scalar_ & kPidMask)};
}

size_t Value::size() const {
  if (kind_ == Kind::kStr) return str_->size();
  if (elems_) return elems_->size();
  return 0;
}

Value Value::SetWith(const Value& e) const {
  const Elems& cur = *elems_;
  auto it = std::lower_bound(
      cur.begin(), cur.end(), e,
      [](const Value& a, const Value& b) { return (a <=> b) < 0; });
  if (it != cur.end() && *it == e) return *this;
  Elems next;
  next.reserve(cur.size() + 1);
  next.insert(next.end(), cur.begin(), it);
  next.push_back(e);
  next.insert(next.end(), it, cur.end());
  Value v;
  v.kind_ = Kind::kSet;
  v.elems_ = std::make_shared<const Elems>(std::move(next));
  return v;
}

Value Value::SetWithout(const Value& e) const {
  const Elems& cur = *elems_;
  auto it = std::lower_bound(
      cur.begin(), cur.end(), e,
      [](const Value& a, const Value& b) { return (a <=> b) < 0; });
  if (it == cur.end() || !(*it == e)) return *this;
  Elems next;
  next.reserve(cur.size());
  next.insert(next.end(), cur.begin(), it);
  next.insert(next.end(), it + 1, cur.end());
  Value v;
  v.kind_ = Kind::kSet;
  v.elems_ = std::make_shared<const Elems>(std::move(next));
  return v;
}

bool Value::SetContains(const Value& e) const {
  return std::binary_search(
      elems_->begin(), elems_->end(), e,
      [](const Value& a, const Value& b) { return (a <=> b) < 0; });
}

bool Value::Contains(const Value& e) const {
  switch (kind_) {
    case Kind::kSet:
      return SetContains(e);
    case Kind::kTuple:
    case Kind::kSeq:
      return std::find(elems_->begin(), elems_->end(), e) != elems_->end();
    case Kind::kStr:
      if (!e.is_str()) throw Error(ErrorCode::kType, "'in' on string needs a string");
      return str_->find(e.as_str()) != std::string::npos;
    default:
      throw Error(ErrorCode::kType,
                  std::string("'in' on non-collection ") + KindName(kind_));
  }
}

Value Value::Untracked() const {
  if (!AnyTracked()) return *this;
  Value v = *this;
  v.track_ = ObjectId();
  if (elems_ && kind_ != Kind::kIter) {
    Elems next;
    next.reserve(elems_->size());
    for (const Value& e : *elems_) next.push_back(e.Untracked());
    v.elems_ = std::make_shared<const Elems>(std::move(next));
  }
  return v;
}

bool Value::AnyTracked() const {
  if (tracked()) return true;
  if (elems_ && kind_ != Kind::kIter) {
    for (const Value& e : *elems_) {
      if (e.AnyTracked()) return true;
    }
  }
  return false;
}

bool Value::Truthy() const {
  switch (kind_) {
    case Kind::kAbsent: return false;
    case Kind::kBool:
    case Kind::kInt: return scalar_ != 0;
    case Kind::kStr: return !str_->empty();
    case Kind::kPid: return true;
    case Kind::kTuple:
    case Kind::kSeq:
    case Kind::kSet: return !elems_->empty();
    case Kind::kIter: return true;
  }
  return false;
}

bool operator==(const Value& a, const Value& b) {
  if (a.kind_ != b.kind_) return false;
  switch (a.kind_) {
    case Value::Kind::kAbsent: return true;
    case Value::Kind::kBool:
    case Value::Kind::kInt:
    case Value::Kind::kPid: return a.scalar_ == b.scalar_;
    case Value::Kind::kStr:
      return a.str_ == b.str_ || *a.str_ == *b.str_;
    case Value::Kind::kTuple:
    case Value::Kind::kSeq:
    case Value::Kind::kSet:
      return a.elems_ == b.elems_ || *a.elems_ == *b.elems_;
    case Value::Kind::kIter:
      return a.elems_ == b.elems_ && a.scalar_ == b.scalar_;
  }
  return false;
}

std::strong_ordering operator<=>(const Value& a, const Value& b) {
  if (a.kind_ != b.kind_) return a.kind_ <=> b.kind_;
  switch (a.kind_) {
    case Value::Kind::kAbsent: return std::strong_ordering::equal;
    case Value::Kind::kBool:
    case Value::Kind::kInt:
    case Value::Kind::kPid: return a.scalar_ <=> b.scalar_;
    case Value::Kind::kStr: {
      int c = a.str_->compare(*b.str_);
      return c < 0 ? std::strong_ordering::less
                   : c > 0 ? std::strong_ordering::greater
                           : std::strong_ordering::equal;
    }
    case Value::Kind::kTuple:
    case Value::Kind::kSeq:
    case Value::Kind::kSet:
      if (a.elems_ == b.elems_) return std::strong_ordering::equal;
      return CompareElems(*a.elems_, *b.elems_);
    case Value::Kind::kIter:
      return a.scalar_ <=> b.scalar_;
  }
  return std::strong_ordering::equal;
}

std::string Value::ToString() const {
  std::string out;
  switch (kind_) {
    case Kind::kAbsent: return "none";
    case Kind::kBool: return scalar_ ? "true" : "false";
    case Kind::kInt: return std::to_string(scalar_);
    case Kind::kStr: AppendEscaped(&out, *str_); return out;
    case Kind::kPid: return as_pid().ToString();
    case Kind::kIter: return "<iterator>";
    case Kind::kTuple:
    case Kind::kSeq:
    case Kind::kSet: {
      const char* open = kind_ == Kind::kTuple ? "(" : kind_ == Kind::kSeq ? "[" : "{";
      const char* close = kind_ == Kind::kTuple ? ")" : kind_ == Kind::kSeq ? "]" : "}";
      out = open;
      for (size_t i = 0; i < elems_->size(); ++i) {
        if (i > 0) out += ", ";
        out += (*elems_)[i].ToString();
      }
      if (kind_ == Kind::kTuple && elems_->size() == 1) out += ",";
      out += close;
      return out;
    }
  }
  return out;
}

const char* Value::KindName(Kind k) {
  switch (k) {
    case Kind::kAbsent: return "none";
    case Kind::kBool: return "bool";
    case Kind::kInt: return "int";
    case Kind::kStr: return "str";
    case Kind::kPid: return "pid";
    case Kind::kTuple: return "tuple";
    case Kind::kSeq: return "seq";
    case Kind::kSet: return "set";
    case Kind::kIter: return "iterator";
  }
  return "?";
}

Value ReplacePid(const Value& v, ProcessId from, ProcessId to) {
  if (v.is_pid()) {
    return v.as_pid() == from ? Value::Pid(to).WithTrack(v.track()) : v;
  }
  if (!v.is_collection()) return v;
  Value::Elems next;
  next.reserve(v.size());
  bool changed = false;
  for (const Value& e : v.elems()) {
    next.push_back(ReplacePid(e, from, to));
    if (!changed && !(next.back() == e)) changed = true;
  }
  if (!changed) return v;
  Value out = v.is_tuple() ? Value::Tuple(std::move(next))
              : v.is_seq() ? Value::Seq(std::move(next))
                           : Value::Set(std::move(next));
  return out.WithTrack(v.track());
}

nlohmann::json ValueToJson(const Value& v) {
  using nlohmann::json;
  switch (v.kind()) {
    case Value::Kind::kAbsent: return nullptr;
    case Value::Kind::kBool: return v.as_bool();
    case Value::Kind::kInt: return v.as_int();
    case Value::Kind::kStr: return v.as_str();
    case Value::Kind::kPid: {
      ProcessId p = v.as_pid();
      return json{{"pid", {p.host, p.num, p.sub}}};
    }
    case Value::Kind::kTuple:
    case Value::Kind::kSeq:
    case Value::Kind::kSet: {
      json arr = json::array();
      for (const Value& e : v.elems()) arr.push_back(ValueToJson(e));
      const char* key = v.is_tuple() ? "tuple" : v.is_seq() ? "seq" : "set";
      return json{{key, arr}};
    }
    case Value::Kind::kIter:
      throw Error(ErrorCode::kType, "iterator values are not serializable");
  }
  return nullptr;
}

Value ValueFromJson(const nlohmann::json& j) {
  if (j.is_null()) return Value::Absent();
  if (j.is_boolean()) return Value::Bool(j.get<bool>());
  if (j.is_number_integer()) return Value::Int(j.get<int64_t>());
  if (j.is_string()) return Value::Str(j.get<std::string>());
  if (j.is_array()) {
    Value::Elems elems;
    for (const auto& e : j) elems.push_back(ValueFromJson(e));
    return Value::Seq(std::move(elems));
  }
  if (j.is_object() && j.size() == 1) {
    const auto& [key, body] = *j.items().begin();
    if (key == "pid") {
      return Value::Pid({body.at(0).get<uint32_t>(), body.at(1).get<uint32_t>(),
                         body.size() > 2 ? body.at(2).get<uint32_t>() : 0});
    }
    Value::Elems elems;
    for (const auto& e : body) elems.push_back(ValueFromJson(e));
    if (key == "tuple") return Value::Tuple(std::move(elems));
    if (key == "seq") return Value::Seq(std::move(elems));
    if (key == "set") return Value::Set(std::move(elems));
  }
  throw Error(ErrorCode::kType, "cannot decode value from JSON: " + j.dump());
}

}  // namespace algodiv
