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

#include <gtest/gtest.h>

#include "algodiv/core/error.h"
#include "algodiv/core/random.h"

namespace algodiv {
namespace {

Value I(int64_t i) { return Value::Int(i); }

TEST(ValueTest, SetSortsAndDeduplicates) {
  Value s = Value::Set({I(3), I(1), I(3), I(2)});
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s.elems()[0], I(1));
  EXPECT_EQ(s.elems()[2], I(3));
  EXPECT_TRUE(s.SetContains(I(2)));
  EXPECT_EQ(s.SetWith(I(0)).size(), 4u);
  EXPECT_EQ(s.SetWithout(I(1)), Value::Set({I(2), I(3)}));
  EXPECT_EQ(s.size(), 3u);  // Copy on write.
}

TEST(ValueTest, CrossKindOrderFollowsDeclaration) {
  EXPECT_LT(Value::Bool(true), I(-5));
  EXPECT_LT(I(100), Value::Str("a"));
  EXPECT_LT(Value::Str("zz"), Value::Pid({0, 1, 0}));
  EXPECT_LT(Value::Tuple({I(1)}), Value::Seq({I(0)}));
}

TEST(ValueTest, TupleOrderIsLexicographic) {
  EXPECT_LT(Value::Tuple({I(1), I(9)}), Value::Tuple({I(2), I(0)}));
  EXPECT_LT(Value::Tuple({I(1)}), Value::Tuple({I(1), I(0)}));
}

TEST(ValueTest, PidOrderPlacesVariantsAfterGateway) {
  ProcessId gw{0, 3, 0}, v1{0, 3, 1}, next{0, 4, 0};
  EXPECT_LT(gw, v1);
  EXPECT_LT(v1, next);
  EXPECT_EQ(v1.Logical(), gw);
}

TEST(ValueTest, TrackingIsIgnoredByEquality) {
  Value a = I(4).WithTrack(ObjectId::Seq(2));
  EXPECT_EQ(a, I(4));
  EXPECT_TRUE(a.tracked());
  Value t = Value::Tuple({a, Value::Str("x")});
  EXPECT_TRUE(t.AnyTracked());
  EXPECT_FALSE(t.Untracked().AnyTracked());
}

TEST(ValueTest, ReplacePidIsRecursive) {
  ProcessId from{0, 1, 1}, to{0, 1, 0}, other{0, 2, 0};
  Value v = Value::Tuple({Value::Str("req"), Value::Pid(from),
                          Value::Set({Value::Pid(from), Value::Pid(other)}),
                          Value::Seq({Value::Tuple({Value::Pid(from)})})});
  Value r = ReplacePid(v, from, to);
  Value want = Value::Tuple({Value::Str("req"), Value::Pid(to), Value::Set({Value::Pid(to), Value::Pid(other)}),
                             Value::Seq({Value::Tuple({Value::Pid(to)})})});
  EXPECT_EQ(r, want);
  EXPECT_EQ(ReplacePid(r, to, from), v);
}

TEST(ValueTest, JsonRoundTrip) {
  Value v = Value::Tuple({I(-3), Value::Str("a\"b"), Value::Bool(false), Value::Pid({1, 2, 3}),
                          Value::Seq({I(1), I(2)}), Value::Set({Value::Str("y"), Value::Str("x")}), Value::Tuple({})});
  EXPECT_EQ(ValueFromJson(ValueToJson(v)), v);
}

TEST(ValueTest, PlainJsonArrayIsASequence) {
  EXPECT_EQ(ValueFromJson(nlohmann::json::parse("[1, \"a\", [2]]")),
            Value::Seq({I(1), Value::Str("a"), Value::Seq({I(2)})}));
}

TEST(ValueTest, MalformedJsonIsRejected) {
  EXPECT_THROW(ValueFromJson(nlohmann::json::parse("{\"bogus\": 1}")), Error);
  EXPECT_THROW(ValueFromJson(nlohmann::json::parse("1.5")), Error);
}

TEST(ValueTest, ContainsCoversCollectionsAndSubstrings) {
  EXPECT_TRUE(Value::Str("abcab").Contains(Value::Str("ca")));
  EXPECT_FALSE(Value::Str("abc").Contains(Value::Str("d")));
  EXPECT_TRUE(Value::Seq({I(1), I(2)}).Contains(I(2)));
  EXPECT_TRUE(Value::Tuple({I(1), I(2)}).Contains(I(1)));
}

TEST(ValueTest, Truthiness) {
  EXPECT_FALSE(I(0).Truthy());
  EXPECT_TRUE(I(2).Truthy());
  EXPECT_FALSE(Value::Seq({}).Truthy());
  EXPECT_FALSE(Value::Str("").Truthy());
  EXPECT_TRUE(Value::Set({I(0)}).Truthy());
}

// Reference outputs of SplitMix64 for seed 0.
TEST(RandomTest, SplitMix64ReferenceSequence) {
  SplitMix64 r(0);
  EXPECT_EQ(r.Next(), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(r.Next(), 0x6e789e6aa1b965f4ULL);
  EXPECT_EQ(r.Next(), 0x06c45d188009454fULL);
}

TEST(RandomTest, UnitIntervalAndBelow) {
  SplitMix64 r(99);
  for (int i = 0; i < 10000; ++i) {
    double u = r.NextUnit();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ASSERT_LT(r.Below(7), 7u);
  }
}

TEST(ErrorTest, CodesHaveNames) {
  EXPECT_STREQ(ErrorCodeName(ErrorCode::kSyntax), "syntax_error");
  Error e(ErrorCode::kArity, "bad");
  EXPECT_EQ(e.code(), ErrorCode::kArity);
  EXPECT_STREQ(e.what(), "bad");
}

}  // namespace
}  // namespace algodiv
