// Copyright 2026 The bytedbg Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <limits>
#include <random>

#include "bytedbg/value.h"

namespace bytedbg {
namespace {

TEST(FormatFloat, ShortestRoundTrip) {
  EXPECT_EQ(format_float(3.0f), "3.0");
  EXPECT_EQ(format_float(0.1f), "0.1");
  EXPECT_EQ(format_float(-0.0f), "-0.0");
  EXPECT_EQ(format_float(1.25f), "1.25");
  EXPECT_EQ(format_float(std::numeric_limits<float>::quiet_NaN()), "NaN");
  EXPECT_EQ(format_float(std::numeric_limits<float>::infinity()), "Infinity");
  EXPECT_EQ(format_float(-std::numeric_limits<float>::infinity()), "-Infinity");
}

TEST(FormatFloat, RandomBitPatternsRoundTrip) {
  std::mt19937 rng(7);
  for (int i = 0; i < 20000; ++i) {
    float f = std::bit_cast<float>(static_cast<uint32_t>(rng()));
    if (std::isnan(f)) continue;
    auto back = parse_float(format_float(f));
    ASSERT_TRUE(back.has_value()) << format_float(f);
    EXPECT_EQ(std::bit_cast<uint32_t>(*back), std::bit_cast<uint32_t>(f)) << format_float(f);
  }
}

TEST(ParseFloat, RejectsGarbage) {
  EXPECT_FALSE(parse_float("").has_value());
  EXPECT_FALSE(parse_float("1.0x").has_value());
  EXPECT_FALSE(parse_float("abc").has_value());
  EXPECT_TRUE(parse_float("2").has_value());
  EXPECT_TRUE(std::isnan(*parse_float("NaN")));
}

TEST(ParseInt, Range) {
  EXPECT_EQ(parse_int("-2147483648"), std::numeric_limits<int32_t>::min());
  EXPECT_EQ(parse_int("2147483647"), std::numeric_limits<int32_t>::max());
  EXPECT_FALSE(parse_int("2147483648").has_value());
  EXPECT_FALSE(parse_int("1.5").has_value());
}

TEST(Value, EqualityIsBitwise) {
  float nan = std::numeric_limits<float>::quiet_NaN();
  EXPECT_EQ(Value::of_float(nan), Value::of_float(nan));
  EXPECT_NE(Value::of_float(0.0f), Value::of_float(-0.0f));
  EXPECT_NE(Value::of_int(1), Value::of_float(1.0f));
}

TEST(NumericLess, OrdersKindsThenValues) {
  EXPECT_TRUE(numeric_less(Value::of_int(5), Value::of_float(-1.0f)));
  EXPECT_TRUE(numeric_less(Value::of_int(-3), Value::of_int(2)));
  EXPECT_TRUE(numeric_less(Value::of_float(-0.0f), Value::of_float(0.0f)));
  EXPECT_FALSE(numeric_less(Value::of_float(0.0f), Value::of_float(-0.0f)));
  float nan = std::numeric_limits<float>::quiet_NaN();
  EXPECT_TRUE(numeric_less(Value::of_float(1e30f), Value::of_float(nan)));
  EXPECT_FALSE(numeric_less(Value::of_float(nan), Value::of_float(1e30f)));
}

}  // namespace
}  // namespace bytedbg
