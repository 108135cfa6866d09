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

#ifndef BYTEDBG_VALUE_H_
#define BYTEDBG_VALUE_H_

#include <bit>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace bytedbg {

enum class Kind : uint8_t { kInt, kFloat };

std::string_view kind_name(Kind kind);

// A JVM category-1 primitive: int32 or float32. Equality and ordering are
// defined on (kind, bit pattern), so NaN == NaN when the bits agree.
class Value {
 public:
  constexpr Value() = default;

  static constexpr Value of_int(int32_t v) {
    return Value(Kind::kInt, static_cast<uint32_t>(v));
  }
  static constexpr Value of_float(float v) {
    return Value(Kind::kFloat, std::bit_cast<uint32_t>(v));
  }

  constexpr Kind kind() const { return kind_; }
  constexpr bool is_int() const { return kind_ == Kind::kInt; }
  constexpr bool is_float() const { return kind_ == Kind::kFloat; }
  constexpr int32_t as_int() const { return static_cast<int32_t>(bits_); }
  constexpr float as_float() const { return std::bit_cast<float>(bits_); }
  constexpr uint32_t bits() const { return bits_; }

  friend constexpr bool operator==(const Value&, const Value&) = default;
  friend constexpr auto operator<=>(const Value&, const Value&) = default;

 private:
  constexpr Value(Kind kind, uint32_t bits) : kind_(kind), bits_(bits) {}

  Kind kind_ = Kind::kInt;
  uint32_t bits_ = 0;
};

// Shortest decimal that reads back to the same float32. Always contains a
// '.' or exponent so it cannot be mistaken for an integer literal; non-finite
// values print as NaN, Infinity, -Infinity.
std::string format_float(float v);

// Parses a decimal float literal (or NaN/Infinity/-Infinity) with correct
// rounding to float32. Returns nullopt unless the whole text is consumed.
std::optional<float> parse_float(std::string_view text);

std::optional<int32_t> parse_int(std::string_view text);

// "3" for ints, "3.0" for floats.
std::string to_string(const Value& v);

// Numeric ordering used for deterministic probe enumeration: ints before
// floats, ascending by value, NaN after every other float.
bool numeric_less(const Value& a, const Value& b);

}  // namespace bytedbg

#endif  // BYTEDBG_VALUE_H_
