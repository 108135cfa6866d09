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

#include "bytedbg/value.h"

#include <charconv>
#include <cmath>
#include <limits>

#include "bytedbg/error.h"

namespace bytedbg {

std::string_view kind_name(Kind kind) {
  return kind == Kind::kInt ? "int" : "float";
}

std::string_view error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kParse: return "parse";
    case ErrorKind::kLabel: return "label_resolution";
    case ErrorKind::kValidation: return "validation";
    case ErrorKind::kUnknownOffset: return "unknown_offset";
    case ErrorKind::kBadMagic: return "bad_magic";
    case ErrorKind::kUnsupportedConstantTag: return "unsupported_constant_tag";
    case ErrorKind::kUnsupportedOpcode: return "unsupported_opcode";
    case ErrorKind::kTruncated: return "truncated_file";
    case ErrorKind::kUnsupportedFeature: return "unsupported_feature";
    case ErrorKind::kInputMismatch: return "input_mismatch";
    case ErrorKind::kSchema: return "schema";
    case ErrorKind::kKindMismatch: return "kind_mismatch";
    case ErrorKind::kUnboundName: return "unbound_name";
    case ErrorKind::kDuplicateName: return "duplicate_name";
    case ErrorKind::kIndexOutOfRange: return "index_out_of_range";
    case ErrorKind::kNoFailingSpec: return "no_failing_spec";
    case ErrorKind::kConsistentSpec: return "consistent_spec";
    case ErrorKind::kMethodMismatch: return "method_mismatch";
    case ErrorKind::kUnknownMethod: return "unknown_method";
    case ErrorKind::kIo: return "io";
    case ErrorKind::kUsage: return "usage";
  }
  return "unknown";
}

std::string format_float(float v) {
  if (std::isnan(v)) return "NaN";
  if (std::isinf(v)) return v > 0 ? "Infinity" : "-Infinity";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  std::string text(buf, end);
  if (text.find_first_of(".e") == std::string::npos) text += ".0";
  return text;
}

std::optional<float> parse_float(std::string_view text) {
  if (text == "NaN") return std::numeric_limits<float>::quiet_NaN();
  if (text == "Infinity" || text == "+Infinity") {
    return std::numeric_limits<float>::infinity();
  }
  if (text == "-Infinity") return -std::numeric_limits<float>::infinity();
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return std::nullopt;
  // from_chars also accepts "inf"/"nan" spellings; only decimals are allowed.
  for (char c : text) {
    if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == 'e' ||
          c == 'E' || c == '-' || c == '+')) {
      return std::nullopt;
    }
  }
  float out = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (ptr != text.data() + text.size()) return std::nullopt;
  if (ec == std::errc::result_out_of_range) {
    // Overflow saturates to infinity and underflow to signed zero, as the
    // JVM's Float.parseFloat does.
    double d = std::strtod(std::string(text).c_str(), nullptr);
    return static_cast<float>(d);
  }
  if (ec != std::errc()) return std::nullopt;
  return out;
}

std::optional<int32_t> parse_int(std::string_view text) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  int32_t out = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    return std::nullopt;
  }
  return out;
}

std::string to_string(const Value& v) {
  return v.is_int() ? std::to_string(v.as_int()) : format_float(v.as_float());
}

bool numeric_less(const Value& a, const Value& b) {
  if (a.kind() != b.kind()) return a.kind() < b.kind();
  if (a.is_int()) return a.as_int() < b.as_int();
  float x = a.as_float();
  float y = b.as_float();
  bool xn = std::isnan(x);
  bool yn = std::isnan(y);
  if (xn || yn) {
    if (xn && yn) return a.bits() < b.bits();
    return yn;
  }
  if (x != y) return x < y;
  // -0.0 before 0.0
  return std::signbit(x) && !std::signbit(y);
}

}  // namespace bytedbg
