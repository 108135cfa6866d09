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

#ifndef BYTEDBG_ERROR_H_
#define BYTEDBG_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace bytedbg {

enum class ErrorKind {
  kParse,
  kLabel,
  kValidation,
  kUnknownOffset,
  kBadMagic,
  kUnsupportedConstantTag,
  kUnsupportedOpcode,
  kTruncated,
  kUnsupportedFeature,
  kInputMismatch,
  kSchema,
  kKindMismatch,
  kUnboundName,
  kDuplicateName,
  kIndexOutOfRange,
  kNoFailingSpec,
  kConsistentSpec,
  kMethodMismatch,
  kUnknownMethod,
  kIo,
  kUsage,
};

// Stable snake_case name used in JSON error objects.
std::string_view error_kind_name(ErrorKind kind);

// All recoverable failures of the toolkit. `location` is free-form
// ("line 3, column 7", "$.value_specs[0]", "offset 12") and may be empty.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::string location = {})
      : std::runtime_error(message), kind_(kind), location_(std::move(location)) {}

  ErrorKind kind() const { return kind_; }
  const std::string& location() const { return location_; }

 private:
  ErrorKind kind_;
  std::string location_;
};

}  // namespace bytedbg

#endif  // BYTEDBG_ERROR_H_
