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

// Canonical JSON rendering of tool results: lexicographically sorted keys,
// shortest round-trip float32 digits, byte-reproducible output.

#ifndef BYTEDBG_REPORT_H_
#define BYTEDBG_REPORT_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "bytedbg/error.h"
#include "bytedbg/interpreter.h"
#include "bytedbg/localize.h"
#include "json.hpp"

namespace bytedbg {

inline constexpr std::string_view kToolVersion = "1.0.0";

struct Report {
  std::string version{kToolVersion};
  std::string command;
  std::string method;
  nlohmann::json verdicts = nlohmann::json::array();
  std::optional<nlohmann::json> dep_verdict;
  std::optional<nlohmann::json> diagnosis;
  std::optional<nlohmann::json> value_table;
  // Command-specific top-level members (trace rows, dependency sets, ...).
  nlohmann::json extra = nlohmann::json::object();
};

nlohmann::json to_json(const Report& report);
std::string emit_report(const Report& report, bool pretty);
std::string emit_json(const nlohmann::json& j, bool pretty);

// Floats render through their shortest float32 decimal; non-finite floats
// become the strings "NaN", "Infinity", "-Infinity".
nlohmann::json value_json(const Value& v);
nlohmann::json optional_value_json(const std::optional<Value>& v);
// Inverse of value_json for a known kind.
std::optional<Value> value_from_json(const nlohmann::json& j, Kind kind);

nlohmann::json spec_results_json(const Verdict& verdict);
nlohmann::json dep_verdict_json(const DepVerdict& verdict, const NameBinding& binding);
nlohmann::json line_checks_json(const std::map<uint32_t, LineCheck>& checks);
nlohmann::json diagnosis_json(const Diagnosis& diagnosis);
nlohmann::json value_table_json(const ValueTable& table);
nlohmann::json trace_json(std::span<const TraceEntry> trace);
nlohmann::json exec_result_json(const ExecResult& result);
// [[left, right, kind], ...] using bound names.
nlohmann::json dep_set_json(const DepSet& deps, const NameBinding& binding);
nlohmann::json error_json(const Error& error);

}  // namespace bytedbg

#endif  // BYTEDBG_REPORT_H_
