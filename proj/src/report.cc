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

#include "bytedbg/report.h"

#include <cmath>
#include <cstdlib>

namespace bytedbg {

using nlohmann::json;

json value_json(const Value& v) {
  if (v.is_int()) return v.as_int();
  float f = v.as_float();
  if (!std::isfinite(f)) return format_float(f);
  return std::strtod(format_float(f).c_str(), nullptr);
}

json optional_value_json(const std::optional<Value>& v) {
  return v ? value_json(*v) : json(nullptr);
}

std::optional<Value> value_from_json(const json& j, Kind kind) {
  if (kind == Kind::kInt) {
    if (!j.is_number_integer()) return std::nullopt;
    return Value::of_int(j.get<int32_t>());
  }
  if (j.is_string()) {
    auto f = parse_float(j.get<std::string>());
    if (!f) return std::nullopt;
    return Value::of_float(*f);
  }
  if (!j.is_number()) return std::nullopt;
  return Value::of_float(static_cast<float>(j.get<double>()));
}

namespace {

json values_json(const std::vector<Value>& values) {
  json out = json::array();
  for (const Value& v : values) out.push_back(value_json(v));
  return out;
}

}  // namespace

json to_json(const Report& report) {
  json j = report.extra.is_object() ? report.extra : json::object();
  j["version"] = report.version;
  j["command"] = report.command;
  j["method"] = report.method;
  j["verdicts"] = report.verdicts;
  if (report.dep_verdict) j["dep_verdict"] = *report.dep_verdict;
  if (report.diagnosis) j["diagnosis"] = *report.diagnosis;
  if (report.value_table) j["value_table"] = *report.value_table;
  return j;
}

std::string emit_json(const json& j, bool pretty) {
  return (pretty ? j.dump(2) : j.dump()) + "\n";
}

std::string emit_report(const Report& report, bool pretty) {
  return emit_json(to_json(report), pretty);
}

json spec_results_json(const Verdict& verdict) {
  json out = json::array();
  for (const SpecResult& r : verdict.values) {
    json e;
    e["inputs"] = values_json(r.spec.inputs);
    e["expected"] = optional_value_json(r.spec.expected);
    e["status"] = std::string(spec_status_name(r.status));
    if (r.status == SpecStatus::kPass || r.status == SpecStatus::kFail) {
      e["got"] = optional_value_json(r.got);
    }
    if (r.status == SpecStatus::kTrap) e["reason"] = r.reason;
    if (r.spec.tolerance) e["tolerance"] = *r.spec.tolerance;
    out.push_back(e);
  }
  return out;
}

json dep_set_json(const DepSet& deps, const NameBinding& binding) {
  json out = json::array();
  for (const NamedDepPair& p : name_deps(deps, binding)) {
    out.push_back({p.left, p.right, std::string(dep_kind_name(p.kind))});
  }
  return out;
}

json dep_verdict_json(const DepVerdict& verdict, const NameBinding& binding) {
  json j;
  j["status"] = verdict.consistent() ? "consistent" : "inconsistent";
  j["missing"] = dep_set_json(verdict.diff.missing, binding);
  j["extra"] = dep_set_json(verdict.diff.extra, binding);
  return j;
}

json line_checks_json(const std::map<uint32_t, LineCheck>& checks) {
  json out = json::object();
  for (const auto& [offset, c] : checks) {
    json e;
    e["status"] = std::string(line_status_name(c.status));
    e["expected"] = values_json(c.expected);
    e["got"] = values_json(c.got);
    out[std::to_string(offset)] = e;
  }
  return out;
}

json diagnosis_json(const Diagnosis& diagnosis) {
  json j;
  j["method"] = diagnosis.method;
  j["mode"] = std::string(diagnosis_mode_name(diagnosis.mode));
  json cs = json::array();
  for (const Candidate& c : diagnosis.candidates) {
    json e;
    e["offset"] = c.offset;
    e["score"] = c.score;
    e["evidence"] = c.evidence;
    if (!c.fixing_probes.empty()) e["fixing_probes"] = values_json(c.fixing_probes);
    cs.push_back(e);
  }
  j["candidates"] = cs;
  return j;
}

json value_table_json(const ValueTable& table) {
  json out = json::object();
  for (const auto& [offset, rows] : table) {
    json rs = json::array();
    for (const TableRow& row : rows) {
      rs.push_back({{"step", row.step}, {"values", values_json(row.values)}});
    }
    out[std::to_string(offset)] = rs;
  }
  return out;
}

json trace_json(std::span<const TraceEntry> trace) {
  json out = json::array();
  for (const TraceEntry& e : trace) {
    json r;
    r["step"] = e.step;
    r["offset"] = e.offset;
    r["mnemonic"] = std::string(e.mnemonic);
    r["popped"] = values_json(e.popped);
    r["pushed"] = values_json(e.pushed);
    if (e.local_write) {
      r["local_write"] = {{"index", e.local_write->first},
                          {"value", value_json(e.local_write->second)}};
    }
    out.push_back(r);
  }
  return out;
}

json exec_result_json(const ExecResult& result) {
  json j;
  j["outcome"] = std::string(outcome_name(result.outcome));
  j["steps"] = result.steps;
  if (result.outcome == Outcome::kReturned) {
    j["value"] = optional_value_json(result.value);
    j["return_site"] = *result.return_site;
  }
  if (result.outcome == Outcome::kTrapped) j["trap"] = result.trap_reason;
  return j;
}

json error_json(const Error& error) {
  json e;
  e["kind"] = std::string(error_kind_name(error.kind()));
  e["message"] = error.what();
  if (!error.location().empty()) e["location"] = error.location();
  return json{{"error", e}};
}

}  // namespace bytedbg
