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

#include "bytedbg/spec.h"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <set>

#include "bytedbg/error.h"
#include "json.hpp"

namespace bytedbg {
namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& message, const std::string& path) {
  throw Error(ErrorKind::kSchema, message, path);
}

Value parse_number(const json& j, const std::string& path) {
  if (j.is_number_integer()) {
    if (j.is_number_unsigned()) {
      auto u = j.get<uint64_t>();
      if (u > static_cast<uint64_t>(std::numeric_limits<int32_t>::max())) {
        schema_error("integer out of int32 range", path);
      }
      return Value::of_int(static_cast<int32_t>(u));
    }
    auto i = j.get<int64_t>();
    if (i < std::numeric_limits<int32_t>::min() || i > std::numeric_limits<int32_t>::max()) {
      schema_error("integer out of int32 range", path);
    }
    return Value::of_int(static_cast<int32_t>(i));
  }
  if (j.is_number_float()) return Value::of_float(static_cast<float>(j.get<double>()));
  if (j.is_string()) {
    auto s = j.get<std::string>();
    if (s == "NaN" || s == "Infinity" || s == "-Infinity") {
      return Value::of_float(*parse_float(s));
    }
  }
  schema_error("expected a number", path);
}

std::vector<Value> parse_number_list(const json& j, const std::string& path) {
  if (!j.is_array()) schema_error("expected an array of numbers", path);
  std::vector<Value> out;
  for (size_t i = 0; i < j.size(); ++i) {
    out.push_back(parse_number(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

uint32_t parse_index_key(const std::string& key, const std::string& path) {
  auto v = parse_int(key);
  if (!v || *v < 0) schema_error("expected a non-negative integer key", path);
  return static_cast<uint32_t>(*v);
}

std::map<uint32_t, std::vector<Value>> parse_offset_map(const json& j,
                                                        const std::string& path) {
  if (!j.is_object()) schema_error("expected an object", path);
  std::map<uint32_t, std::vector<Value>> out;
  for (const auto& [key, val] : j.items()) {
    std::string p = path + "." + key;
    out[parse_index_key(key, p)] = parse_number_list(val, p);
  }
  return out;
}

void check_keys(const json& j, std::initializer_list<std::string_view> allowed,
                const std::string& path) {
  for (const auto& [key, val] : j.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) schema_error("unknown key '" + key + "'", path + "." + key);
  }
}

json number_json(const Value& v) {
  if (v.is_int()) return v.as_int();
  float f = v.as_float();
  if (!std::isfinite(f)) return format_float(f);
  // The double nearest the shortest float32 decimal prints with the same digits.
  return std::strtod(format_float(f).c_str(), nullptr);
}

json number_list_json(const std::vector<Value>& values) {
  json out = json::array();
  for (const Value& v : values) out.push_back(number_json(v));
  return out;
}

Value coerce_value(const Value& v, Kind want, const std::string& where) {
  if (v.kind() == want) return v;
  if (v.is_int() && want == Kind::kFloat) {
    return Value::of_float(static_cast<float>(v.as_int()));
  }
  throw Error(ErrorKind::kKindMismatch,
              "expected an " + std::string(kind_name(want)) + " value, got " + to_string(v),
              where);
}

}  // namespace

bool is_reserved_output_name(std::string_view name) {
  if (name.size() < 2 || name[0] != 'O') return false;
  for (size_t i = 1; i < name.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(name[i]))) return false;
  }
  return true;
}

Specification parse_spec(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kSchema, std::string("invalid JSON: ") + e.what(),
                "byte " + std::to_string(e.byte));
  }
  if (!j.is_object()) schema_error("specification must be an object", "$");
  check_keys(j, {"method", "names", "value_specs", "dep_spec", "block_spec"}, "$");

  Specification spec;
  if (!j.contains("method") || !j["method"].is_string()) {
    schema_error("missing string field 'method'", "$.method");
  }
  spec.method = j["method"].get<std::string>();

  if (j.contains("names")) {
    const json& names = j["names"];
    if (!names.is_object()) schema_error("expected an object", "$.names");
    std::set<std::string> seen;
    for (const auto& [key, val] : names.items()) {
      std::string p = "$.names." + key;
      uint32_t idx = parse_index_key(key, p);
      if (!val.is_string()) schema_error("expected an identifier", p);
      std::string name = val.get<std::string>();
      if (name.empty()) schema_error("empty identifier", p);
      if (is_reserved_output_name(name)) {
        schema_error("'" + name + "' is reserved for return values", p);
      }
      if (!seen.insert(name).second) {
        throw Error(ErrorKind::kDuplicateName, "name '" + name + "' bound twice", p);
      }
      spec.names[idx] = name;
    }
  }

  bool has_values = false;
  if (j.contains("value_specs")) {
    const json& vs = j["value_specs"];
    if (!vs.is_array()) schema_error("expected an array", "$.value_specs");
    for (size_t i = 0; i < vs.size(); ++i) {
      std::string p = "$.value_specs[" + std::to_string(i) + "]";
      const json& e = vs[i];
      if (!e.is_object()) schema_error("expected an object", p);
      check_keys(e, {"inputs", "expected", "tolerance"}, p);
      ValueSpec v;
      if (e.contains("inputs")) v.inputs = parse_number_list(e["inputs"], p + ".inputs");
      if (!e.contains("expected")) schema_error("missing 'expected'", p + ".expected");
      if (!e["expected"].is_null()) v.expected = parse_number(e["expected"], p + ".expected");
      if (e.contains("tolerance")) {
        const json& t = e["tolerance"];
        if (!t.is_number() || t.get<double>() < 0) {
          schema_error("tolerance must be a non-negative number", p + ".tolerance");
        }
        v.tolerance = t.get<double>();
      }
      spec.value_specs.push_back(std::move(v));
    }
    has_values = true;
  }

  if (j.contains("dep_spec")) {
    const json& ds = j["dep_spec"];
    if (!ds.is_array()) schema_error("expected an array", "$.dep_spec");
    std::vector<NamedDepPair> pairs;
    for (size_t i = 0; i < ds.size(); ++i) {
      std::string p = "$.dep_spec[" + std::to_string(i) + "]";
      const json& e = ds[i];
      if (!e.is_array() || e.size() != 3 || !e[0].is_string() || !e[1].is_string() ||
          !e[2].is_string()) {
        schema_error("expected [left, right, \"assign\"|\"compare\"]", p);
      }
      std::string kind = e[2].get<std::string>();
      if (kind != "assign" && kind != "compare") {
        schema_error("dependency kind must be assign or compare", p + "[2]");
      }
      pairs.push_back({e[0].get<std::string>(), e[1].get<std::string>(),
                       kind == "assign" ? DepKind::kAssign : DepKind::kCompare});
    }
    spec.dep_spec = std::move(pairs);
  }

  if (j.contains("block_spec")) {
    const json& bs = j["block_spec"];
    if (!bs.is_object()) schema_error("expected an object", "$.block_spec");
    check_keys(bs, {"inputs", "per_line", "per_block"}, "$.block_spec");
    BlockSpec block;
    if (bs.contains("inputs")) {
      block.inputs = parse_number_list(bs["inputs"], "$.block_spec.inputs");
    }
    if (bs.contains("per_line")) {
      block.per_line = parse_offset_map(bs["per_line"], "$.block_spec.per_line");
    }
    if (bs.contains("per_block")) {
      block.per_block = parse_offset_map(bs["per_block"], "$.block_spec.per_block");
    }
    spec.block_spec = std::move(block);
  }

  if (!has_values && !spec.dep_spec && !spec.block_spec) {
    schema_error("no specification content: need value_specs, dep_spec or block_spec", "$");
  }
  return spec;
}

std::string write_spec(const Specification& spec) {
  json j;
  j["method"] = spec.method;
  if (!spec.names.empty()) {
    json names = json::object();
    for (const auto& [idx, name] : spec.names) names[std::to_string(idx)] = name;
    j["names"] = names;
  }
  if (!spec.value_specs.empty()) {
    json vs = json::array();
    for (const ValueSpec& v : spec.value_specs) {
      json e;
      e["inputs"] = number_list_json(v.inputs);
      e["expected"] = v.expected ? number_json(*v.expected) : json(nullptr);
      if (v.tolerance) e["tolerance"] = *v.tolerance;
      vs.push_back(e);
    }
    j["value_specs"] = vs;
  }
  if (spec.dep_spec) {
    json ds = json::array();
    for (const NamedDepPair& p : *spec.dep_spec) {
      ds.push_back({p.left, p.right, std::string(dep_kind_name(p.kind))});
    }
    j["dep_spec"] = ds;
  }
  if (spec.block_spec) {
    json bs = json::object();
    if (spec.block_spec->inputs) bs["inputs"] = number_list_json(*spec.block_spec->inputs);
    auto write_map = [](const std::map<uint32_t, std::vector<Value>>& m) {
      json o = json::object();
      for (const auto& [k, v] : m) o[std::to_string(k)] = number_list_json(v);
      return o;
    };
    if (!spec.block_spec->per_line.empty()) bs["per_line"] = write_map(spec.block_spec->per_line);
    if (!spec.block_spec->per_block.empty()) {
      bs["per_block"] = write_map(spec.block_spec->per_block);
    }
    j["block_spec"] = bs;
  }
  return j.dump(2) + "\n";
}

Specification coerce_to(const Specification& spec, const Method& method) {
  Specification out = spec;
  auto coerce_inputs = [&](std::vector<Value>& inputs, const std::string& p) {
    if (inputs.size() != method.params.size()) {
      throw Error(ErrorKind::kKindMismatch,
                  method.name + " takes " + std::to_string(method.params.size()) +
                      " inputs, spec gives " + std::to_string(inputs.size()),
                  p);
    }
    for (size_t k = 0; k < inputs.size(); ++k) {
      inputs[k] = coerce_value(inputs[k], method.params[k],
                               p + "[" + std::to_string(k) + "]");
    }
  };
  for (size_t i = 0; i < out.value_specs.size(); ++i) {
    std::string p = "$.value_specs[" + std::to_string(i) + "]";
    ValueSpec& v = out.value_specs[i];
    coerce_inputs(v.inputs, p + ".inputs");
    if (method.return_kind == ReturnKind::kVoid) {
      if (v.expected) {
        throw Error(ErrorKind::kKindMismatch, method.name + " returns void", p + ".expected");
      }
    } else {
      if (!v.expected) {
        throw Error(ErrorKind::kKindMismatch, method.name + " returns a value",
                    p + ".expected");
      }
      Kind want = method.return_kind == ReturnKind::kInt ? Kind::kInt : Kind::kFloat;
      v.expected = coerce_value(*v.expected, want, p + ".expected");
    }
  }
  if (out.block_spec) {
    if (out.block_spec->inputs) coerce_inputs(*out.block_spec->inputs, "$.block_spec.inputs");
    for (auto& [offset, values] : out.block_spec->per_line) {
      std::string p = "$.block_spec.per_line." + std::to_string(offset);
      const Instruction* insn = method.at(offset);
      if (insn == nullptr) {
        throw Error(ErrorKind::kUnknownOffset,
                    "no instruction at offset " + std::to_string(offset), p);
      }
      auto kind = produced_kind(insn->opcode);
      if (!kind) {
        if (!values.empty()) {
          throw Error(ErrorKind::kKindMismatch,
                      std::string(insn->info().mnemonic) + " produces no values", p);
        }
        continue;
      }
      for (size_t k = 0; k < values.size(); ++k) {
        values[k] = coerce_value(values[k], *kind, p + "[" + std::to_string(k) + "]");
      }
    }
  }
  return out;
}

bool value_matches(const ValueSpec& spec, const std::optional<Value>& got) {
  if (!spec.expected || !got) return !spec.expected && !got;
  if (*spec.expected == *got) return true;
  if (spec.tolerance && spec.expected->is_float() && got->is_float()) {
    double diff = std::fabs(static_cast<double>(got->as_float()) -
                            static_cast<double>(spec.expected->as_float()));
    return diff <= *spec.tolerance;
  }
  return false;
}

std::string NameBinding::name_of(VarId var) const {
  auto it = by_var_.find(var);
  if (it != by_var_.end()) return it->second;
  return (var.is_output() ? "O" : "L") + std::to_string(var.index);
}

std::optional<VarId> NameBinding::find(std::string_view name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

VarId NameBinding::resolve(std::string_view name) const {
  if (auto v = find(name)) return *v;
  throw Error(ErrorKind::kUnboundName, "name '" + std::string(name) + "' is not bound",
              std::string(name));
}

NameBinding bind_names(const std::map<uint32_t, std::string>& names, const Method& method) {
  std::map<uint32_t, std::string> merged = method.local_names;
  for (const auto& [idx, name] : names) merged[idx] = name;

  NameBinding b;
  auto bind = [&](const std::string& name, VarId var) {
    if (!b.by_name_.emplace(name, var).second) {
      throw Error(ErrorKind::kDuplicateName, "name '" + name + "' bound twice", name);
    }
    b.by_var_[var] = name;
  };
  for (const auto& [idx, name] : merged) {
    if (idx >= method.max_locals) {
      throw Error(ErrorKind::kIndexOutOfRange,
                  "local " + std::to_string(idx) + " is outside max_locals " +
                      std::to_string(method.max_locals),
                  name);
    }
    if (is_reserved_output_name(name)) {
      throw Error(ErrorKind::kSchema, "'" + name + "' is reserved for return values", name);
    }
    bind(name, VarId::local(idx));
  }
  for (uint32_t i = 0; i < method.max_locals; ++i) {
    if (!merged.count(i)) bind("L" + std::to_string(i), VarId::local(i));
  }
  auto returns = method.return_sites();
  for (uint32_t k = 1; k <= returns.size(); ++k) bind("O" + std::to_string(k), VarId::output(k));
  return b;
}

NameBinding bind_names(const Specification& spec, const Method& method) {
  return bind_names(spec.names, method);
}

DepSet resolve_dep_spec(const std::vector<NamedDepPair>& pairs, const NameBinding& binding) {
  DepSet out;
  for (const NamedDepPair& p : pairs) {
    VarId l = binding.resolve(p.left);
    VarId r = binding.resolve(p.right);
    out.insert(p.kind == DepKind::kAssign ? DepPair::assign(l, r) : DepPair::compare(l, r));
  }
  return out;
}

std::vector<NamedDepPair> name_deps(const DepSet& deps, const NameBinding& binding) {
  std::vector<NamedDepPair> out;
  for (const DepPair& p : deps) {
    out.push_back({binding.name_of(p.left), binding.name_of(p.right), p.kind});
  }
  return out;
}

}  // namespace bytedbg
