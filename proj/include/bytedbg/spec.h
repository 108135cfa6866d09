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

// User-supplied program specifications: expected outputs for given inputs,
// expected dependency pairs, and optional per-line / per-block expectations.
//
// File format (JSON):
//
//   {"method": "maxf",
//    "names": {"0": "n1", "1": "n2"},
//    "value_specs": [{"inputs": [2.0, 3.0], "expected": 3.0, "tolerance": 0.001}],
//    "dep_spec": [["n1", "n2", "compare"], ["O1", "n1", "assign"]],
//    "block_spec": {"inputs": [2.0, 3.0],
//                   "per_line": {"8": [3.0]},
//                   "per_block": {"2": [3.0]}}}
//
// Integer literals are int32 values, literals with a fraction or exponent are
// float32. Integer literals are widened to float where the method expects a
// float. "expected": null means a void return.

#ifndef BYTEDBG_SPEC_H_
#define BYTEDBG_SPEC_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bytedbg/bytecode.h"
#include "bytedbg/depflow.h"
#include "bytedbg/value.h"

namespace bytedbg {

struct ValueSpec {
  std::vector<Value> inputs;
  std::optional<Value> expected;  // nullopt: void
  std::optional<double> tolerance;

  friend bool operator==(const ValueSpec&, const ValueSpec&) = default;
};

struct NamedDepPair {
  std::string left;
  std::string right;
  DepKind kind = DepKind::kAssign;

  friend bool operator==(const NamedDepPair&, const NamedDepPair&) = default;
};

struct BlockSpec {
  std::optional<std::vector<Value>> inputs;
  std::map<uint32_t, std::vector<Value>> per_line;
  std::map<uint32_t, std::vector<Value>> per_block;

  friend bool operator==(const BlockSpec&, const BlockSpec&) = default;
};

struct Specification {
  std::string method;
  std::map<uint32_t, std::string> names;
  std::vector<ValueSpec> value_specs;
  std::optional<std::vector<NamedDepPair>> dep_spec;
  std::optional<BlockSpec> block_spec;

  friend bool operator==(const Specification&, const Specification&) = default;
};

// Throws Error(kSchema) with a JSON-path location, or Error(kKindMismatch).
Specification parse_spec(std::string_view text);
std::string write_spec(const Specification& spec);

// Converts value-spec inputs/expectations to the method's kinds (int
// literals widen to float). Throws Error(kKindMismatch).
Specification coerce_to(const Specification& spec, const Method& method);

// True when `expected` accepts `got` under the spec's comparison rule:
// bit-exact, or |got - expected| <= tolerance for floats.
bool value_matches(const ValueSpec& spec, const std::optional<Value>& got);

// Bijection between identifiers and variables of one method. Locals take
// names from the spec, then from the method's own names, then "L<i>";
// returns are "O1".."Ok" in textual order.
class NameBinding {
 public:
  std::string name_of(VarId var) const;
  std::optional<VarId> find(std::string_view name) const;
  // Throws Error(kUnboundName).
  VarId resolve(std::string_view name) const;

  const std::map<std::string, VarId, std::less<>>& names() const { return by_name_; }

 private:
  friend NameBinding bind_names(const std::map<uint32_t, std::string>&, const Method&);
  std::map<std::string, VarId, std::less<>> by_name_;
  std::map<VarId, std::string> by_var_;
};

// Throws Error(kDuplicateName / kIndexOutOfRange / kSchema for reserved O<n>).
NameBinding bind_names(const std::map<uint32_t, std::string>& names, const Method& method);
NameBinding bind_names(const Specification& spec, const Method& method);

// Dependency spec resolved through `binding`.
DepSet resolve_dep_spec(const std::vector<NamedDepPair>& pairs, const NameBinding& binding);
std::vector<NamedDepPair> name_deps(const DepSet& deps, const NameBinding& binding);

bool is_reserved_output_name(std::string_view name);

}  // namespace bytedbg

#endif  // BYTEDBG_SPEC_H_
