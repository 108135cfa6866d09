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

// Static variable-dependency extraction. A forward fixpoint over the CFG
// tracks which locals may flow into each operand-stack slot; stores, value
// returns and comparisons then emit dependency pairs, which compose
// transitively along assignment chains.

#ifndef BYTEDBG_DEPFLOW_H_
#define BYTEDBG_DEPFLOW_H_

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "bytedbg/bytecode.h"

namespace bytedbg {

struct VarId {
  enum class Kind : uint8_t { kLocal, kOutput };

  Kind kind = Kind::kLocal;
  uint32_t index = 0;  // local slot, or 1-based output number

  static constexpr VarId local(uint32_t i) { return {Kind::kLocal, i}; }
  static constexpr VarId output(uint32_t k) { return {Kind::kOutput, k}; }

  bool is_output() const { return kind == Kind::kOutput; }

  friend constexpr auto operator<=>(const VarId&, const VarId&) = default;
};

enum class DepKind : uint8_t { kAssign, kCompare };

std::string_view dep_kind_name(DepKind kind);

// assign: left depends on right. compare: the two were compared; stored
// with the smaller VarId on the left so that (a,b) and (b,a) coincide.
struct DepPair {
  VarId left;
  VarId right;
  DepKind kind = DepKind::kAssign;

  static DepPair assign(VarId target, VarId source) {
    return {target, source, DepKind::kAssign};
  }
  static DepPair compare(VarId a, VarId b) {
    return b < a ? DepPair{b, a, DepKind::kCompare} : DepPair{a, b, DepKind::kCompare};
  }

  friend constexpr auto operator<=>(const DepPair&, const DepPair&) = default;
};

using DepSet = std::set<DepPair>;

// Abstract state before one instruction: per stack slot (bottom first) and
// per local, the set of local indices that may flow into it.
struct SourceState {
  std::vector<std::set<uint32_t>> stack;
  std::vector<std::set<uint32_t>> locals;

  friend bool operator==(const SourceState&, const SourceState&) = default;
};

// Entry state per instruction index; nullopt for unreachable code.
using StackSources = std::vector<std::optional<SourceState>>;

StackSources stack_sources(const Method& method);

struct DepOptions {
  // Adds (Output(k), c) for every local c flowing into a branch condition of
  // a block that dominates the k-th return.
  bool control_deps = false;
};

// One base pair with its provenance: the instruction that emitted it and
// the load instructions that introduced its right-hand side.
struct DepSite {
  DepPair pair;
  uint32_t emitter = 0;
  std::set<uint32_t> origins;

  friend bool operator==(const DepSite&, const DepSite&) = default;
};

std::vector<DepSite> extract_dep_sites(const Method& method, const DepOptions& options = {});

// Base pairs, before closure. Requires a valid method.
DepSet extract_deps(const Method& method, const DepOptions& options = {});

// Smallest superset closed under (x,y),(y,z) assign => (x,z) assign.
// Compare pairs pass through untouched; self pairs are never produced.
DepSet transitive_closure(const DepSet& deps);

struct DepDiff {
  DepSet missing;  // in spec, not derivable from the program
  DepSet extra;    // derivable from the program, not in spec

  bool consistent() const { return missing.empty() && extra.empty(); }
};

DepDiff dep_diff(const DepSet& computed, const DepSet& spec);

}  // namespace bytedbg

#endif  // BYTEDBG_DEPFLOW_H_
