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

// Consistency checks of a program against its specification, and
// single-fault localization of candidate faulty instructions.

#ifndef BYTEDBG_LOCALIZE_H_
#define BYTEDBG_LOCALIZE_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bytedbg/depflow.h"
#include "bytedbg/ingest.h"
#include "bytedbg/interpreter.h"
#include "bytedbg/spec.h"

namespace bytedbg {

enum class SpecStatus { kPass, kFail, kTrap, kStepLimit };

std::string_view spec_status_name(SpecStatus status);

struct SpecResult {
  ValueSpec spec;  // coerced to the method's kinds
  SpecStatus status = SpecStatus::kPass;
  std::optional<Value> got;
  std::string reason;  // trap reason
};

struct DepVerdict {
  DepDiff diff;
  bool consistent() const { return diff.consistent(); }
};

struct Verdict {
  std::string method;
  std::vector<SpecResult> values;
  std::optional<DepVerdict> deps;
  // Per-line and per-block checks; empty without a block spec.
  std::map<uint32_t, LineCheck> lines;
  std::map<uint32_t, LineCheck> blocks;

  bool values_pass() const;
  bool lines_pass() const;
  // Every present check passed.
  bool consistent() const;
};

struct CheckOptions {
  uint64_t step_limit = kDefaultStepLimit;
  DepOptions deps;
};

// Runs every value spec and the block spec (if any). Binding and kind errors
// are forwarded as exceptions.
Verdict check_values(const Program& program, const Specification& spec,
                     const CheckOptions& options = {});
// Precondition: spec.dep_spec is present (an absent one is treated as empty).
DepVerdict check_deps(const Program& program, const Specification& spec,
                      const DepOptions& options = {});
// Both of the above.
Verdict check(const Program& program, const Specification& spec,
              const CheckOptions& options = {});

enum class DiagnosisMode { kValue, kDependency, kLine, kMerged };

std::string_view diagnosis_mode_name(DiagnosisMode mode);

struct Candidate {
  uint32_t offset = 0;
  double score = 0;
  std::string evidence;
  std::vector<Value> fixing_probes;  // value mode only
};

struct Diagnosis {
  std::string method;
  DiagnosisMode mode = DiagnosisMode::kValue;
  // Descending score, then ascending offset.
  std::vector<Candidate> candidates;

  const Candidate* find(uint32_t offset) const;
};

// Angelic replacement values: expected outputs, spec inputs, every constant
// of the method, {-1, 0, 1} in both kinds, plus `extra`. Sorted with
// numeric_less and deduplicated.
std::vector<Value> build_probe_set(const Method& method, const Specification& spec,
                                   const std::vector<Value>& extra = {});

// Precondition: at least one value spec fails (Error kNoFailingSpec).
Diagnosis localize_value(const Program& program, const Specification& spec,
                         const std::vector<Value>& probes,
                         uint64_t step_limit = kDefaultStepLimit);

// Precondition: the dependency verdict is inconsistent (Error kConsistentSpec).
Diagnosis localize_deps(const Program& program, const Specification& spec,
                        const DepOptions& options = {});

// Offsets whose per-line expectation failed, plus instructions of failing
// blocks. Empty when all line/block checks pass.
Diagnosis localize_lines(const Program& program, const Specification& spec,
                         const Verdict& verdict);

// Union; shared offsets combine as 1 - (1 - a)(1 - b). Throws
// Error(kMethodMismatch) for diagnoses of different methods.
Diagnosis merge_diagnoses(const Diagnosis& a, const Diagnosis& b);

struct DiagnoseOptions {
  CheckOptions check;
  std::vector<Value> extra_probes;
};

struct DiagnoseResult {
  Verdict verdict;
  // Present when the verdict is inconsistent: every applicable mode merged.
  std::optional<Diagnosis> diagnosis;
};

// check() followed by each localization whose precondition holds.
DiagnoseResult diagnose(const Program& program, const Specification& spec,
                        const DiagnoseOptions& options = {});

}  // namespace bytedbg

#endif  // BYTEDBG_LOCALIZE_H_
