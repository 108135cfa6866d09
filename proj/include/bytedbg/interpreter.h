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

// Deterministic execution of the bytecode subset with a per-step trace and
// the per-offset value table built from it.

#ifndef BYTEDBG_INTERPRETER_H_
#define BYTEDBG_INTERPRETER_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bytedbg/bytecode.h"
#include "bytedbg/value.h"

namespace bytedbg {

inline constexpr uint64_t kDefaultStepLimit = 1'000'000;

struct Frame {
  std::vector<std::optional<Value>> locals;
  std::vector<Value> stack;
  uint32_t pc = 0;

  // Locals sized to max_locals, the first params.size() seeded from `inputs`.
  // Throws Error(kInputMismatch) on arity or kind mismatch.
  static Frame initial(const Method& method, std::span<const Value> inputs);

  friend bool operator==(const Frame&, const Frame&) = default;
};

struct TraceEntry {
  uint64_t step = 0;  // 1-based
  uint32_t offset = 0;
  std::string_view mnemonic;
  std::vector<Value> popped;
  std::vector<Value> pushed;
  std::optional<std::pair<uint32_t, Value>> local_write;

  friend bool operator==(const TraceEntry&, const TraceEntry&) = default;
};

// Replaces the value produced at `offset` (its push, or the value written by
// a store) every time that instruction executes.
struct ValueOverride {
  uint32_t offset = 0;
  Value value;
};

enum class StepStatus { kContinue, kReturned, kTrapped };

struct StepResult {
  StepStatus status = StepStatus::kContinue;
  TraceEntry entry;
  std::optional<Value> returned;  // empty for void returns
  std::string trap;
};

// Executes the instruction at frame.pc, mutating `frame`. Traps leave the
// frame in the state reached when the fault was detected.
StepResult step(Frame& frame, const Method& method, uint64_t step_number = 1,
                const ValueOverride* override = nullptr);

enum class Outcome { kReturned, kTrapped, kStepLimit };

std::string_view outcome_name(Outcome outcome);

struct ExecResult {
  Outcome outcome = Outcome::kStepLimit;
  std::optional<Value> value;
  std::string trap_reason;
  std::vector<TraceEntry> trace;
  std::optional<uint32_t> return_site;
  uint64_t steps = 0;

  friend bool operator==(const ExecResult&, const ExecResult&) = default;
};

struct RunOptions {
  uint64_t step_limit = kDefaultStepLimit;
  std::optional<ValueOverride> override;
  bool record_trace = true;
};

// Precondition: `method` validates. Throws Error(kInputMismatch) for bad
// inputs and Error(kUsage) for a zero step limit.
ExecResult run(const Method& method, std::span<const Value> inputs,
               const RunOptions& options = {});

struct TableRow {
  uint64_t step = 0;
  std::vector<Value> values;

  friend bool operator==(const TableRow&, const TableRow&) = default;
};

// offset -> executions in step order. Produced values are the pushes plus
// the value of a local write.
using ValueTable = std::map<uint32_t, std::vector<TableRow>>;

ValueTable value_table(std::span<const TraceEntry> trace);

enum class LineStatus { kOk, kMismatch, kNotExecuted };

std::string_view line_status_name(LineStatus status);

struct LineCheck {
  LineStatus status = LineStatus::kOk;
  std::vector<Value> expected;
  std::vector<Value> got;

  friend bool operator==(const LineCheck&, const LineCheck&) = default;
};

// Compares the concatenated produced values of each listed offset (in step
// order) against the expected list, bit-exactly.
std::map<uint32_t, LineCheck> check_lines(
    const ValueTable& table, const std::map<uint32_t, std::vector<Value>>& expected);

}  // namespace bytedbg

#endif  // BYTEDBG_INTERPRETER_H_
