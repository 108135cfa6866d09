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

#include "bytedbg/interpreter.h"

#include <cmath>
#include <limits>

#include "bytedbg/error.h"

namespace bytedbg {
namespace {

// Internal trap signal; converted to StepStatus::kTrapped by step().
struct Trap {
  std::string reason;
};

// kRecord selects whether popped/pushed values are captured in the entry.
template <bool kRecord>
class Executor {
 public:
  Executor(Frame& frame, const Method& method, StepResult& result,
           const ValueOverride* override)
      : frame_(frame), method_(method), result_(result), override_(override) {}

  void execute(const Instruction& insn) {
    const Opcode op = insn.opcode;
    uint32_t next = insn.next_offset();
    switch (op) {
      case Opcode::kIconstM1: case Opcode::kIconst0: case Opcode::kIconst1:
      case Opcode::kIconst2: case Opcode::kIconst3: case Opcode::kIconst4:
      case Opcode::kIconst5:
        push(Value::of_int(static_cast<int>(op) - static_cast<int>(Opcode::kIconst0)));
        break;
      case Opcode::kBipush:
      case Opcode::kLdcInt:
        push(Value::of_int(std::get<int32_t>(insn.operand)));
        break;
      case Opcode::kLdcFloat:
        push(Value::of_float(std::get<float>(insn.operand)));
        break;
      case Opcode::kFconst0: case Opcode::kFconst1: case Opcode::kFconst2:
        push(Value::of_float(
            static_cast<float>(static_cast<int>(op) - static_cast<int>(Opcode::kFconst0))));
        break;
      case Opcode::kIload: load(slot_operand(insn), Kind::kInt); break;
      case Opcode::kFload: load(slot_operand(insn), Kind::kFloat); break;
      case Opcode::kIload0: case Opcode::kIload1: case Opcode::kIload2: case Opcode::kIload3:
        load(static_cast<uint32_t>(op) - static_cast<uint32_t>(Opcode::kIload0), Kind::kInt);
        break;
      case Opcode::kFload0: case Opcode::kFload1: case Opcode::kFload2: case Opcode::kFload3:
        load(static_cast<uint32_t>(op) - static_cast<uint32_t>(Opcode::kFload0), Kind::kFloat);
        break;
      case Opcode::kIstore: store(insn, slot_operand(insn), Kind::kInt); break;
      case Opcode::kFstore: store(insn, slot_operand(insn), Kind::kFloat); break;
      case Opcode::kIstore0: case Opcode::kIstore1: case Opcode::kIstore2:
      case Opcode::kIstore3:
        store(insn, static_cast<uint32_t>(op) - static_cast<uint32_t>(Opcode::kIstore0),
              Kind::kInt);
        break;
      case Opcode::kFstore0: case Opcode::kFstore1: case Opcode::kFstore2:
      case Opcode::kFstore3:
        store(insn, static_cast<uint32_t>(op) - static_cast<uint32_t>(Opcode::kFstore0),
              Kind::kFloat);
        break;
      case Opcode::kIfeq: case Opcode::kIfne: case Opcode::kIflt:
      case Opcode::kIfge: case Opcode::kIfgt: case Opcode::kIfle: {
        int32_t a = pop(Kind::kInt).as_int();
        if (compare(op, Opcode::kIfeq, a, 0)) next = target(insn);
        break;
      }
      case Opcode::kIfIcmpeq: case Opcode::kIfIcmpne: case Opcode::kIfIcmplt:
      case Opcode::kIfIcmpge: case Opcode::kIfIcmpgt: case Opcode::kIfIcmple: {
        int32_t b = pop(Kind::kInt).as_int();
        int32_t a = pop(Kind::kInt).as_int();
        if (compare(op, Opcode::kIfIcmpeq, a, b)) next = target(insn);
        break;
      }
      case Opcode::kGoto: next = target(insn); break;
      case Opcode::kIreturn:
      case Opcode::kFreturn:
        result_.returned = pop(op == Opcode::kIreturn ? Kind::kInt : Kind::kFloat);
        result_.status = StepStatus::kReturned;
        break;
      case Opcode::kReturn: result_.status = StepStatus::kReturned; break;
      case Opcode::kNop: break;
      default: arithmetic(op); break;
    }
    frame_.pc = next;
  }

 private:
  static uint32_t slot_operand(const Instruction& insn) {
    const int32_t* i = std::get_if<int32_t>(&insn.operand);
    if (i == nullptr || *i < 0) throw Trap{"local-out-of-range"};
    return static_cast<uint32_t>(*i);
  }

  static uint32_t target(const Instruction& insn) {
    const int32_t* i = std::get_if<int32_t>(&insn.operand);
    if (i == nullptr || *i < 0) throw Trap{"bad-pc"};
    return static_cast<uint32_t>(*i);
  }

  void load(uint32_t slot, Kind kind) {
    if (slot >= frame_.locals.size()) throw Trap{"local-out-of-range"};
    const auto& v = frame_.locals[slot];
    if (!v) throw Trap{"unset-local"};
    if (v->kind() != kind) throw Trap{"kind-mismatch"};
    push(*v);
  }

  void store(const Instruction& insn, uint32_t slot, Kind kind) {
    Value v = pop(kind);
    if (slot >= frame_.locals.size()) throw Trap{"local-out-of-range"};
    if (override_ && override_->offset == insn.offset) v = override_->value;
    frame_.locals[slot] = v;
    if constexpr (kRecord) result_.entry.local_write = std::make_pair(slot, v);
  }

  static bool compare(Opcode op, Opcode base, int32_t a, int32_t b) {
    switch (static_cast<int>(op) - static_cast<int>(base)) {
      case 0: return a == b;
      case 1: return a != b;
      case 2: return a < b;
      case 3: return a >= b;
      case 4: return a > b;
      case 5: return a <= b;
    }
    return false;
  }

  void arithmetic(Opcode op) {
    switch (op) {
      case Opcode::kIadd:
      case Opcode::kIsub:
      case Opcode::kImul:
      case Opcode::kIdiv:
      case Opcode::kIrem: {
        int32_t b = pop(Kind::kInt).as_int();
        int32_t a = pop(Kind::kInt).as_int();
        push(Value::of_int(int_binary(op, a, b)));
        break;
      }
      case Opcode::kIneg:
        push(Value::of_int(static_cast<int32_t>(
            0u - static_cast<uint32_t>(pop(Kind::kInt).as_int()))));
        break;
      case Opcode::kFadd:
      case Opcode::kFsub:
      case Opcode::kFmul:
      case Opcode::kFdiv: {
        float b = pop(Kind::kFloat).as_float();
        float a = pop(Kind::kFloat).as_float();
        float r = 0;
        if (op == Opcode::kFadd) r = a + b;
        if (op == Opcode::kFsub) r = a - b;
        if (op == Opcode::kFmul) r = a * b;
        if (op == Opcode::kFdiv) r = a / b;
        push(Value::of_float(r));
        break;
      }
      case Opcode::kFneg:
        push(Value::of_float(-pop(Kind::kFloat).as_float()));
        break;
      case Opcode::kFcmpl:
      case Opcode::kFcmpg: {
        float b = pop(Kind::kFloat).as_float();
        float a = pop(Kind::kFloat).as_float();
        int32_t r;
        if (std::isnan(a) || std::isnan(b)) {
          r = op == Opcode::kFcmpl ? -1 : 1;
        } else {
          r = a < b ? -1 : (a > b ? 1 : 0);
        }
        push(Value::of_int(r));
        break;
      }
      default:
        throw Trap{"unsupported-opcode"};
    }
  }

  static int32_t int_binary(Opcode op, int32_t a, int32_t b) {
    uint32_t ua = static_cast<uint32_t>(a);
    uint32_t ub = static_cast<uint32_t>(b);
    switch (op) {
      case Opcode::kIadd: return static_cast<int32_t>(ua + ub);
      case Opcode::kIsub: return static_cast<int32_t>(ua - ub);
      case Opcode::kImul: return static_cast<int32_t>(ua * ub);
      case Opcode::kIdiv:
        if (b == 0) throw Trap{"divide-by-zero-int"};
        if (a == std::numeric_limits<int32_t>::min() && b == -1) return a;
        return a / b;
      case Opcode::kIrem:
        if (b == 0) throw Trap{"divide-by-zero-int"};
        if (b == -1) return 0;
        return a % b;
      default:
        break;
    }
    throw Trap{"unsupported-opcode"};
  }

  Value pop(Kind want) {
    if (frame_.stack.empty()) throw Trap{"stack-underflow"};
    Value v = frame_.stack.back();
    frame_.stack.pop_back();
    if constexpr (kRecord) result_.entry.popped.insert(result_.entry.popped.begin(), v);
    if (v.kind() != want) throw Trap{"kind-mismatch"};
    return v;
  }

  void push(Value v) {
    if (override_ && override_->offset == frame_.pc) v = override_->value;
    if (frame_.stack.size() >= method_.max_stack) throw Trap{"stack-overflow"};
    frame_.stack.push_back(v);
    if constexpr (kRecord) result_.entry.pushed.push_back(v);
  }

  Frame& frame_;
  const Method& method_;
  StepResult& result_;
  const ValueOverride* override_;
};

}  // namespace

Frame Frame::initial(const Method& method, std::span<const Value> inputs) {
  if (inputs.size() != method.params.size()) {
    throw Error(ErrorKind::kInputMismatch,
                method.name + " takes " + std::to_string(method.params.size()) +
                    " inputs, got " + std::to_string(inputs.size()));
  }
  Frame frame;
  frame.locals.resize(std::max<size_t>(method.max_locals, inputs.size()));
  for (size_t i = 0; i < inputs.size(); ++i) {
    if (inputs[i].kind() != method.params[i]) {
      throw Error(ErrorKind::kInputMismatch,
                  "input " + std::to_string(i) + " must be " +
                      std::string(kind_name(method.params[i])),
                  "input " + std::to_string(i));
    }
    frame.locals[i] = inputs[i];
  }
  return frame;
}

StepResult step(Frame& frame, const Method& method, uint64_t step_number,
                const ValueOverride* override) {
  StepResult result;
  result.entry.step = step_number;
  result.entry.offset = frame.pc;
  const Instruction* insn = method.at(frame.pc);
  if (insn == nullptr) {
    result.status = StepStatus::kTrapped;
    result.trap = "bad-pc";
    result.entry.mnemonic = "?";
    return result;
  }
  result.entry.mnemonic = insn->info().mnemonic;
  try {
    Executor<true>(frame, method, result, override).execute(*insn);
  } catch (const Trap& trap) {
    result.status = StepStatus::kTrapped;
    result.trap = trap.reason;
  }
  return result;
}

std::string_view outcome_name(Outcome outcome) {
  switch (outcome) {
    case Outcome::kReturned: return "returned";
    case Outcome::kTrapped: return "trapped";
    case Outcome::kStepLimit: return "step_limit";
  }
  return "?";
}

ExecResult run(const Method& method, std::span<const Value> inputs,
               const RunOptions& options) {
  if (options.step_limit == 0) throw Error(ErrorKind::kUsage, "step limit must be >= 1");
  Frame frame = Frame::initial(method, inputs);
  frame.stack.reserve(method.max_stack);
  ExecResult result;
  const ValueOverride* override = options.override ? &*options.override : nullptr;
  std::vector<int32_t> index(method.code_length(), -1);
  for (size_t i = 0; i < method.code.size(); ++i) {
    if (method.code[i].offset < index.size()) index[method.code[i].offset] = static_cast<int32_t>(i);
  }
  StepResult s;
  for (uint64_t n = 1; n <= options.step_limit; ++n) {
    uint32_t pc = frame.pc;
    result.steps = n;
    if (options.record_trace) {
      s = step(frame, method, n, override);
      result.trace.push_back(std::move(s.entry));
    } else if (pc >= index.size() || index[pc] < 0) {
      s.status = StepStatus::kTrapped;
      s.trap = "bad-pc";
    } else {
      try {
        Executor<false>(frame, method, s, override).execute(method.code[index[pc]]);
      } catch (const Trap& trap) {
        s.status = StepStatus::kTrapped;
        s.trap = trap.reason;
      }
    }
    if (s.status == StepStatus::kReturned) {
      result.outcome = Outcome::kReturned;
      result.value = s.returned;
      result.return_site = pc;
      return result;
    }
    if (s.status == StepStatus::kTrapped) {
      result.outcome = Outcome::kTrapped;
      result.trap_reason = std::move(s.trap);
      return result;
    }
  }
  result.outcome = Outcome::kStepLimit;
  return result;
}

ValueTable value_table(std::span<const TraceEntry> trace) {
  ValueTable table;
  for (const TraceEntry& e : trace) {
    TableRow row{e.step, e.pushed};
    if (e.local_write) row.values.push_back(e.local_write->second);
    table[e.offset].push_back(std::move(row));
  }
  return table;
}

std::string_view line_status_name(LineStatus status) {
  switch (status) {
    case LineStatus::kOk: return "ok";
    case LineStatus::kMismatch: return "mismatch";
    case LineStatus::kNotExecuted: return "not_executed";
  }
  return "?";
}

std::map<uint32_t, LineCheck> check_lines(
    const ValueTable& table, const std::map<uint32_t, std::vector<Value>>& expected) {
  std::map<uint32_t, LineCheck> out;
  for (const auto& [offset, want] : expected) {
    LineCheck check;
    check.expected = want;
    auto it = table.find(offset);
    if (it == table.end()) {
      check.status = LineStatus::kNotExecuted;
    } else {
      for (const TableRow& row : it->second) {
        check.got.insert(check.got.end(), row.values.begin(), row.values.end());
      }
      check.status = check.got == want ? LineStatus::kOk : LineStatus::kMismatch;
    }
    out.emplace(offset, std::move(check));
  }
  return out;
}

}  // namespace bytedbg
