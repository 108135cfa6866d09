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

#include "bytedbg/bytecode.h"

#include <algorithm>
#include <array>
#include <bit>
#include <deque>
#include <set>
#include <sstream>

#include "bytedbg/error.h"

namespace bytedbg {
namespace {

using OK = OperandKind;

constexpr std::array<OpcodeInfo, kOpcodeCount> kOpcodes = {{
    {Opcode::kIconstM1, "iconst_m1", OK::kNone, 1, 0x02, 0, 1},
    {Opcode::kIconst0, "iconst_0", OK::kNone, 1, 0x03, 0, 1},
    {Opcode::kIconst1, "iconst_1", OK::kNone, 1, 0x04, 0, 1},
    {Opcode::kIconst2, "iconst_2", OK::kNone, 1, 0x05, 0, 1},
    {Opcode::kIconst3, "iconst_3", OK::kNone, 1, 0x06, 0, 1},
    {Opcode::kIconst4, "iconst_4", OK::kNone, 1, 0x07, 0, 1},
    {Opcode::kIconst5, "iconst_5", OK::kNone, 1, 0x08, 0, 1},
    {Opcode::kBipush, "bipush", OK::kIntImmediate, 2, 0x10, 0, 1},
    {Opcode::kLdcInt, "ldc_int", OK::kIntImmediate, 2, 0x12, 0, 1},
    {Opcode::kLdcFloat, "ldc_float", OK::kFloatImmediate, 2, 0x12, 0, 1},
    {Opcode::kFconst0, "fconst_0", OK::kNone, 1, 0x0b, 0, 1},
    {Opcode::kFconst1, "fconst_1", OK::kNone, 1, 0x0c, 0, 1},
    {Opcode::kFconst2, "fconst_2", OK::kNone, 1, 0x0d, 0, 1},
    {Opcode::kIload, "iload", OK::kLocalIndex, 2, 0x15, 0, 1},
    {Opcode::kFload, "fload", OK::kLocalIndex, 2, 0x17, 0, 1},
    {Opcode::kIload0, "iload_0", OK::kNone, 1, 0x1a, 0, 1},
    {Opcode::kIload1, "iload_1", OK::kNone, 1, 0x1b, 0, 1},
    {Opcode::kIload2, "iload_2", OK::kNone, 1, 0x1c, 0, 1},
    {Opcode::kIload3, "iload_3", OK::kNone, 1, 0x1d, 0, 1},
    {Opcode::kFload0, "fload_0", OK::kNone, 1, 0x22, 0, 1},
    {Opcode::kFload1, "fload_1", OK::kNone, 1, 0x23, 0, 1},
    {Opcode::kFload2, "fload_2", OK::kNone, 1, 0x24, 0, 1},
    {Opcode::kFload3, "fload_3", OK::kNone, 1, 0x25, 0, 1},
    {Opcode::kIstore, "istore", OK::kLocalIndex, 2, 0x36, 1, 0},
    {Opcode::kFstore, "fstore", OK::kLocalIndex, 2, 0x38, 1, 0},
    {Opcode::kIstore0, "istore_0", OK::kNone, 1, 0x3b, 1, 0},
    {Opcode::kIstore1, "istore_1", OK::kNone, 1, 0x3c, 1, 0},
    {Opcode::kIstore2, "istore_2", OK::kNone, 1, 0x3d, 1, 0},
    {Opcode::kIstore3, "istore_3", OK::kNone, 1, 0x3e, 1, 0},
    {Opcode::kFstore0, "fstore_0", OK::kNone, 1, 0x43, 1, 0},
    {Opcode::kFstore1, "fstore_1", OK::kNone, 1, 0x44, 1, 0},
    {Opcode::kFstore2, "fstore_2", OK::kNone, 1, 0x45, 1, 0},
    {Opcode::kFstore3, "fstore_3", OK::kNone, 1, 0x46, 1, 0},
    {Opcode::kIadd, "iadd", OK::kNone, 1, 0x60, 2, 1},
    {Opcode::kIsub, "isub", OK::kNone, 1, 0x64, 2, 1},
    {Opcode::kImul, "imul", OK::kNone, 1, 0x68, 2, 1},
    {Opcode::kIdiv, "idiv", OK::kNone, 1, 0x6c, 2, 1},
    {Opcode::kIrem, "irem", OK::kNone, 1, 0x70, 2, 1},
    {Opcode::kIneg, "ineg", OK::kNone, 1, 0x74, 1, 1},
    {Opcode::kFadd, "fadd", OK::kNone, 1, 0x62, 2, 1},
    {Opcode::kFsub, "fsub", OK::kNone, 1, 0x66, 2, 1},
    {Opcode::kFmul, "fmul", OK::kNone, 1, 0x6a, 2, 1},
    {Opcode::kFdiv, "fdiv", OK::kNone, 1, 0x6e, 2, 1},
    {Opcode::kFneg, "fneg", OK::kNone, 1, 0x76, 1, 1},
    {Opcode::kFcmpl, "fcmpl", OK::kNone, 1, 0x95, 2, 1},
    {Opcode::kFcmpg, "fcmpg", OK::kNone, 1, 0x96, 2, 1},
    {Opcode::kIfeq, "ifeq", OK::kBranchTarget, 3, 0x99, 1, 0},
    {Opcode::kIfne, "ifne", OK::kBranchTarget, 3, 0x9a, 1, 0},
    {Opcode::kIflt, "iflt", OK::kBranchTarget, 3, 0x9b, 1, 0},
    {Opcode::kIfge, "ifge", OK::kBranchTarget, 3, 0x9c, 1, 0},
    {Opcode::kIfgt, "ifgt", OK::kBranchTarget, 3, 0x9d, 1, 0},
    {Opcode::kIfle, "ifle", OK::kBranchTarget, 3, 0x9e, 1, 0},
    {Opcode::kIfIcmpeq, "if_icmpeq", OK::kBranchTarget, 3, 0x9f, 2, 0},
    {Opcode::kIfIcmpne, "if_icmpne", OK::kBranchTarget, 3, 0xa0, 2, 0},
    {Opcode::kIfIcmplt, "if_icmplt", OK::kBranchTarget, 3, 0xa1, 2, 0},
    {Opcode::kIfIcmpge, "if_icmpge", OK::kBranchTarget, 3, 0xa2, 2, 0},
    {Opcode::kIfIcmpgt, "if_icmpgt", OK::kBranchTarget, 3, 0xa3, 2, 0},
    {Opcode::kIfIcmple, "if_icmple", OK::kBranchTarget, 3, 0xa4, 2, 0},
    {Opcode::kGoto, "goto", OK::kBranchTarget, 3, 0xa7, 0, 0},
    {Opcode::kIreturn, "ireturn", OK::kNone, 1, 0xac, 1, 0},
    {Opcode::kFreturn, "freturn", OK::kNone, 1, 0xae, 1, 0},
    {Opcode::kReturn, "return", OK::kNone, 1, 0xb1, 0, 0},
    {Opcode::kNop, "nop", OK::kNone, 1, 0x00, 0, 0},
}};

constexpr bool table_is_ordered() {
  for (size_t i = 0; i < kOpcodes.size(); ++i) {
    if (static_cast<size_t>(kOpcodes[i].opcode) != i) return false;
  }
  return true;
}
static_assert(table_is_ordered());

bool in_range(Opcode op, Opcode lo, Opcode hi) { return op >= lo && op <= hi; }

std::string offset_location(uint32_t offset) { return "offset " + std::to_string(offset); }

}  // namespace

const OpcodeInfo& opcode_info(Opcode op) {
  return kOpcodes[static_cast<size_t>(op)];
}

bool is_known_opcode(Opcode op) {
  return static_cast<size_t>(op) < kOpcodeCount;
}

std::optional<Opcode> opcode_from_mnemonic(std::string_view mnemonic) {
  for (const auto& info : kOpcodes) {
    if (info.mnemonic == mnemonic) return info.opcode;
  }
  return std::nullopt;
}

bool is_conditional_branch(Opcode op) {
  return in_range(op, Opcode::kIfeq, Opcode::kIfIcmple);
}

bool is_branch(Opcode op) {
  return is_conditional_branch(op) || op == Opcode::kGoto;
}

bool is_return(Opcode op) {
  return in_range(op, Opcode::kIreturn, Opcode::kReturn);
}

bool is_load(Opcode op) { return in_range(op, Opcode::kIload, Opcode::kFload3); }

bool is_store(Opcode op) {
  return in_range(op, Opcode::kIstore, Opcode::kFstore3);
}

std::optional<Kind> produced_kind(Opcode op) {
  switch (op) {
    case Opcode::kLdcFloat:
    case Opcode::kFconst0:
    case Opcode::kFconst1:
    case Opcode::kFconst2:
    case Opcode::kFload:
    case Opcode::kFload0:
    case Opcode::kFload1:
    case Opcode::kFload2:
    case Opcode::kFload3:
    case Opcode::kFstore:
    case Opcode::kFstore0:
    case Opcode::kFstore1:
    case Opcode::kFstore2:
    case Opcode::kFstore3:
    case Opcode::kFadd:
    case Opcode::kFsub:
    case Opcode::kFmul:
    case Opcode::kFdiv:
    case Opcode::kFneg:
      return Kind::kFloat;
    default:
      break;
  }
  if (is_branch(op) || is_return(op) || op == Opcode::kNop) return std::nullopt;
  return Kind::kInt;
}

bool operator==(const Instruction& a, const Instruction& b) {
  if (a.offset != b.offset || a.opcode != b.opcode) return false;
  if (a.operand.index() != b.operand.index()) return false;
  if (const float* fa = std::get_if<float>(&a.operand)) {
    return std::bit_cast<uint32_t>(*fa) ==
           std::bit_cast<uint32_t>(std::get<float>(b.operand));
  }
  return a.operand == b.operand;
}

std::optional<uint32_t> local_slot(const Instruction& insn) {
  Opcode op = insn.opcode;
  auto implicit = [&](Opcode base) {
    return static_cast<uint32_t>(static_cast<int>(op) - static_cast<int>(base));
  };
  if (op == Opcode::kIload || op == Opcode::kFload || op == Opcode::kIstore ||
      op == Opcode::kFstore) {
    const int32_t* idx = std::get_if<int32_t>(&insn.operand);
    if (idx == nullptr || *idx < 0) return std::nullopt;
    return static_cast<uint32_t>(*idx);
  }
  if (in_range(op, Opcode::kIload0, Opcode::kIload3)) return implicit(Opcode::kIload0);
  if (in_range(op, Opcode::kFload0, Opcode::kFload3)) return implicit(Opcode::kFload0);
  if (in_range(op, Opcode::kIstore0, Opcode::kIstore3)) return implicit(Opcode::kIstore0);
  if (in_range(op, Opcode::kFstore0, Opcode::kFstore3)) return implicit(Opcode::kFstore0);
  return std::nullopt;
}

std::optional<Value> constant_value(const Instruction& insn) {
  Opcode op = insn.opcode;
  if (in_range(op, Opcode::kIconstM1, Opcode::kIconst5)) {
    return Value::of_int(static_cast<int>(op) - static_cast<int>(Opcode::kIconst0));
  }
  if (in_range(op, Opcode::kFconst0, Opcode::kFconst2)) {
    return Value::of_float(
        static_cast<float>(static_cast<int>(op) - static_cast<int>(Opcode::kFconst0)));
  }
  if (op == Opcode::kBipush || op == Opcode::kLdcInt) {
    if (const int32_t* v = std::get_if<int32_t>(&insn.operand)) return Value::of_int(*v);
  }
  if (op == Opcode::kLdcFloat) {
    if (const float* v = std::get_if<float>(&insn.operand)) return Value::of_float(*v);
  }
  return std::nullopt;
}

std::optional<uint32_t> branch_target(const Instruction& insn) {
  if (!is_branch(insn.opcode)) return std::nullopt;
  const int32_t* t = std::get_if<int32_t>(&insn.operand);
  if (t == nullptr || *t < 0) return std::nullopt;
  return static_cast<uint32_t>(*t);
}

std::string_view return_kind_name(ReturnKind kind) {
  switch (kind) {
    case ReturnKind::kInt: return "I";
    case ReturnKind::kFloat: return "F";
    case ReturnKind::kVoid: return "V";
  }
  return "?";
}

std::optional<size_t> Method::index_of(uint32_t offset) const {
  auto it = std::lower_bound(
      code.begin(), code.end(), offset,
      [](const Instruction& insn, uint32_t off) { return insn.offset < off; });
  if (it != code.end() && it->offset == offset) {
    return static_cast<size_t>(it - code.begin());
  }
  // Unsorted (unvalidated) code: fall back to a scan.
  for (size_t i = 0; i < code.size(); ++i) {
    if (code[i].offset == offset) return i;
  }
  return std::nullopt;
}

const Instruction* Method::at(uint32_t offset) const {
  auto idx = index_of(offset);
  return idx ? &code[*idx] : nullptr;
}

uint32_t Method::code_length() const {
  return code.empty() ? 0 : code.back().next_offset();
}

std::vector<uint32_t> Method::return_sites() const {
  std::vector<uint32_t> out;
  for (const auto& insn : code) {
    if (is_known_opcode(insn.opcode) && is_return(insn.opcode)) out.push_back(insn.offset);
  }
  return out;
}

std::vector<Instruction> layout(std::span<const std::pair<Opcode, Operand>> body) {
  std::vector<Instruction> out;
  uint32_t offset = 0;
  for (const auto& [op, operand] : body) {
    out.push_back(Instruction{offset, op, operand});
    offset += opcode_info(op).width;
  }
  return out;
}

namespace {

// Successor instruction indices; `falls_off` is set when control would run
// past the last instruction. Invalid branch targets are dropped.
std::vector<size_t> successor_indices(const Method& method, size_t index,
                                      bool* falls_off) {
  const Instruction& insn = method.code[index];
  std::vector<size_t> out;
  *falls_off = false;
  if (!is_known_opcode(insn.opcode) || is_return(insn.opcode)) return out;
  bool next = insn.opcode != Opcode::kGoto;
  if (next) {
    if (index + 1 < method.code.size()) {
      out.push_back(index + 1);
    } else {
      *falls_off = true;
    }
  }
  if (auto target = branch_target(insn)) {
    if (auto t = method.index_of(*target)) {
      if (std::find(out.begin(), out.end(), *t) == out.end()) out.push_back(*t);
    }
  }
  return out;
}

class Validator {
 public:
  explicit Validator(const Method& method) : method_(method) {}

  ValidationReport run() {
    if (method_.params.size() > method_.max_locals) {
      add("params-exceed-locals", std::nullopt,
          std::to_string(method_.params.size()) + " parameters but max_locals " +
              std::to_string(method_.max_locals));
    }
    if (method_.code.empty()) {
      add("empty-code", std::nullopt, "method has no instructions");
      return std::move(report_);
    }
    check_instructions();
    check_stack();
    return std::move(report_);
  }

 private:
  void add(std::string kind, std::optional<uint32_t> offset, std::string message) {
    auto key = std::make_pair(kind, offset.value_or(UINT32_MAX));
    if (!seen_.insert(key).second) return;
    report_.push_back(Violation{std::move(kind), offset, std::move(message)});
  }

  void check_instructions() {
    uint32_t expected = 0;
    for (const Instruction& insn : method_.code) {
      if (!is_known_opcode(insn.opcode)) {
        add("unknown-opcode", insn.offset, "opcode value outside the supported set");
        expected = insn.offset + 1;
        continue;
      }
      const OpcodeInfo& info = insn.info();
      if (insn.offset != expected) {
        add("offset-mismatch", insn.offset,
            "expected offset " + std::to_string(expected) + " for " +
                std::string(info.mnemonic));
      }
      expected = insn.offset + info.width;
      check_operand(insn, info);
      if (auto slot = local_slot(insn); slot && *slot >= method_.max_locals) {
        add("local-out-of-range", insn.offset,
            "local " + std::to_string(*slot) + " >= max_locals " +
                std::to_string(method_.max_locals));
      }
      if (is_return(insn.opcode)) check_return(insn);
    }
  }

  void check_operand(const Instruction& insn, const OpcodeInfo& info) {
    const std::string name(info.mnemonic);
    auto bad = [&](const std::string& what) {
      add("operand-kind", insn.offset, name + ": " + what);
    };
    switch (info.operand) {
      case OperandKind::kNone:
        if (!std::holds_alternative<std::monostate>(insn.operand)) {
          bad("takes no operand");
        }
        break;
      case OperandKind::kLocalIndex: {
        const int32_t* v = std::get_if<int32_t>(&insn.operand);
        if (v == nullptr) {
          bad("expects a local index");
        } else if (*v < 0 || *v > 255) {
          add("operand-range", insn.offset, name + ": local index must be 0..255");
        }
        break;
      }
      case OperandKind::kIntImmediate: {
        const int32_t* v = std::get_if<int32_t>(&insn.operand);
        if (v == nullptr) {
          bad("expects an integer immediate");
        } else if (insn.opcode == Opcode::kBipush && (*v < -128 || *v > 127)) {
          add("operand-range", insn.offset, name + ": immediate must be -128..127");
        }
        break;
      }
      case OperandKind::kFloatImmediate:
        if (!std::holds_alternative<float>(insn.operand)) {
          bad("expects a float immediate");
        }
        break;
      case OperandKind::kBranchTarget: {
        const int32_t* v = std::get_if<int32_t>(&insn.operand);
        if (v == nullptr) {
          bad("expects a branch target");
        } else if (*v < 0 || !method_.index_of(static_cast<uint32_t>(*v))) {
          add("bad-branch-target", insn.offset,
              name + ": target " + std::to_string(*v) +
                  " is not an instruction boundary");
        }
        break;
      }
    }
  }

  void check_return(const Instruction& insn) {
    ReturnKind want = ReturnKind::kVoid;
    if (insn.opcode == Opcode::kIreturn) want = ReturnKind::kInt;
    if (insn.opcode == Opcode::kFreturn) want = ReturnKind::kFloat;
    if (want != method_.return_kind) {
      add("return-kind-mismatch", insn.offset,
          std::string(insn.info().mnemonic) + " in a method returning " +
              std::string(return_kind_name(method_.return_kind)));
    }
  }

  void check_stack() {
    const auto& code = method_.code;
    std::vector<std::optional<uint32_t>> depth(code.size());
    std::deque<size_t> work;
    depth[0] = 0;
    work.push_back(0);
    while (!work.empty()) {
      size_t i = work.front();
      work.pop_front();
      const Instruction& insn = code[i];
      if (!is_known_opcode(insn.opcode)) continue;
      const OpcodeInfo& info = insn.info();
      uint32_t d = *depth[i];
      uint32_t out;
      if (d < info.pops) {
        add("stack-underflow", insn.offset,
            std::string(info.mnemonic) + " pops " + std::to_string(info.pops) +
                " with depth " + std::to_string(d));
        out = info.pushes;
      } else {
        out = d - info.pops + info.pushes;
      }
      if (out > method_.max_stack) {
        add("stack-overflow", insn.offset,
            "depth " + std::to_string(out) + " exceeds max_stack " +
                std::to_string(method_.max_stack));
      }
      bool falls_off = false;
      for (size_t s : successor_indices(method_, i, &falls_off)) {
        if (!depth[s]) {
          depth[s] = out;
          work.push_back(s);
        } else if (*depth[s] != out) {
          add("stack-mismatch", code[s].offset,
              "inconsistent stack depths " + std::to_string(*depth[s]) + " and " +
                  std::to_string(out) + " at join");
        }
      }
      if (falls_off) {
        add("missing-return", insn.offset, "control falls off the end of the code");
      }
    }
  }

  const Method& method_;
  ValidationReport report_;
  std::set<std::pair<std::string, uint32_t>> seen_;
};

}  // namespace

ValidationReport validate(const Method& method) { return Validator(method).run(); }

void require_valid(const Method& method) {
  ValidationReport report = validate(method);
  if (report.empty()) return;
  std::ostringstream msg;
  msg << "method " << method.name << " is invalid:";
  for (const auto& v : report) {
    msg << " [" << v.kind;
    if (v.offset) msg << " @" << *v.offset;
    msg << ": " << v.message << "]";
  }
  throw Error(ErrorKind::kValidation, msg.str(),
              report.front().offset ? offset_location(*report.front().offset)
                                    : method.name);
}

std::vector<std::optional<uint32_t>> entry_depths(const Method& method) {
  std::vector<std::optional<uint32_t>> depth(method.code.size());
  if (method.code.empty()) return depth;
  std::deque<size_t> work{0};
  depth[0] = 0;
  while (!work.empty()) {
    size_t i = work.front();
    work.pop_front();
    const OpcodeInfo& info = method.code[i].info();
    uint32_t d = *depth[i];
    uint32_t out = d < info.pops ? info.pushes : d - info.pops + info.pushes;
    bool falls_off = false;
    for (size_t s : successor_indices(method, i, &falls_off)) {
      if (!depth[s]) {
        depth[s] = out;
        work.push_back(s);
      }
    }
  }
  return depth;
}

std::vector<uint32_t> successors(const Method& method, uint32_t offset) {
  auto index = method.index_of(offset);
  if (!index) {
    throw Error(ErrorKind::kUnknownOffset,
                "no instruction starts at offset " + std::to_string(offset),
                offset_location(offset));
  }
  bool falls_off = false;
  std::vector<uint32_t> out;
  for (size_t s : successor_indices(method, *index, &falls_off)) {
    out.push_back(method.code[s].offset);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<uint32_t> Cfg::block_of(uint32_t offset) const {
  for (const auto& b : blocks) {
    if (offset >= b.start_offset && offset <= b.end_offset) return b.id;
  }
  return std::nullopt;
}

std::vector<uint32_t> Cfg::successor_blocks(uint32_t block) const {
  std::vector<uint32_t> out;
  for (const auto& e : edges) {
    if (e.from == block) out.push_back(e.to);
  }
  return out;
}

std::vector<uint32_t> Cfg::predecessor_blocks(uint32_t block) const {
  std::vector<uint32_t> out;
  for (const auto& e : edges) {
    if (e.to == block) out.push_back(e.from);
  }
  return out;
}

Cfg build_cfg(const Method& method) {
  require_valid(method);
  const auto& code = method.code;
  std::vector<bool> leader(code.size(), false);
  leader[0] = true;
  for (size_t i = 0; i < code.size(); ++i) {
    Opcode op = code[i].opcode;
    if (auto target = branch_target(code[i])) leader[*method.index_of(*target)] = true;
    if ((is_branch(op) || is_return(op)) && i + 1 < code.size()) leader[i + 1] = true;
  }

  Cfg cfg;
  for (size_t i = 0; i < code.size(); ++i) {
    if (leader[i]) {
      BasicBlock b;
      b.id = static_cast<uint32_t>(cfg.blocks.size());
      b.first_index = i;
      b.start_offset = code[i].offset;
      cfg.blocks.push_back(b);
    }
    cfg.blocks.back().last_index = i;
    cfg.blocks.back().end_offset = code[i].offset;
  }

  for (const BasicBlock& b : cfg.blocks) {
    const Instruction& last = code[b.last_index];
    if (is_return(last.opcode)) continue;
    if (last.opcode != Opcode::kGoto) {
      // Validation guarantees a following instruction here.
      cfg.edges.push_back({b.id, b.id + 1, EdgeKind::kFallthrough});
    }
    if (auto target = branch_target(last)) {
      cfg.edges.push_back({b.id, *cfg.block_of(*target), EdgeKind::kBranchTaken});
    }
  }
  return cfg;
}

std::vector<std::vector<uint32_t>> dominators(const Cfg& cfg) {
  const size_t n = cfg.blocks.size();
  std::vector<bool> reachable(n, false);
  std::vector<uint32_t> stack{cfg.entry};
  reachable[cfg.entry] = true;
  while (!stack.empty()) {
    uint32_t b = stack.back();
    stack.pop_back();
    for (uint32_t s : cfg.successor_blocks(b)) {
      if (!reachable[s]) {
        reachable[s] = true;
        stack.push_back(s);
      }
    }
  }

  std::vector<std::set<uint32_t>> dom(n);
  std::set<uint32_t> all;
  for (uint32_t b = 0; b < n; ++b) {
    if (reachable[b]) all.insert(b);
  }
  for (uint32_t b = 0; b < n; ++b) {
    if (!reachable[b]) continue;
    dom[b] = b == cfg.entry ? std::set<uint32_t>{b} : all;
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (uint32_t b = 0; b < n; ++b) {
      if (!reachable[b] || b == cfg.entry) continue;
      std::optional<std::set<uint32_t>> meet;
      for (uint32_t p : cfg.predecessor_blocks(b)) {
        if (!reachable[p]) continue;
        if (!meet) {
          meet = dom[p];
        } else {
          std::set<uint32_t> tmp;
          std::set_intersection(meet->begin(), meet->end(), dom[p].begin(),
                                dom[p].end(), std::inserter(tmp, tmp.begin()));
          meet = std::move(tmp);
        }
      }
      std::set<uint32_t> next = meet.value_or(std::set<uint32_t>{});
      next.insert(b);
      if (next != dom[b]) {
        dom[b] = std::move(next);
        changed = true;
      }
    }
  }
  std::vector<std::vector<uint32_t>> out(n);
  for (uint32_t b = 0; b < n; ++b) out[b].assign(dom[b].begin(), dom[b].end());
  return out;
}

}  // namespace bytedbg
