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

// The supported JVM instruction subset, methods, structural validation and
// basic-block control-flow graphs.

#ifndef BYTEDBG_BYTECODE_H_
#define BYTEDBG_BYTECODE_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bytedbg/value.h"

namespace bytedbg {

enum class Opcode : uint8_t {
  kIconstM1,
  kIconst0,
  kIconst1,
  kIconst2,
  kIconst3,
  kIconst4,
  kIconst5,
  kBipush,
  kLdcInt,
  kLdcFloat,
  kFconst0,
  kFconst1,
  kFconst2,
  kIload,
  kFload,
  kIload0,
  kIload1,
  kIload2,
  kIload3,
  kFload0,
  kFload1,
  kFload2,
  kFload3,
  kIstore,
  kFstore,
  kIstore0,
  kIstore1,
  kIstore2,
  kIstore3,
  kFstore0,
  kFstore1,
  kFstore2,
  kFstore3,
  kIadd,
  kIsub,
  kImul,
  kIdiv,
  kIrem,
  kIneg,
  kFadd,
  kFsub,
  kFmul,
  kFdiv,
  kFneg,
  kFcmpl,
  kFcmpg,
  kIfeq,
  kIfne,
  kIflt,
  kIfge,
  kIfgt,
  kIfle,
  kIfIcmpeq,
  kIfIcmpne,
  kIfIcmplt,
  kIfIcmpge,
  kIfIcmpgt,
  kIfIcmple,
  kGoto,
  kIreturn,
  kFreturn,
  kReturn,
  kNop,
};

inline constexpr size_t kOpcodeCount = static_cast<size_t>(Opcode::kNop) + 1;

enum class OperandKind : uint8_t {
  kNone,
  kLocalIndex,
  kIntImmediate,
  kFloatImmediate,
  kBranchTarget,
};

struct OpcodeInfo {
  Opcode opcode;
  std::string_view mnemonic;
  OperandKind operand;
  uint8_t width;     // encoded size in bytes
  uint8_t jvm_byte;  // ldc_int and ldc_float share 0x12
  uint8_t pops;
  uint8_t pushes;
};

const OpcodeInfo& opcode_info(Opcode op);
bool is_known_opcode(Opcode op);
std::optional<Opcode> opcode_from_mnemonic(std::string_view mnemonic);

bool is_conditional_branch(Opcode op);
bool is_branch(Opcode op);  // conditional or goto
bool is_return(Opcode op);
bool is_load(Opcode op);
bool is_store(Opcode op);
// Statically known kind of the value an instruction pushes or stores.
std::optional<Kind> produced_kind(Opcode op);

// Branch targets are absolute byte offsets, stored as int32.
using Operand = std::variant<std::monostate, int32_t, float>;

struct Instruction {
  uint32_t offset = 0;
  Opcode opcode = Opcode::kNop;
  Operand operand;

  const OpcodeInfo& info() const { return opcode_info(opcode); }
  uint32_t width() const { return info().width; }
  uint32_t next_offset() const { return offset + width(); }

  // Operands compare by bit pattern so NaN immediates are equal to themselves.
  friend bool operator==(const Instruction& a, const Instruction& b);
};

// Local slot touched by a load or store (explicit or implicit index).
std::optional<uint32_t> local_slot(const Instruction& insn);
// Value pushed by a constant instruction (iconst_*, fconst_*, bipush, ldc_*).
std::optional<Value> constant_value(const Instruction& insn);
std::optional<uint32_t> branch_target(const Instruction& insn);

enum class ReturnKind : uint8_t { kInt, kFloat, kVoid };

std::string_view return_kind_name(ReturnKind kind);

struct Method {
  std::string name;
  std::vector<Kind> params;
  ReturnKind return_kind = ReturnKind::kVoid;
  uint32_t max_stack = 0;
  uint32_t max_locals = 0;
  std::vector<Instruction> code;
  std::map<uint32_t, std::string> local_names;

  // Index of the instruction starting at `offset`, if any.
  std::optional<size_t> index_of(uint32_t offset) const;
  const Instruction* at(uint32_t offset) const;
  uint32_t code_length() const;
  // Offsets of return-family instructions in textual order; Output(k) is the
  // value returned at element k-1.
  std::vector<uint32_t> return_sites() const;

  friend bool operator==(const Method&, const Method&) = default;
};

// Builds a code listing with offsets assigned from opcode widths.
std::vector<Instruction> layout(std::span<const std::pair<Opcode, Operand>> body);

struct Violation {
  std::string kind;
  std::optional<uint32_t> offset;
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

using ValidationReport = std::vector<Violation>;

// Total: never throws, reports every structural problem it can find.
ValidationReport validate(const Method& method);
// Throws Error(kValidation) summarizing the report when it is non-empty.
void require_valid(const Method& method);

// Operand-stack depth on entry to each instruction (by index), nullopt for
// unreachable code. Only meaningful for validated methods.
std::vector<std::optional<uint32_t>> entry_depths(const Method& method);

// Sorted successor offsets of the instruction at `offset`.
std::vector<uint32_t> successors(const Method& method, uint32_t offset);

struct BasicBlock {
  uint32_t id = 0;
  size_t first_index = 0;
  size_t last_index = 0;
  uint32_t start_offset = 0;
  uint32_t end_offset = 0;  // offset of the last instruction

  friend bool operator==(const BasicBlock&, const BasicBlock&) = default;
};

enum class EdgeKind : uint8_t { kFallthrough, kBranchTaken };

struct CfgEdge {
  uint32_t from = 0;
  uint32_t to = 0;
  EdgeKind kind = EdgeKind::kFallthrough;

  friend bool operator==(const CfgEdge&, const CfgEdge&) = default;
};

struct Cfg {
  std::vector<BasicBlock> blocks;
  std::vector<CfgEdge> edges;
  uint32_t entry = 0;

  std::optional<uint32_t> block_of(uint32_t offset) const;
  std::vector<uint32_t> successor_blocks(uint32_t block) const;
  std::vector<uint32_t> predecessor_blocks(uint32_t block) const;
};

Cfg build_cfg(const Method& method);

// dominators[b] lists every block that dominates b (including b), for blocks
// reachable from the entry; unreachable blocks get an empty list.
std::vector<std::vector<uint32_t>> dominators(const Cfg& cfg);

}  // namespace bytedbg

#endif  // BYTEDBG_BYTECODE_H_
