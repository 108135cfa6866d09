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

// Program containers plus the two external encodings: a line-oriented
// assembly text and a minimal subset of the JVM class-file format.
//
// Assembly grammar:
//
//   .class <name>                      optional, defaults to "Main"
//   .method <name> (<I|F>*) <I|F|V>
//   .maxstack <n>                      optional, computed when absent
//   .maxlocals <n>                     optional, computed when absent
//   .names <idx>=<identifier> ...
//   [<offset>:] <mnemonic> [<operand>|<label>]
//   <label>:                           on its own line or before a mnemonic
//   ; comment
//
// Branch operands are absolute byte offsets or labels. `ldc_int n` and
// `ldc_float x` stand for constant-pool loads; the class writer synthesizes
// the pool entries.

#ifndef BYTEDBG_INGEST_H_
#define BYTEDBG_INGEST_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bytedbg/bytecode.h"

namespace bytedbg {

struct ClassRef {
  uint16_t name_index = 0;
  friend bool operator==(const ClassRef&, const ClassRef&) = default;
};
struct NameAndType {
  uint16_t name_index = 0;
  uint16_t descriptor_index = 0;
  friend bool operator==(const NameAndType&, const NameAndType&) = default;
};
struct MethodRef {
  uint16_t class_index = 0;
  uint16_t name_and_type_index = 0;
  friend bool operator==(const MethodRef&, const MethodRef&) = default;
};

// Index 0 of the pool is unused, as in the class-file format.
using PoolEntry = std::variant<std::monostate, std::string, int32_t, float,
                               ClassRef, NameAndType, MethodRef>;

struct Program {
  std::string name = "Main";
  std::vector<Method> methods;
  // Only populated by parse_class. Not part of structural equality.
  std::vector<PoolEntry> constant_pool;

  const Method* find_method(std::string_view method_name) const;
  // Named method, or the first one when `method_name` is empty.
  const Method& method(std::string_view method_name = {}) const;

  friend bool operator==(const Program& a, const Program& b) {
    return a.name == b.name && a.methods == b.methods;
  }
};

Program assemble(std::string_view text);
std::string disassemble(const Program& program);
// Single-method listing (the `.method` block only).
std::string disassemble(const Method& method);

// JVM method descriptor, e.g. "(FF)F".
std::string method_descriptor(const Method& method);

Program parse_class(std::span<const uint8_t> bytes);
std::vector<uint8_t> write_class(const Program& program);

}  // namespace bytedbg

#endif  // BYTEDBG_INGEST_H_
