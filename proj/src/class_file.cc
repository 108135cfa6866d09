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

// Reader and writer for the class-file subset: version 52.0, a constant
// pool limited to Utf8/Integer/Float/Class/NameAndType/Methodref, no fields,
// and static methods whose Code attribute uses only supported opcodes.

#include <bit>
#include <cstring>
#include <map>
#include <sstream>

#include "bytedbg/error.h"
#include "bytedbg/ingest.h"

namespace bytedbg {
namespace {

constexpr uint32_t kMagic = 0xCAFEBABE;
constexpr uint16_t kMajorVersion = 52;
constexpr uint16_t kAccPublic = 0x0001;
constexpr uint16_t kAccStatic = 0x0008;
constexpr uint16_t kAccSuper = 0x0020;

enum Tag : uint8_t {
  kTagUtf8 = 1,
  kTagInteger = 3,
  kTagFloat = 4,
  kTagClass = 7,
  kTagMethodref = 10,
  kTagNameAndType = 12,
};

class Reader {
 public:
  explicit Reader(std::span<const uint8_t> bytes) : bytes_(bytes) {}

  size_t position() const { return pos_; }
  bool at_end() const { return pos_ == bytes_.size(); }

  uint8_t u1() {
    need(1);
    return bytes_[pos_++];
  }
  uint16_t u2() {
    need(2);
    uint16_t v = static_cast<uint16_t>(bytes_[pos_] << 8 | bytes_[pos_ + 1]);
    pos_ += 2;
    return v;
  }
  uint32_t u4() {
    need(4);
    uint32_t v = static_cast<uint32_t>(bytes_[pos_]) << 24 |
                 static_cast<uint32_t>(bytes_[pos_ + 1]) << 16 |
                 static_cast<uint32_t>(bytes_[pos_ + 2]) << 8 | bytes_[pos_ + 3];
    pos_ += 4;
    return v;
  }
  std::span<const uint8_t> take(size_t n) {
    need(n);
    auto out = bytes_.subspan(pos_, n);
    pos_ += n;
    return out;
  }

 private:
  void need(size_t n) const {
    if (bytes_.size() - pos_ < n) {
      throw Error(ErrorKind::kTruncated,
                  "class file ends after " + std::to_string(bytes_.size()) + " bytes",
                  "byte " + std::to_string(pos_));
    }
  }

  std::span<const uint8_t> bytes_;
  size_t pos_ = 0;
};

class Writer {
 public:
  void u1(uint8_t v) { out_.push_back(v); }
  void u2(uint16_t v) {
    u1(static_cast<uint8_t>(v >> 8));
    u1(static_cast<uint8_t>(v));
  }
  void u4(uint32_t v) {
    u2(static_cast<uint16_t>(v >> 16));
    u2(static_cast<uint16_t>(v));
  }
  void bytes(std::span<const uint8_t> b) { out_.insert(out_.end(), b.begin(), b.end()); }
  void bytes(std::string_view s) { out_.insert(out_.end(), s.begin(), s.end()); }
  std::vector<uint8_t> take() { return std::move(out_); }
  size_t size() const { return out_.size(); }

 private:
  std::vector<uint8_t> out_;
};

// Constant pool under construction; entries are deduplicated.
class PoolBuilder {
 public:
  uint16_t utf8(const std::string& s) { return intern(PoolEntry{s}); }
  uint16_t integer(int32_t v) { return intern(PoolEntry{v}); }
  uint16_t floating(float v) {
    uint32_t bits = std::bit_cast<uint32_t>(v);
    auto it = float_index_.find(bits);
    if (it != float_index_.end()) return it->second;
    entries_.push_back(PoolEntry{v});
    return float_index_[bits] = static_cast<uint16_t>(entries_.size());
  }
  uint16_t class_ref(const std::string& name) {
    return intern(PoolEntry{ClassRef{utf8(name)}});
  }

  size_t count() const { return entries_.size() + 1; }

  void write(Writer& w) const {
    w.u2(static_cast<uint16_t>(count()));
    for (const PoolEntry& e : entries_) {
      if (const auto* s = std::get_if<std::string>(&e)) {
        w.u1(kTagUtf8);
        w.u2(static_cast<uint16_t>(s->size()));
        w.bytes(*s);
      } else if (const auto* i = std::get_if<int32_t>(&e)) {
        w.u1(kTagInteger);
        w.u4(static_cast<uint32_t>(*i));
      } else if (const auto* f = std::get_if<float>(&e)) {
        w.u1(kTagFloat);
        w.u4(std::bit_cast<uint32_t>(*f));
      } else if (const auto* c = std::get_if<ClassRef>(&e)) {
        w.u1(kTagClass);
        w.u2(c->name_index);
      }
    }
  }

 private:
  uint16_t intern(PoolEntry entry) {
    for (size_t i = 0; i < entries_.size(); ++i) {
      if (entries_[i] == entry) return static_cast<uint16_t>(i + 1);
    }
    entries_.push_back(std::move(entry));
    if (entries_.size() >= 0xFFFF) {
      throw Error(ErrorKind::kUnsupportedFeature, "constant pool overflow");
    }
    return static_cast<uint16_t>(entries_.size());
  }

  std::vector<PoolEntry> entries_;
  std::map<uint32_t, uint16_t> float_index_;
};

char kind_char(Kind k) { return k == Kind::kInt ? 'I' : 'F'; }

// Kind of every local slot, for LocalVariableTable descriptors.
std::map<uint32_t, Kind> local_kinds(const Method& m) {
  std::map<uint32_t, Kind> kinds;
  for (size_t i = 0; i < m.params.size(); ++i) kinds[static_cast<uint32_t>(i)] = m.params[i];
  for (const Instruction& insn : m.code) {
    auto slot = local_slot(insn);
    if (!slot || kinds.count(*slot)) continue;
    if (auto k = produced_kind(insn.opcode)) kinds[*slot] = *k;
  }
  return kinds;
}

std::vector<uint8_t> encode_code(const Method& m, PoolBuilder& pool) {
  Writer w;
  for (const Instruction& insn : m.code) {
    const OpcodeInfo& info = insn.info();
    w.u1(info.jvm_byte);
    switch (info.operand) {
      case OperandKind::kNone:
        break;
      case OperandKind::kLocalIndex:
        w.u1(static_cast<uint8_t>(std::get<int32_t>(insn.operand)));
        break;
      case OperandKind::kIntImmediate:
        if (insn.opcode == Opcode::kBipush) {
          w.u1(static_cast<uint8_t>(static_cast<int8_t>(std::get<int32_t>(insn.operand))));
          break;
        }
        [[fallthrough]];
      case OperandKind::kFloatImmediate: {
        uint16_t index = insn.opcode == Opcode::kLdcInt
                             ? pool.integer(std::get<int32_t>(insn.operand))
                             : pool.floating(std::get<float>(insn.operand));
        if (index > 0xFF) {
          throw Error(ErrorKind::kUnsupportedFeature,
                      "constant pool index " + std::to_string(index) +
                          " does not fit a one-byte ldc operand",
                      m.name + " offset " + std::to_string(insn.offset));
        }
        w.u1(static_cast<uint8_t>(index));
        break;
      }
      case OperandKind::kBranchTarget: {
        int32_t rel = std::get<int32_t>(insn.operand) - static_cast<int32_t>(insn.offset);
        if (rel < INT16_MIN || rel > INT16_MAX) {
          throw Error(ErrorKind::kUnsupportedFeature, "branch offset exceeds 16 bits",
                      m.name + " offset " + std::to_string(insn.offset));
        }
        w.u2(static_cast<uint16_t>(static_cast<int16_t>(rel)));
        break;
      }
    }
  }
  return w.take();
}

struct PoolView {
  std::vector<PoolEntry> entries;

  const PoolEntry& at(uint16_t index, const char* what) const {
    if (index == 0 || index >= entries.size() ||
        std::holds_alternative<std::monostate>(entries[index])) {
      throw Error(ErrorKind::kParse,
                  std::string("invalid constant pool index for ") + what,
                  "pool index " + std::to_string(index));
    }
    return entries[index];
  }
  const std::string& utf8(uint16_t index, const char* what) const {
    const auto* s = std::get_if<std::string>(&at(index, what));
    if (s == nullptr) {
      throw Error(ErrorKind::kParse, std::string(what) + " is not a Utf8 entry",
                  "pool index " + std::to_string(index));
    }
    return *s;
  }
};

PoolView read_pool(Reader& r) {
  PoolView pool;
  uint16_t count = r.u2();
  pool.entries.resize(count);
  for (uint16_t i = 1; i < count; ++i) {
    size_t at = r.position();
    uint8_t tag = r.u1();
    switch (tag) {
      case kTagUtf8: {
        uint16_t len = r.u2();
        auto b = r.take(len);
        pool.entries[i] = std::string(b.begin(), b.end());
        break;
      }
      case kTagInteger:
        pool.entries[i] = static_cast<int32_t>(r.u4());
        break;
      case kTagFloat:
        pool.entries[i] = std::bit_cast<float>(r.u4());
        break;
      case kTagClass:
        pool.entries[i] = ClassRef{r.u2()};
        break;
      case kTagNameAndType: {
        uint16_t name = r.u2();
        pool.entries[i] = NameAndType{name, r.u2()};
        break;
      }
      case kTagMethodref: {
        uint16_t cls = r.u2();
        pool.entries[i] = MethodRef{cls, r.u2()};
        break;
      }
      default:
        throw Error(ErrorKind::kUnsupportedConstantTag,
                    "unsupported constant pool tag " + std::to_string(tag) +
                        " at pool index " + std::to_string(i),
                    "byte " + std::to_string(at));
    }
  }
  return pool;
}

void parse_descriptor(const std::string& desc, Method& m) {
  auto bad = [&]() {
    throw Error(ErrorKind::kUnsupportedFeature,
                "method descriptor '" + desc + "' uses types outside int/float",
                m.name);
  };
  if (desc.size() < 3 || desc.front() != '(') bad();
  size_t close = desc.find(')');
  if (close == std::string::npos || close + 2 != desc.size()) bad();
  for (size_t i = 1; i < close; ++i) {
    if (desc[i] == 'I') {
      m.params.push_back(Kind::kInt);
    } else if (desc[i] == 'F') {
      m.params.push_back(Kind::kFloat);
    } else {
      bad();
    }
  }
  switch (desc[close + 1]) {
    case 'I': m.return_kind = ReturnKind::kInt; break;
    case 'F': m.return_kind = ReturnKind::kFloat; break;
    case 'V': m.return_kind = ReturnKind::kVoid; break;
    default: bad();
  }
}

std::string hex_byte(uint8_t b) {
  static const char* digits = "0123456789abcdef";
  return std::string("0x") + digits[b >> 4] + digits[b & 0xF];
}

std::vector<Instruction> decode_code(std::span<const uint8_t> code, const PoolView& pool,
                                     const std::string& method_name) {
  // jvm_byte -> opcode, excluding the shared ldc byte.
  static const auto by_byte = [] {
    std::map<uint8_t, Opcode> m;
    for (size_t i = 0; i < kOpcodeCount; ++i) {
      const OpcodeInfo& info = opcode_info(static_cast<Opcode>(i));
      if (info.jvm_byte != 0x12) m[info.jvm_byte] = info.opcode;
    }
    return m;
  }();

  Reader r(code);
  std::vector<Instruction> out;
  while (!r.at_end()) {
    uint32_t offset = static_cast<uint32_t>(r.position());
    uint8_t byte = r.u1();
    Instruction insn{offset, Opcode::kNop, std::monostate{}};
    if (byte == 0x12) {
      uint8_t index = r.u1();
      const PoolEntry& e = pool.at(index, "ldc");
      if (const auto* i = std::get_if<int32_t>(&e)) {
        insn.opcode = Opcode::kLdcInt;
        insn.operand = *i;
      } else if (const auto* f = std::get_if<float>(&e)) {
        insn.opcode = Opcode::kLdcFloat;
        insn.operand = *f;
      } else {
        throw Error(ErrorKind::kUnsupportedFeature,
                    "ldc of a non-numeric constant",
                    method_name + " offset " + std::to_string(offset));
      }
      out.push_back(insn);
      continue;
    }
    auto it = by_byte.find(byte);
    if (it == by_byte.end()) {
      throw Error(ErrorKind::kUnsupportedOpcode,
                  "unsupported opcode " + hex_byte(byte) + " at offset " +
                      std::to_string(offset),
                  method_name + " offset " + std::to_string(offset));
    }
    insn.opcode = it->second;
    switch (opcode_info(insn.opcode).operand) {
      case OperandKind::kNone:
      case OperandKind::kFloatImmediate:
        break;
      case OperandKind::kLocalIndex:
        insn.operand = static_cast<int32_t>(r.u1());
        break;
      case OperandKind::kIntImmediate:
        insn.operand = static_cast<int32_t>(static_cast<int8_t>(r.u1()));
        break;
      case OperandKind::kBranchTarget:
        insn.operand = static_cast<int32_t>(offset) + static_cast<int16_t>(r.u2());
        break;
    }
    out.push_back(insn);
  }
  return out;
}

void skip_attribute_body(Reader& r) { r.take(r.u4()); }

void read_local_variable_table(std::span<const uint8_t> body, const PoolView& pool,
                               Method& m) {
  Reader r(body);
  uint16_t n = r.u2();
  for (uint16_t i = 0; i < n; ++i) {
    r.u2();  // start_pc
    r.u2();  // length
    uint16_t name = r.u2();
    r.u2();  // descriptor
    uint16_t index = r.u2();
    m.local_names[index] = pool.utf8(name, "local variable name");
  }
}

void read_code_attribute(std::span<const uint8_t> body, const PoolView& pool, Method& m) {
  Reader r(body);
  m.max_stack = r.u2();
  m.max_locals = r.u2();
  uint32_t length = r.u4();
  auto code = r.take(length);
  m.code = decode_code(code, pool, m.name);
  uint16_t handlers = r.u2();
  if (handlers != 0) {
    throw Error(ErrorKind::kUnsupportedFeature, "exception handlers are not supported",
                m.name);
  }
  uint16_t attrs = r.u2();
  for (uint16_t i = 0; i < attrs; ++i) {
    const std::string& name = pool.utf8(r.u2(), "attribute name");
    auto attr = r.take(r.u4());
    if (name == "LocalVariableTable") read_local_variable_table(attr, pool, m);
  }
}

}  // namespace

std::vector<uint8_t> write_class(const Program& program) {
  PoolBuilder pool;
  uint16_t this_class = pool.class_ref(program.name);
  uint16_t super_class = pool.class_ref("java/lang/Object");
  uint16_t code_name = pool.utf8("Code");

  struct Encoded {
    uint16_t name;
    uint16_t descriptor;
    std::vector<uint8_t> code;
    std::vector<std::tuple<uint16_t, uint16_t, uint16_t>> locals;  // name, desc, index
  };
  std::vector<Encoded> methods;
  uint16_t lvt_name = 0;
  for (const Method& m : program.methods) {
    require_valid(m);
    Encoded e;
    // ldc constants first so they get one-byte pool indices.
    e.code = encode_code(m, pool);
    e.name = pool.utf8(m.name);
    e.descriptor = pool.utf8(method_descriptor(m));
    if (!m.local_names.empty()) {
      if (lvt_name == 0) lvt_name = pool.utf8("LocalVariableTable");
      auto kinds = local_kinds(m);
      for (const auto& [idx, name] : m.local_names) {
        Kind k = kinds.count(idx) ? kinds[idx] : Kind::kInt;
        e.locals.emplace_back(pool.utf8(name), pool.utf8(std::string(1, kind_char(k))),
                              static_cast<uint16_t>(idx));
      }
    }
    methods.push_back(std::move(e));
  }

  Writer w;
  w.u4(kMagic);
  w.u2(0);
  w.u2(kMajorVersion);
  pool.write(w);
  w.u2(kAccPublic | kAccSuper);
  w.u2(this_class);
  w.u2(super_class);
  w.u2(0);  // interfaces
  w.u2(0);  // fields
  w.u2(static_cast<uint16_t>(methods.size()));
  for (size_t i = 0; i < methods.size(); ++i) {
    const Method& m = program.methods[i];
    const Encoded& e = methods[i];
    w.u2(kAccPublic | kAccStatic);
    w.u2(e.name);
    w.u2(e.descriptor);
    w.u2(1);
    w.u2(code_name);
    uint32_t lvt_size = e.locals.empty() ? 0 : 6 + 2 + 10 * static_cast<uint32_t>(e.locals.size());
    w.u4(2 + 2 + 4 + static_cast<uint32_t>(e.code.size()) + 2 + 2 + lvt_size);
    w.u2(static_cast<uint16_t>(m.max_stack));
    w.u2(static_cast<uint16_t>(m.max_locals));
    w.u4(static_cast<uint32_t>(e.code.size()));
    w.bytes(e.code);
    w.u2(0);  // exception table
    if (e.locals.empty()) {
      w.u2(0);
    } else {
      w.u2(1);
      w.u2(lvt_name);
      w.u4(2 + 10 * static_cast<uint32_t>(e.locals.size()));
      w.u2(static_cast<uint16_t>(e.locals.size()));
      for (const auto& [name, desc, index] : e.locals) {
        w.u2(0);
        w.u2(static_cast<uint16_t>(e.code.size()));
        w.u2(name);
        w.u2(desc);
        w.u2(index);
      }
    }
  }
  w.u2(0);  // class attributes
  return w.take();
}

Program parse_class(std::span<const uint8_t> bytes) {
  Reader r(bytes);
  if (r.u4() != kMagic) {
    throw Error(ErrorKind::kBadMagic, "not a class file (magic is not 0xCAFEBABE)", "byte 0");
  }
  r.u2();  // minor
  r.u2();  // major
  PoolView pool = read_pool(r);

  Program program;
  r.u2();  // access flags
  const auto* this_ref = std::get_if<ClassRef>(&pool.at(r.u2(), "this_class"));
  if (this_ref == nullptr) throw Error(ErrorKind::kParse, "this_class is not a Class entry");
  program.name = pool.utf8(this_ref->name_index, "class name");
  r.u2();  // super
  uint16_t interfaces = r.u2();
  for (uint16_t i = 0; i < interfaces; ++i) r.u2();
  uint16_t fields = r.u2();
  for (uint16_t i = 0; i < fields; ++i) {
    r.u2();
    r.u2();
    r.u2();
    uint16_t attrs = r.u2();
    for (uint16_t a = 0; a < attrs; ++a) {
      r.u2();
      skip_attribute_body(r);
    }
  }

  uint16_t method_count = r.u2();
  for (uint16_t i = 0; i < method_count; ++i) {
    Method m;
    uint16_t access = r.u2();
    m.name = pool.utf8(r.u2(), "method name");
    std::string desc = pool.utf8(r.u2(), "method descriptor");
    uint16_t attrs = r.u2();
    bool has_code = false;
    for (uint16_t a = 0; a < attrs; ++a) {
      const std::string& name = pool.utf8(r.u2(), "attribute name");
      uint32_t len = r.u4();
      auto body = r.take(len);
      if (name == "Code") {
        read_code_attribute(body, pool, m);
        has_code = true;
      }
    }
    if ((access & kAccStatic) == 0) {
      throw Error(ErrorKind::kUnsupportedFeature, "instance methods are not supported",
                  m.name);
    }
    parse_descriptor(desc, m);
    if (!has_code) {
      throw Error(ErrorKind::kUnsupportedFeature, "method has no Code attribute", m.name);
    }
    if (program.find_method(m.name)) {
      throw Error(ErrorKind::kUnsupportedFeature, "overloaded method '" + m.name + "'",
                  m.name);
    }
    program.methods.push_back(std::move(m));
  }
  uint16_t class_attrs = r.u2();
  for (uint16_t a = 0; a < class_attrs; ++a) {
    r.u2();
    skip_attribute_body(r);
  }
  if (!r.at_end()) {
    throw Error(ErrorKind::kParse, "trailing bytes after class file",
                "byte " + std::to_string(r.position()));
  }
  for (const Method& m : program.methods) require_valid(m);
  program.constant_pool = std::move(pool.entries);
  return program;
}

}  // namespace bytedbg
