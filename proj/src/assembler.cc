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

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "bytedbg/error.h"
#include "bytedbg/ingest.h"

namespace bytedbg {
namespace {

struct Token {
  std::string_view text;
  size_t column = 0;  // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= line.size()) break;
    size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_' || s[0] == '$' ||
        s[0] == '<')) {
    return false;
  }
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$' ||
           c == '<' || c == '>';
  });
}

bool is_number(std::string_view s) {
  if (s.empty()) return false;
  size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  return i < s.size() && std::all_of(s.begin() + i, s.end(), [](char c) {
           return std::isdigit(static_cast<unsigned char>(c));
         });
}

struct PendingInsn {
  Opcode opcode;
  Operand operand;
  std::string label_ref;  // unresolved branch label
  std::optional<uint32_t> declared_offset;
  size_t line = 0;
  size_t column = 0;
  size_t operand_column = 0;
};

struct PendingMethod {
  Method method;
  std::vector<PendingInsn> insns;
  std::map<std::string, size_t> labels;  // label -> instruction index
  std::vector<std::pair<std::string, size_t>> pending_labels;
  bool has_max_stack = false;
  bool has_max_locals = false;
  size_t line = 0;
};

class Assembler {
 public:
  explicit Assembler(std::string_view text) : text_(text) {}

  Program run() {
    size_t line_no = 0;
    size_t pos = 0;
    while (pos <= text_.size()) {
      size_t nl = text_.find('\n', pos);
      if (nl == std::string_view::npos) nl = text_.size();
      std::string_view line = text_.substr(pos, nl - pos);
      ++line_no;
      if (size_t semi = line.find(';'); semi != std::string_view::npos) {
        line = line.substr(0, semi);
      }
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      parse_line(line, line_no);
      pos = nl + 1;
    }
    finish_method();
    if (program_.methods.empty()) {
      throw Error(ErrorKind::kParse, "no method", "line " + std::to_string(line_no) +
                                                      ", column 1");
    }
    return std::move(program_);
  }

 private:
  [[noreturn]] void fail(const std::string& message, size_t line, size_t column,
                         ErrorKind kind = ErrorKind::kParse) {
    throw Error(kind, message,
                "line " + std::to_string(line) + ", column " + std::to_string(column));
  }

  uint32_t parse_count(const Token& tok, size_t line) {
    if (!is_number(tok.text) || tok.text[0] == '-') {
      fail("expected a non-negative integer, got '" + std::string(tok.text) + "'",
           line, tok.column);
    }
    auto v = parse_int(tok.text);
    if (!v) fail("integer out of range", line, tok.column);
    return static_cast<uint32_t>(*v);
  }

  void parse_line(std::string_view line, size_t line_no) {
    std::vector<Token> toks = tokenize(line);
    if (toks.empty()) return;
    if (toks[0].text.front() == '.') {
      parse_directive(toks, line, line_no);
      return;
    }
    if (!current_) fail("instruction outside of a .method block", line_no, toks[0].column);

    size_t i = 0;
    std::optional<uint32_t> declared;
    // Leading "<offset>:" and "<label>:" prefixes.
    while (i < toks.size() && toks[i].text.size() > 1 && toks[i].text.back() == ':') {
      std::string_view head = toks[i].text.substr(0, toks[i].text.size() - 1);
      if (is_number(head) && head[0] != '-') {
        declared = parse_count(Token{head, toks[i].column}, line_no);
      } else if (is_identifier(head)) {
        std::string name(head);
        if (current_->labels.count(name) ||
            std::any_of(current_->pending_labels.begin(), current_->pending_labels.end(),
                        [&](const auto& p) { return p.first == name; })) {
          fail("duplicate label '" + name + "'", line_no, toks[i].column,
               ErrorKind::kLabel);
        }
        current_->pending_labels.emplace_back(name, line_no);
      } else {
        fail("malformed label '" + std::string(head) + "'", line_no, toks[i].column);
      }
      ++i;
    }
    if (i == toks.size()) {
      if (declared) fail("offset prefix without an instruction", line_no, toks[0].column);
      return;
    }

    const Token& mn = toks[i];
    auto opcode = opcode_from_mnemonic(mn.text);
    if (!opcode) fail("unknown mnemonic '" + std::string(mn.text) + "'", line_no, mn.column);
    PendingInsn insn{*opcode, std::monostate{}, {}, declared, line_no, mn.column, 0};
    const OpcodeInfo& info = opcode_info(*opcode);
    ++i;
    if (info.operand == OperandKind::kNone) {
      if (i < toks.size()) {
        fail(std::string(info.mnemonic) + " takes no operand", line_no, toks[i].column);
      }
    } else {
      if (i >= toks.size()) {
        fail(std::string(info.mnemonic) + " requires an operand", line_no,
             mn.column + mn.text.size());
      }
      const Token& op = toks[i];
      insn.operand_column = op.column;
      parse_operand(insn, info, op, line_no);
      if (i + 1 < toks.size()) {
        fail("unexpected token '" + std::string(toks[i + 1].text) + "'", line_no,
             toks[i + 1].column);
      }
    }
    for (auto& [name, ln] : current_->pending_labels) {
      current_->labels[name] = current_->insns.size();
    }
    current_->pending_labels.clear();
    current_->insns.push_back(std::move(insn));
  }

  void parse_operand(PendingInsn& insn, const OpcodeInfo& info, const Token& op,
                     size_t line_no) {
    switch (info.operand) {
      case OperandKind::kNone:
        break;
      case OperandKind::kLocalIndex:
      case OperandKind::kIntImmediate: {
        auto v = is_number(op.text) ? parse_int(op.text) : std::nullopt;
        if (!v) fail("expected an integer operand", line_no, op.column);
        insn.operand = *v;
        break;
      }
      case OperandKind::kFloatImmediate: {
        auto v = parse_float(op.text);
        if (!v) fail("expected a float operand", line_no, op.column);
        insn.operand = *v;
        break;
      }
      case OperandKind::kBranchTarget:
        if (is_number(op.text)) {
          auto v = parse_int(op.text);
          if (!v) fail("branch offset out of range", line_no, op.column);
          insn.operand = *v;
        } else if (is_identifier(op.text)) {
          insn.label_ref = std::string(op.text);
        } else {
          fail("expected a branch target", line_no, op.column);
        }
        break;
    }
  }

  void parse_directive(const std::vector<Token>& toks, std::string_view line,
                       size_t line_no) {
    std::string_view d = toks[0].text;
    auto need = [&](size_t n) {
      if (toks.size() < n) {
        fail(std::string(d) + " expects an argument", line_no, toks.back().column);
      }
    };
    if (d == ".class") {
      need(2);
      if (current_ || !program_.methods.empty()) {
        fail(".class must precede all methods", line_no, toks[0].column);
      }
      program_.name = std::string(toks[1].text);
      return;
    }
    if (d == ".method") {
      finish_method();
      need(2);
      current_.emplace();
      current_->line = line_no;
      parse_signature(toks, line, line_no);
      return;
    }
    if (!current_) fail(std::string(d) + " outside of a .method block", line_no, toks[0].column);
    if (d == ".maxstack") {
      need(2);
      current_->method.max_stack = parse_count(toks[1], line_no);
      current_->has_max_stack = true;
    } else if (d == ".maxlocals") {
      need(2);
      current_->method.max_locals = parse_count(toks[1], line_no);
      current_->has_max_locals = true;
    } else if (d == ".names") {
      for (size_t i = 1; i < toks.size(); ++i) {
        std::string_view t = toks[i].text;
        size_t eq = t.find('=');
        if (eq == std::string_view::npos) {
          fail("expected <index>=<identifier>", line_no, toks[i].column);
        }
        uint32_t idx = parse_count(Token{t.substr(0, eq), toks[i].column}, line_no);
        std::string_view name = t.substr(eq + 1);
        if (!is_identifier(name)) {
          fail("invalid identifier '" + std::string(name) + "'", line_no,
               toks[i].column + eq + 1);
        }
        current_->method.local_names[idx] = std::string(name);
      }
    } else {
      fail("unknown directive '" + std::string(d) + "'", line_no, toks[0].column);
    }
  }

  void parse_signature(const std::vector<Token>& toks, std::string_view line,
                       size_t line_no) {
    Method& m = current_->method;
    m.name = std::string(toks[1].text);
    if (!is_identifier(m.name)) fail("invalid method name", line_no, toks[1].column);
    // Re-join the remainder so both "(FF) F" and "(FF)F" parse.
    size_t rest_col = toks.size() > 2 ? toks[2].column : line.size() + 1;
    std::string rest;
    for (size_t i = 2; i < toks.size(); ++i) rest += toks[i].text;
    if (rest.empty() || rest.front() != '(') {
      fail("expected (<kinds>) <ret>", line_no, rest_col);
    }
    size_t close = rest.find(')');
    if (close == std::string::npos) fail("unterminated parameter list", line_no, rest_col);
    for (size_t i = 1; i < close; ++i) {
      if (rest[i] == 'I') {
        m.params.push_back(Kind::kInt);
      } else if (rest[i] == 'F') {
        m.params.push_back(Kind::kFloat);
      } else {
        fail(std::string("unsupported parameter kind '") + rest[i] + "'", line_no, rest_col + i);
      }
    }
    std::string ret = rest.substr(close + 1);
    if (ret == "I") {
      m.return_kind = ReturnKind::kInt;
    } else if (ret == "F") {
      m.return_kind = ReturnKind::kFloat;
    } else if (ret == "V") {
      m.return_kind = ReturnKind::kVoid;
    } else {
      fail("expected return kind I, F or V", line_no, rest_col + close + 1);
    }
  }

  void finish_method() {
    if (!current_) return;
    PendingMethod& pm = *current_;
    if (!pm.pending_labels.empty()) {
      fail("label '" + pm.pending_labels.front().first + "' does not precede an instruction",
           pm.pending_labels.front().second, 1, ErrorKind::kLabel);
    }
    Method& m = pm.method;
    uint32_t offset = 0;
    for (const PendingInsn& p : pm.insns) {
      if (p.declared_offset && *p.declared_offset != offset) {
        fail("declared offset " + std::to_string(*p.declared_offset) +
                 " does not match computed offset " + std::to_string(offset),
             p.line, 1);
      }
      m.code.push_back(Instruction{offset, p.opcode, p.operand});
      offset += opcode_info(p.opcode).width;
    }
    for (size_t i = 0; i < pm.insns.size(); ++i) {
      const PendingInsn& p = pm.insns[i];
      if (p.label_ref.empty()) continue;
      auto it = pm.labels.find(p.label_ref);
      if (it == pm.labels.end()) {
        fail("undefined label '" + p.label_ref + "'", p.line, p.operand_column,
             ErrorKind::kLabel);
      }
      m.code[i].operand = static_cast<int32_t>(m.code[it->second].offset);
    }
    if (!pm.has_max_locals) {
      uint32_t locals = static_cast<uint32_t>(m.params.size());
      for (const auto& insn : m.code) {
        if (auto slot = local_slot(insn)) locals = std::max(locals, *slot + 1);
      }
      m.max_locals = locals;
    }
    if (!pm.has_max_stack) {
      // Generous bound first so validation can compute the real depths.
      m.max_stack = 0xFFFF;
      if (validate(m).empty()) {
        uint32_t deepest = 0;
        auto depths = entry_depths(m);
        for (size_t i = 0; i < m.code.size(); ++i) {
          if (!depths[i]) continue;
          const OpcodeInfo& info = m.code[i].info();
          deepest = std::max({deepest, *depths[i], *depths[i] - info.pops + info.pushes});
        }
        m.max_stack = deepest;
      }
    }
    if (program_.find_method(m.name)) {
      fail("duplicate method '" + m.name + "'", pm.line, 1);
    }
    require_valid(m);
    program_.methods.push_back(std::move(m));
    current_.reset();
  }

  std::string_view text_;
  Program program_;
  std::optional<PendingMethod> current_;
};

std::string kinds_signature(const Method& m) {
  std::string out = "(";
  for (Kind k : m.params) out += k == Kind::kInt ? 'I' : 'F';
  out += ')';
  return out;
}

}  // namespace

const Method* Program::find_method(std::string_view method_name) const {
  for (const auto& m : methods) {
    if (m.name == method_name) return &m;
  }
  return nullptr;
}

const Method& Program::method(std::string_view method_name) const {
  if (method_name.empty()) {
    if (methods.empty()) throw Error(ErrorKind::kUnknownMethod, "program has no methods");
    return methods.front();
  }
  if (const Method* m = find_method(method_name)) return *m;
  throw Error(ErrorKind::kUnknownMethod,
              "no method named '" + std::string(method_name) + "'", name);
}

std::string method_descriptor(const Method& method) {
  return kinds_signature(method) + std::string(return_kind_name(method.return_kind));
}

Program assemble(std::string_view text) { return Assembler(text).run(); }

std::string disassemble(const Method& method) {
  std::ostringstream out;
  out << ".method " << method.name << ' ' << kinds_signature(method) << ' '
      << return_kind_name(method.return_kind) << '\n';
  out << ".maxstack " << method.max_stack << '\n';
  out << ".maxlocals " << method.max_locals << '\n';
  if (!method.local_names.empty()) {
    out << ".names";
    for (const auto& [idx, name] : method.local_names) out << ' ' << idx << '=' << name;
    out << '\n';
  }
  for (const Instruction& insn : method.code) {
    out << insn.offset << ": " << insn.info().mnemonic;
    if (const int32_t* v = std::get_if<int32_t>(&insn.operand)) {
      out << ' ' << *v;
    } else if (const float* f = std::get_if<float>(&insn.operand)) {
      out << ' ' << format_float(*f);
    }
    out << '\n';
  }
  return out.str();
}

std::string disassemble(const Program& program) {
  std::string out = ".class " + program.name + "\n";
  for (const Method& m : program.methods) {
    out += '\n';
    out += disassemble(m);
  }
  return out;
}

}  // namespace bytedbg
