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

// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failing criteria.

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "bytedbg/depflow.h"
#include "bytedbg/interpreter.h"
#include "bytedbg/localize.h"
#include "bytedbg/report.h"
#include "generators.h"
#include "json.hpp"
#include "test_util.h"

namespace bytedbg::acceptance {
namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;
namespace fs = std::filesystem;
namespace t = bytedbg::testing;

struct Result {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

// Runs the CLI binary; returns exit status and stdout.
std::pair<int, std::string> run_tool(const std::vector<std::string>& args) {
  std::string cmd = shell_quote(BYTEDBG_CLI_PATH);
  for (const auto& a : args) cmd += " " + shell_quote(a);
  cmd += " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf{};
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string maxf_path() { return (t::corpus_dir() / "maxf.bcasm").string(); }

Result criterion1() {
  auto start = Clock::now();
  auto [code, out] = run_tool({"trace", maxf_path(), "--input", "2.0", "--input", "3.0"});
  double elapsed = seconds_since(start);
  if (code != 0) return {false, "exit code " + std::to_string(code)};
  json j = json::parse(out);
  auto value = value_from_json(j["result"]["value"], Kind::kFloat);
  Method m = t::maxf_method();
  bool bits = value && value->bits() == Value::of_float(3.0f).bits();
  bool site = j["result"]["return_site"] == m.return_sites().at(1);
  std::ostringstream d;
  d << "value " << j["result"]["value"].dump() << ", return_site " << j["result"]["return_site"]
    << ", " << elapsed << " s (limit 1 s)";
  return {bits && site && elapsed < 1.0, d.str()};
}

Result criterion2() {
  auto [code, out] = run_tool({"deps", maxf_path()});
  if (code != 0) return {false, "exit code " + std::to_string(code)};
  json closure = json::parse(out)["closure"];
  std::set<std::vector<std::string>> got;
  for (const auto& p : closure) got.insert(p.get<std::vector<std::string>>());
  std::set<std::vector<std::string>> want{
      {"n1", "n2", "compare"}, {"O1", "n1", "assign"}, {"O2", "n2", "assign"}};
  return {got == want, "closure " + closure.dump()};
}

Result criterion3() {
  fs::path program = t::corpus_dir() / "faulty" / "maxf-init-buggy.bcasm";
  Program p = assemble(t::slurp(program));
  Specification s = t::corpus_spec(program);
  Verdict v = check_values(p, s);
  bool fails = !v.values.empty() && v.values[0].status == SpecStatus::kFail &&
               v.values[0].spec.expected == Value::of_float(4.0f);
  const Method& m = p.method(s.method);
  uint32_t mutated = m.code.front().offset;
  Diagnosis d = localize_value(p, s, build_probe_set(m, s));
  const Candidate* c = d.find(mutated);
  bool probe = c && std::find(c->fixing_probes.begin(), c->fixing_probes.end(),
                              Value::of_float(4.0f)) != c->fixing_probes.end();
  std::ostringstream out;
  out << "check " << (fails ? "fails" : "does not fail") << " (got "
      << (v.values.empty() || !v.values[0].got ? "-" : to_string(*v.values[0].got))
      << "), offset " << mutated << (c ? " is" : " is not") << " a candidate"
      << (probe ? " with fixing probe 4.0" : "");
  return {fails && probe, out.str()};
}

Result criterion4() {
  t::Rng rng(20260401);
  auto start = Clock::now();
  int matches = 0;
  for (int g = 0; g < 200; ++g) {
    int n = t::pick(rng, 1, 8);
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    DepSet edges;
    double density = std::uniform_real_distribution<double>(0.05, 0.5)(rng);
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        if (a != b && t::coin(rng, density)) {
          adj[a][b] = true;
          edges.insert(DepPair::assign(VarId::local(a), VarId::local(b)));
        }
      }
    }
    for (int k = 0; k < n; ++k) {
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          if (adj[i][k] && adj[k][j]) adj[i][j] = true;
        }
      }
    }
    DepSet want;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i != j && adj[i][j]) want.insert(DepPair::assign(VarId::local(i), VarId::local(j)));
      }
    }
    if (transitive_closure(edges) == want) ++matches;
  }
  double elapsed = seconds_since(start);
  std::ostringstream d;
  d << matches << "/200 graphs equal Warshall reachability, " << elapsed << " s (limit 5 s)";
  return {matches == 200 && elapsed < 5.0, d.str()};
}

Result criterion5() {
  t::Rng rng(20260402);
  auto start = Clock::now();
  int matches = 0, ints = 0, floats = 0, traps = 0, specials = 0, max_len = 0;
  for (int i = 0; i < 500; ++i) {
    auto c = t::random_straight_line(rng, 19);
    max_len = std::max(max_len, static_cast<int>(c.method.code.size()));
    ExecResult r = run(c.method, c.inputs);
    t::EvalResult want = t::evaluate(*c.expr, c.inputs);
    bool ok;
    if (want.trapped) {
      ok = r.outcome == Outcome::kTrapped;
      ++traps;
    } else {
      ok = r.outcome == Outcome::kReturned && r.value == want.value;
      (want.value.is_int() ? ints : floats)++;
      if (want.value.is_float() && !std::isfinite(want.value.as_float())) ++specials;
    }
    if (ok) ++matches;
  }
  double elapsed = seconds_since(start);
  std::ostringstream d;
  d << matches << "/500 bit-exact (" << ints << " int, " << floats << " float, " << specials
    << " non-finite, " << traps << " traps; max " << max_len << " instructions), " << elapsed
    << " s (limit 10 s)";
  return {matches == 500 && max_len <= 20 && ints > 0 && floats > 0 && specials > 0 &&
              elapsed < 10.0,
          d.str()};
}

Result criterion6() {
  t::Rng rng(20260403);
  t::BranchingGenerator gen(rng);
  auto start = Clock::now();
  int detected = 0, contained = 0, methods = 0;
  std::string first_miss;
  for (int i = 0; i < 100; ++i) {
    auto c = gen.generate("p" + std::to_string(i));
    Method m = assemble(c.text).methods.front();
    ++methods;
    DepSet closure = transitive_closure(extract_deps(m));
    auto returns = m.return_sites();
    auto random_input = [&](Kind k) {
      return k == Kind::kInt ? Value::of_int(t::pick(rng, -6, 6))
                             : Value::of_float(static_cast<float>(t::pick(rng, -12, 12)) / 2.0f);
    };
    for (int trial = 0; trial < 8; ++trial) {
      std::vector<Value> base;
      for (Kind k : c.params) base.push_back(random_input(k));
      ExecResult r0 = run(m, base);
      if (r0.outcome != Outcome::kReturned) continue;
      std::vector<uint32_t> path0;
      for (const auto& e : r0.trace) path0.push_back(e.offset);
      uint32_t k = static_cast<uint32_t>(
          std::find(returns.begin(), returns.end(), *r0.return_site) - returns.begin() + 1);
      for (size_t p = 0; p < c.params.size(); ++p) {
        for (int alt = 0; alt < 4; ++alt) {
          std::vector<Value> inputs = base;
          inputs[p] = random_input(c.params[p]);
          if (inputs[p] == base[p]) continue;
          ExecResult r1 = run(m, inputs);
          if (r1.outcome != Outcome::kReturned) continue;
          std::vector<uint32_t> path1;
          for (const auto& e : r1.trace) path1.push_back(e.offset);
          if (path1 != path0 || r1.value == r0.value) continue;
          ++detected;
          auto pair = DepPair::assign(VarId::output(k), VarId::local(static_cast<uint32_t>(p)));
          if (closure.count(pair)) {
            ++contained;
          } else if (first_miss.empty()) {
            first_miss = c.text;
          }
          break;
        }
      }
    }
  }
  double elapsed = seconds_since(start);
  std::ostringstream d;
  d << contained << "/" << detected << " perturbation dependences contained over " << methods
    << " methods, " << elapsed << " s (limit 30 s)";
  if (!first_miss.empty()) d << "; first miss:\n" << first_miss;
  return {detected > 0 && contained == detected && elapsed < 30.0, d.str()};
}

// Same-width replacement encodings for a constant.
std::optional<std::pair<Opcode, Operand>> encode_constant(Opcode original, Value v) {
  switch (original) {
    case Opcode::kIconstM1: case Opcode::kIconst0: case Opcode::kIconst1: case Opcode::kIconst2:
    case Opcode::kIconst3: case Opcode::kIconst4: case Opcode::kIconst5:
      if (v.as_int() < -1 || v.as_int() > 5) return std::nullopt;
      return std::pair{static_cast<Opcode>(static_cast<int>(Opcode::kIconst0) + v.as_int()),
                       Operand{}};
    case Opcode::kBipush:
      if (v.as_int() < -128 || v.as_int() > 127) return std::nullopt;
      return std::pair{Opcode::kBipush, Operand{v.as_int()}};
    case Opcode::kLdcInt: return std::pair{Opcode::kLdcInt, Operand{v.as_int()}};
    case Opcode::kFconst0: case Opcode::kFconst1: case Opcode::kFconst2: {
      float f = v.as_float();
      if (v.bits() == Value::of_float(0.0f).bits()) return std::pair{Opcode::kFconst0, Operand{}};
      if (f == 1.0f) return std::pair{Opcode::kFconst1, Operand{}};
      if (f == 2.0f) return std::pair{Opcode::kFconst2, Operand{}};
      return std::nullopt;
    }
    case Opcode::kLdcFloat: return std::pair{Opcode::kLdcFloat, Operand{v.as_float()}};
    default: return std::nullopt;
  }
}

std::vector<Value> constant_mutations(Value c) {
  std::vector<Value> out;
  if (c.is_int()) {
    int32_t x = c.as_int();
    for (int32_t v : {x + 1, x - 1, 0, 1, -1, 2, 5, x * 2, -x}) out.push_back(Value::of_int(v));
  } else {
    float x = c.as_float();
    for (float v : {x + 1.0f, x - 1.0f, 0.0f, 1.0f, 2.0f, 0.5f, x * 2.0f, -x}) {
      out.push_back(Value::of_float(v));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  out.erase(std::remove(out.begin(), out.end(), c), out.end());
  return out;
}

std::optional<Opcode> index_variant(Opcode op, uint32_t slot) {
  auto shifted = [&](Opcode base) -> std::optional<Opcode> {
    if (slot > 3) return std::nullopt;
    return static_cast<Opcode>(static_cast<int>(base) + static_cast<int>(slot));
  };
  switch (op) {
    case Opcode::kIload0: case Opcode::kIload1: case Opcode::kIload2: case Opcode::kIload3:
      return shifted(Opcode::kIload0);
    case Opcode::kFload0: case Opcode::kFload1: case Opcode::kFload2: case Opcode::kFload3:
      return shifted(Opcode::kFload0);
    case Opcode::kIstore0: case Opcode::kIstore1: case Opcode::kIstore2: case Opcode::kIstore3:
      return shifted(Opcode::kIstore0);
    case Opcode::kFstore0: case Opcode::kFstore1: case Opcode::kFstore2: case Opcode::kFstore3:
      return shifted(Opcode::kFstore0);
    case Opcode::kIload: case Opcode::kFload: case Opcode::kIstore: case Opcode::kFstore:
      return op;
    default: return std::nullopt;
  }
}

Result criterion7() {
  auto start = Clock::now();
  int mutants = 0, const_eligible = 0, const_hits = 0, index_eligible = 0, index_hits = 0;
  std::string misses;
  for (const auto& path : t::corpus_programs()) {
    Program original = assemble(t::slurp(path));
    Specification spec = t::corpus_spec(path);
    const Method& m = original.method(spec.method);
    size_t method_index = static_cast<size_t>(&m - original.methods.data());

    auto evaluate = [&](Method mutant, uint32_t offset, bool constant, Value correct) {
      if (!validate(mutant).empty()) return;
      ++mutants;
      Program p = original;
      p.methods[method_index] = mutant;
      DiagnoseResult r = diagnose(p, spec);
      bool eligible;
      if (constant) {
        auto probes = build_probe_set(mutant, spec);
        eligible = !r.verdict.values_pass() &&
                   std::find(probes.begin(), probes.end(), correct) != probes.end();
      } else {
        eligible = r.verdict.deps && !r.verdict.deps->consistent();
      }
      if (!eligible) return;
      (constant ? const_eligible : index_eligible)++;
      if (r.diagnosis && r.diagnosis->find(offset)) {
        (constant ? const_hits : index_hits)++;
      } else {
        misses += "\n  " + path.filename().string() + " offset " + std::to_string(offset) +
                  (constant ? " (constant)" : " (index)");
      }
    };

    for (size_t i = 0; i < m.code.size(); ++i) {
      const Instruction& insn = m.code[i];
      if (auto c = constant_value(insn)) {
        for (Value v : constant_mutations(*c)) {
          auto enc = encode_constant(insn.opcode, v);
          if (!enc) continue;
          Method mutant = m;
          mutant.code[i].opcode = enc->first;
          mutant.code[i].operand = enc->second;
          evaluate(mutant, insn.offset, true, *c);
        }
      }
      if (auto slot = local_slot(insn)) {
        for (uint32_t j = 0; j < m.max_locals; ++j) {
          if (j == *slot) continue;
          auto op = index_variant(insn.opcode, j);
          if (!op) continue;
          Method mutant = m;
          mutant.code[i].opcode = *op;
          if (opcode_info(*op).operand == OperandKind::kLocalIndex) {
            mutant.code[i].operand = static_cast<int32_t>(j);
          }
          evaluate(mutant, insn.offset, false, {});
        }
      }
    }
  }
  double elapsed = seconds_since(start);
  std::ostringstream d;
  d << mutants << " mutants; constant " << const_hits << "/" << const_eligible << ", index "
    << index_hits << "/" << index_eligible << " eligible localized, " << elapsed
    << " s (limit 60 s)" << misses;
  return {const_eligible > 0 && index_eligible > 0 && const_hits == const_eligible &&
              index_hits == index_eligible && elapsed < 60.0,
          d.str()};
}

Result criterion8() {
  int programs = 0, ok = 0;
  std::string failures;
  for (const auto& e : fs::directory_iterator(t::corpus_dir())) {
    auto ext = e.path().extension();
    if (ext != ".bcasm" && ext != ".class") continue;
    ++programs;
    Program p = ext == ".bcasm" ? assemble(t::slurp(e.path()))
                                : parse_class(t::slurp_bytes(e.path()));
    std::string canonical = disassemble(p);
    bool text_ok = assemble(canonical) == p && disassemble(assemble(canonical)) == canonical;
    bool class_ok = parse_class(write_class(p)) == p;
    if (text_ok && class_ok) {
      ++ok;
    } else {
      failures += " " + e.path().filename().string();
    }
  }
  Program javac = parse_class(t::slurp_bytes(t::fixture_dir() / "Max.class"));
  std::vector<std::string> shape;
  for (const auto& insn : javac.methods.at(0).code) {
    shape.emplace_back(insn.info().mnemonic);
    if (auto target = branch_target(insn)) shape.back() += " " + std::to_string(*target);
  }
  std::vector<std::string> want{"fload_0", "fload_1", "fcmpl",   "iflt 8",
                                "fload_0", "freturn", "fload_1", "freturn"};
  bool shape_ok = shape == want;
  std::ostringstream d;
  d << ok << "/" << programs << " corpus programs round-trip"
    << (failures.empty() ? "" : " (failed:" + failures + ")") << "; javac-layout fixture "
    << (shape_ok ? "matches" : "does not match") << " fload/fcmpl/iflt/freturn";
  return {ok == programs && programs > 0 && shape_ok, d.str()};
}

}  // namespace
}  // namespace bytedbg::acceptance

int main() {
  using namespace bytedbg::acceptance;
  const std::vector<std::pair<std::string, std::function<Result()>>> criteria{
      {"trace maxf(2.0, 3.0) returns 3.0 at the second return", criterion1},
      {"deps closure of maxf is exactly the three named pairs", criterion2},
      {"init-buggy variant fails and offset 0 is fixed by 4.0", criterion3},
      {"closure equals Warshall on 200 random digraphs", criterion4},
      {"interpreter matches expression evaluator on 500 programs", criterion5},
      {"perturbation dependences contained in closure, 100 methods", criterion6},
      {"mutation localization over the corpus", criterion7},
      {"text and class round-trips; javac-layout fixture shape", criterion8},
  };
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Result o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << (i + 1) << ": "
              << criteria[i].first << " -- " << o.detail << "\n";
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
  return failed;
}
