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

#include "bytedbg/localize.h"

#include <algorithm>
#include <set>
#include <sstream>

#include "bytedbg/error.h"

namespace bytedbg {
namespace {

SpecStatus status_of(const ExecResult& r, const ValueSpec& spec) {
  switch (r.outcome) {
    case Outcome::kTrapped: return SpecStatus::kTrap;
    case Outcome::kStepLimit: return SpecStatus::kStepLimit;
    case Outcome::kReturned: break;
  }
  return value_matches(spec, r.value) ? SpecStatus::kPass : SpecStatus::kFail;
}

SpecResult run_spec(const Method& method, const ValueSpec& spec, const RunOptions& options) {
  ExecResult r = run(method, spec.inputs, options);
  SpecResult out;
  out.spec = spec;
  out.status = status_of(r, spec);
  out.got = r.value;
  out.reason = r.trap_reason;
  return out;
}

// Widens int literals when compared against float output, as the spec file
// cannot tell int and float apart for whole numbers.
bool same_values(const std::vector<Value>& expected, const std::vector<Value>& got) {
  if (expected.size() != got.size()) return false;
  for (size_t i = 0; i < got.size(); ++i) {
    Value e = expected[i];
    if (e.is_int() && got[i].is_float()) e = Value::of_float(static_cast<float>(e.as_int()));
    if (e != got[i]) return false;
  }
  return true;
}

std::vector<Value> block_inputs(const Specification& coerced) {
  if (coerced.block_spec->inputs) return *coerced.block_spec->inputs;
  if (!coerced.value_specs.empty()) return coerced.value_specs.front().inputs;
  return {};
}

void check_blocks(const Method& method, const Specification& coerced, uint64_t step_limit,
                  Verdict& verdict) {
  const BlockSpec& block = *coerced.block_spec;
  if (block.per_line.empty() && block.per_block.empty()) return;
  std::vector<Value> inputs = block_inputs(coerced);
  if (inputs.size() != method.params.size()) {
    throw Error(ErrorKind::kSchema, "block_spec needs inputs for " + method.name,
                "$.block_spec.inputs");
  }
  RunOptions options;
  options.step_limit = step_limit;
  ExecResult r = run(method, inputs, options);
  ValueTable table = value_table(r.trace);
  verdict.lines = check_lines(table, block.per_line);

  if (block.per_block.empty()) return;
  Cfg cfg = build_cfg(method);
  for (const auto& [id, expected] : block.per_block) {
    if (id >= cfg.blocks.size()) {
      throw Error(ErrorKind::kIndexOutOfRange,
                  "block " + std::to_string(id) + " does not exist",
                  "$.block_spec.per_block." + std::to_string(id));
    }
    const BasicBlock& b = cfg.blocks[id];
    LineCheck check;
    check.expected = expected;
    bool executed = false;
    for (const TraceEntry& e : r.trace) {
      if (e.offset < b.start_offset || e.offset > b.end_offset) continue;
      executed = true;
      check.got.insert(check.got.end(), e.pushed.begin(), e.pushed.end());
      if (e.local_write) check.got.push_back(e.local_write->second);
    }
    if (!executed) {
      check.status = LineStatus::kNotExecuted;
    } else {
      check.status = same_values(expected, check.got) ? LineStatus::kOk : LineStatus::kMismatch;
    }
    verdict.blocks.emplace(id, std::move(check));
  }
}

void sort_candidates(std::vector<Candidate>& cs) {
  std::sort(cs.begin(), cs.end(), [](const Candidate& a, const Candidate& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.offset < b.offset;
  });
}

std::string render_pair(const DepPair& p, const NameBinding& b) {
  return "(" + b.name_of(p.left) + "," + b.name_of(p.right) +
         (p.kind == DepKind::kCompare ? ",compare)" : ")");
}

std::string join_values(const std::vector<Value>& values) {
  std::string out;
  for (size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += to_string(values[i]);
  }
  return out;
}

}  // namespace

std::string_view spec_status_name(SpecStatus status) {
  switch (status) {
    case SpecStatus::kPass: return "pass";
    case SpecStatus::kFail: return "fail";
    case SpecStatus::kTrap: return "trap";
    case SpecStatus::kStepLimit: return "step_limit";
  }
  return "?";
}

std::string_view diagnosis_mode_name(DiagnosisMode mode) {
  switch (mode) {
    case DiagnosisMode::kValue: return "value";
    case DiagnosisMode::kDependency: return "dependency";
    case DiagnosisMode::kLine: return "line";
    case DiagnosisMode::kMerged: return "merged";
  }
  return "?";
}

bool Verdict::values_pass() const {
  return std::all_of(values.begin(), values.end(),
                     [](const SpecResult& r) { return r.status == SpecStatus::kPass; });
}

bool Verdict::lines_pass() const {
  auto ok = [](const auto& kv) { return kv.second.status == LineStatus::kOk; };
  return std::all_of(lines.begin(), lines.end(), ok) &&
         std::all_of(blocks.begin(), blocks.end(), ok);
}

bool Verdict::consistent() const {
  return values_pass() && lines_pass() && (!deps || deps->consistent());
}

Verdict check_values(const Program& program, const Specification& spec,
                     const CheckOptions& options) {
  const Method& method = program.method(spec.method);
  bind_names(spec, method);
  Specification coerced = coerce_to(spec, method);
  Verdict verdict;
  verdict.method = method.name;
  RunOptions run_options;
  run_options.step_limit = options.step_limit;
  run_options.record_trace = false;
  for (const ValueSpec& v : coerced.value_specs) {
    verdict.values.push_back(run_spec(method, v, run_options));
  }
  if (coerced.block_spec) check_blocks(method, coerced, options.step_limit, verdict);
  return verdict;
}

DepVerdict check_deps(const Program& program, const Specification& spec,
                      const DepOptions& options) {
  const Method& method = program.method(spec.method);
  NameBinding binding = bind_names(spec, method);
  DepSet expected =
      spec.dep_spec ? resolve_dep_spec(*spec.dep_spec, binding) : DepSet{};
  return DepVerdict{dep_diff(extract_deps(method, options), expected)};
}

Verdict check(const Program& program, const Specification& spec,
              const CheckOptions& options) {
  Verdict verdict = check_values(program, spec, options);
  if (spec.dep_spec) verdict.deps = check_deps(program, spec, options.deps);
  return verdict;
}

const Candidate* Diagnosis::find(uint32_t offset) const {
  for (const Candidate& c : candidates) {
    if (c.offset == offset) return &c;
  }
  return nullptr;
}

std::vector<Value> build_probe_set(const Method& method, const Specification& spec,
                                   const std::vector<Value>& extra) {
  Specification coerced = coerce_to(spec, method);
  std::vector<Value> probes = extra;
  for (const ValueSpec& v : coerced.value_specs) {
    if (v.expected) probes.push_back(*v.expected);
    probes.insert(probes.end(), v.inputs.begin(), v.inputs.end());
  }
  if (coerced.block_spec && coerced.block_spec->inputs) {
    const auto& in = *coerced.block_spec->inputs;
    probes.insert(probes.end(), in.begin(), in.end());
  }
  for (const Instruction& insn : method.code) {
    if (auto c = constant_value(insn)) probes.push_back(*c);
  }
  for (int k = -1; k <= 1; ++k) {
    probes.push_back(Value::of_int(k));
    probes.push_back(Value::of_float(static_cast<float>(k)));
  }
  std::sort(probes.begin(), probes.end(), numeric_less);
  probes.erase(std::unique(probes.begin(), probes.end()), probes.end());
  return probes;
}

Diagnosis localize_value(const Program& program, const Specification& spec,
                         const std::vector<Value>& probes, uint64_t step_limit) {
  CheckOptions check_options;
  check_options.step_limit = step_limit;
  Verdict verdict = check_values(program, spec, check_options);
  const Method& method = program.method(spec.method);

  // Failing specs first so a non-fixing probe is rejected early.
  std::vector<size_t> order;
  size_t failing = 0;
  for (size_t i = 0; i < verdict.values.size(); ++i) {
    if (verdict.values[i].status != SpecStatus::kPass) {
      order.push_back(i);
      ++failing;
    }
  }
  if (failing == 0) {
    throw Error(ErrorKind::kNoFailingSpec, "no value spec fails for " + method.name,
                method.name);
  }
  for (size_t i = 0; i < verdict.values.size(); ++i) {
    if (verdict.values[i].status == SpecStatus::kPass) order.push_back(i);
  }

  RunOptions options;
  options.step_limit = step_limit;
  std::set<uint32_t> executed;
  for (size_t i = 0; i < failing; ++i) {
    ExecResult r = run(method, verdict.values[order[i]].spec.inputs, options);
    for (const TraceEntry& e : r.trace) executed.insert(e.offset);
  }

  Diagnosis diag;
  diag.method = method.name;
  diag.mode = DiagnosisMode::kValue;
  const size_t total = verdict.values.size();
  options.record_trace = false;
  for (uint32_t offset : executed) {
    const Instruction* insn = method.at(offset);
    auto kind = produced_kind(insn->opcode);
    if (!kind) continue;
    std::vector<Value> fixing;
    for (const Value& probe : probes) {
      if (probe.kind() != *kind) continue;
      options.override = ValueOverride{offset, probe};
      bool fixes = true;
      for (size_t i : order) {
        SpecResult r = run_spec(method, verdict.values[i].spec, options);
        if (r.status != SpecStatus::kPass) {
          fixes = false;
          break;
        }
      }
      if (fixes) fixing.push_back(probe);
    }
    if (fixing.empty()) continue;
    Candidate c;
    c.offset = offset;
    c.score = static_cast<double>(failing) / static_cast<double>(total);
    std::ostringstream ev;
    ev << "replacing the value produced by " << insn->info().mnemonic << " with "
       << to_string(fixing.front()) << " makes all " << total << " value specs pass ("
       << failing << " previously failing)";
    if (fixing.size() > 1) ev << "; other fixing probes: " << join_values(
        std::vector<Value>(fixing.begin() + 1, fixing.end()));
    c.evidence = ev.str();
    c.fixing_probes = std::move(fixing);
    diag.candidates.push_back(std::move(c));
  }
  if (diag.candidates.empty()) {
    // No probe repairs the failures: fall back to the executed instructions.
    for (uint32_t offset : executed) {
      Candidate c;
      c.offset = offset;
      c.score = 0.0;
      c.evidence = std::string(method.at(offset)->info().mnemonic) +
                   " executed in a failing run; no single probe value repairs it";
      diag.candidates.push_back(std::move(c));
    }
  }
  sort_candidates(diag.candidates);
  return diag;
}

Diagnosis localize_deps(const Program& program, const Specification& spec,
                        const DepOptions& options) {
  DepVerdict verdict = check_deps(program, spec, options);
  const Method& method = program.method(spec.method);
  if (verdict.consistent()) {
    throw Error(ErrorKind::kConsistentSpec,
                "dependencies of " + method.name + " match the specification", method.name);
  }
  NameBinding binding = bind_names(spec, method);
  std::vector<DepSite> sites = extract_dep_sites(method, options);

  std::map<VarId, std::set<VarId>> edges;
  for (const DepSite& s : sites) {
    if (s.pair.kind == DepKind::kAssign) edges[s.pair.left].insert(s.pair.right);
  }
  // reaches[x] includes x itself.
  std::map<VarId, std::set<VarId>> reaches;
  auto reach = [&](VarId from) -> const std::set<VarId>& {
    auto it = reaches.find(from);
    if (it != reaches.end()) return it->second;
    std::set<VarId> seen;
    std::vector<VarId> stack{from};
    while (!stack.empty()) {
      VarId v = stack.back();
      stack.pop_back();
      if (!seen.insert(v).second) continue;
      if (auto e = edges.find(v); e != edges.end()) {
        stack.insert(stack.end(), e->second.begin(), e->second.end());
      }
    }
    return reaches[from] = std::move(seen);
  };

  std::map<uint32_t, std::vector<std::string>> evidence;
  auto add_site = [](std::set<uint32_t>& dst, const DepSite& s) {
    dst.insert(s.emitter);
    dst.insert(s.origins.begin(), s.origins.end());
  };

  size_t mismatches = 0;
  for (const DepPair& extra : verdict.diff.extra) {
    ++mismatches;
    std::set<uint32_t> offsets;
    for (const DepSite& s : sites) {
      if (s.pair.kind != extra.kind) continue;
      if (extra.kind == DepKind::kCompare) {
        if (s.pair == extra) add_site(offsets, s);
      } else if (reach(extra.left).count(s.pair.left) &&
                 reach(s.pair.right).count(extra.right)) {
        add_site(offsets, s);
      }
    }
    for (uint32_t o : offsets) {
      evidence[o].push_back("produces extra " + render_pair(extra, binding));
    }
  }

  std::vector<uint32_t> returns = method.return_sites();
  for (const DepPair& missing : verdict.diff.missing) {
    ++mismatches;
    std::set<VarId> vars{missing.left, missing.right};
    std::set<uint32_t> offsets;
    for (const Instruction& insn : method.code) {
      if (auto slot = local_slot(insn); slot && vars.count(VarId::local(*slot))) {
        offsets.insert(insn.offset);
      }
    }
    for (size_t k = 0; k < returns.size(); ++k) {
      if (vars.count(VarId::output(static_cast<uint32_t>(k + 1)))) offsets.insert(returns[k]);
    }
    for (const DepSite& s : sites) {
      if (vars.count(s.pair.left) || vars.count(s.pair.right)) add_site(offsets, s);
    }
    for (uint32_t o : offsets) {
      evidence[o].push_back("touches a variable of missing " + render_pair(missing, binding));
    }
  }

  Diagnosis diag;
  diag.method = method.name;
  diag.mode = DiagnosisMode::kDependency;
  for (const auto& [offset, reasons] : evidence) {
    Candidate c;
    c.offset = offset;
    c.score = static_cast<double>(reasons.size()) / static_cast<double>(mismatches);
    for (size_t i = 0; i < reasons.size(); ++i) {
      if (i) c.evidence += "; ";
      c.evidence += reasons[i];
    }
    diag.candidates.push_back(std::move(c));
  }
  sort_candidates(diag.candidates);
  return diag;
}

Diagnosis localize_lines(const Program& program, const Specification& spec,
                         const Verdict& verdict) {
  const Method& method = program.method(spec.method);
  Diagnosis diag;
  diag.method = method.name;
  diag.mode = DiagnosisMode::kLine;
  std::map<uint32_t, std::vector<std::string>> evidence;
  size_t failures = 0;
  for (const auto& [offset, check] : verdict.lines) {
    if (check.status == LineStatus::kOk) continue;
    ++failures;
    evidence[offset].push_back(
        check.status == LineStatus::kNotExecuted
            ? "line expectation not executed"
            : "line produced [" + join_values(check.got) + "], expected [" +
                  join_values(check.expected) + "]");
  }
  if (!verdict.blocks.empty()) {
    Cfg cfg = build_cfg(method);
    for (const auto& [id, check] : verdict.blocks) {
      if (check.status == LineStatus::kOk) continue;
      ++failures;
      const BasicBlock& b = cfg.blocks[id];
      for (size_t i = b.first_index; i <= b.last_index; ++i) {
        evidence[method.code[i].offset].push_back("in block " + std::to_string(id) +
                                                  " whose exit values differ");
      }
    }
  }
  for (const auto& [offset, reasons] : evidence) {
    Candidate c;
    c.offset = offset;
    c.score = static_cast<double>(reasons.size()) / static_cast<double>(failures);
    for (size_t i = 0; i < reasons.size(); ++i) {
      if (i) c.evidence += "; ";
      c.evidence += reasons[i];
    }
    diag.candidates.push_back(std::move(c));
  }
  sort_candidates(diag.candidates);
  return diag;
}

Diagnosis merge_diagnoses(const Diagnosis& a, const Diagnosis& b) {
  if (a.method != b.method) {
    throw Error(ErrorKind::kMethodMismatch,
                "cannot merge diagnoses of " + a.method + " and " + b.method);
  }
  std::map<uint32_t, Candidate> merged;
  for (const Candidate& c : a.candidates) merged[c.offset] = c;
  for (const Candidate& c : b.candidates) {
    auto [it, inserted] = merged.emplace(c.offset, c);
    if (inserted) continue;
    Candidate& m = it->second;
    m.score = 1.0 - (1.0 - m.score) * (1.0 - c.score);
    m.evidence += "; " + c.evidence;
    m.fixing_probes.insert(m.fixing_probes.end(), c.fixing_probes.begin(),
                           c.fixing_probes.end());
  }
  Diagnosis out;
  out.method = a.method;
  out.mode = DiagnosisMode::kMerged;
  for (auto& [offset, c] : merged) out.candidates.push_back(std::move(c));
  sort_candidates(out.candidates);
  return out;
}

DiagnoseResult diagnose(const Program& program, const Specification& spec,
                        const DiagnoseOptions& options) {
  DiagnoseResult result;
  result.verdict = check(program, spec, options.check);
  const Verdict& v = result.verdict;
  if (v.consistent()) return result;

  const Method& method = program.method(spec.method);
  std::vector<Diagnosis> parts;
  if (!v.values_pass()) {
    parts.push_back(localize_value(program, spec,
                                   build_probe_set(method, spec, options.extra_probes),
                                   options.check.step_limit));
  }
  if (v.deps && !v.deps->consistent()) {
    parts.push_back(localize_deps(program, spec, options.check.deps));
  }
  if (!v.lines_pass()) parts.push_back(localize_lines(program, spec, v));

  Diagnosis merged;
  merged.method = method.name;
  merged.mode = DiagnosisMode::kMerged;
  for (const Diagnosis& d : parts) merged = merge_diagnoses(merged, d);
  if (parts.size() == 1) merged.mode = parts.front().mode;
  result.diagnosis = std::move(merged);
  return result;
}

}  // namespace bytedbg
