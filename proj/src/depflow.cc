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

#include "bytedbg/depflow.h"

#include <algorithm>
#include <deque>
#include <map>

namespace bytedbg {
namespace {

// A slot's contents with provenance: local index -> load offsets.
using Slot = std::map<uint32_t, std::set<uint32_t>>;

struct State {
  std::vector<Slot> stack;
  std::vector<Slot> locals;

  friend bool operator==(const State&, const State&) = default;
};

void merge_into(Slot& dst, const Slot& src) {
  for (const auto& [local, loads] : src) dst[local].insert(loads.begin(), loads.end());
}

// Joins `in` into `dst`; returns true when `dst` grew.
bool join(std::optional<State>& dst, const State& in) {
  if (!dst) {
    dst = in;
    return true;
  }
  State before = *dst;
  // Validation guarantees equal depths at joins.
  for (size_t i = 0; i < dst->stack.size() && i < in.stack.size(); ++i) {
    merge_into(dst->stack[i], in.stack[i]);
  }
  for (size_t i = 0; i < dst->locals.size(); ++i) merge_into(dst->locals[i], in.locals[i]);
  return !(before == *dst);
}

Slot pop(State& s) {
  if (s.stack.empty()) return {};
  Slot v = std::move(s.stack.back());
  s.stack.pop_back();
  return v;
}

State transfer(const Instruction& insn, State s) {
  Opcode op = insn.opcode;
  if (constant_value(insn)) {
    s.stack.emplace_back();
  } else if (is_load(op)) {
    uint32_t slot = *local_slot(insn);
    s.stack.push_back(Slot{{slot, {insn.offset}}});
  } else if (is_store(op)) {
    uint32_t slot = *local_slot(insn);
    Slot v = pop(s);
    if (slot < s.locals.size()) s.locals[slot] = std::move(v);
  } else {
    const OpcodeInfo& info = insn.info();
    Slot merged;
    for (int i = 0; i < info.pops; ++i) merge_into(merged, pop(s));
    if (info.pushes == 1) s.stack.push_back(std::move(merged));
  }
  return s;
}

std::vector<std::optional<State>> solve(const Method& method) {
  require_valid(method);
  const auto& code = method.code;
  std::vector<std::optional<State>> in(code.size());
  State entry;
  entry.locals.resize(method.max_locals);
  in[0] = entry;
  std::deque<size_t> work{0};
  std::vector<bool> queued(code.size(), false);
  queued[0] = true;
  while (!work.empty()) {
    size_t i = work.front();
    work.pop_front();
    queued[i] = false;
    State out = transfer(code[i], *in[i]);
    for (uint32_t succ : successors(method, code[i].offset)) {
      size_t j = *method.index_of(succ);
      if (join(in[j], out) && !queued[j]) {
        queued[j] = true;
        work.push_back(j);
      }
    }
  }
  return in;
}

std::set<uint32_t> locals_of(const Slot& slot) {
  std::set<uint32_t> out;
  for (const auto& [local, loads] : slot) out.insert(local);
  return out;
}

class SiteCollector {
 public:
  void add(DepPair pair, uint32_t emitter, const std::set<uint32_t>& origins) {
    if (pair.kind == DepKind::kAssign && pair.left == pair.right) return;
    auto key = std::make_pair(pair, emitter);
    auto [it, inserted] = index_.emplace(key, sites_.size());
    if (inserted) {
      sites_.push_back(DepSite{pair, emitter, origins});
    } else {
      sites_[it->second].origins.insert(origins.begin(), origins.end());
    }
  }

  std::vector<DepSite> take() {
    std::sort(sites_.begin(), sites_.end(), [](const DepSite& a, const DepSite& b) {
      return std::tie(a.emitter, a.pair) < std::tie(b.emitter, b.pair);
    });
    return std::move(sites_);
  }

 private:
  std::vector<DepSite> sites_;
  std::map<std::pair<DepPair, uint32_t>, size_t> index_;
};

}  // namespace

std::string_view dep_kind_name(DepKind kind) {
  return kind == DepKind::kAssign ? "assign" : "compare";
}

StackSources stack_sources(const Method& method) {
  auto states = solve(method);
  StackSources out(states.size());
  for (size_t i = 0; i < states.size(); ++i) {
    if (!states[i]) continue;
    SourceState s;
    for (const Slot& slot : states[i]->stack) s.stack.push_back(locals_of(slot));
    for (const Slot& slot : states[i]->locals) s.locals.push_back(locals_of(slot));
    out[i] = std::move(s);
  }
  return out;
}

std::vector<DepSite> extract_dep_sites(const Method& method, const DepOptions& options) {
  auto states = solve(method);
  const auto& code = method.code;
  std::vector<uint32_t> returns = method.return_sites();
  auto output_of = [&](uint32_t offset) {
    auto it = std::find(returns.begin(), returns.end(), offset);
    return VarId::output(static_cast<uint32_t>(it - returns.begin()) + 1);
  };

  SiteCollector sites;
  for (size_t i = 0; i < code.size(); ++i) {
    if (!states[i]) continue;
    const Instruction& insn = code[i];
    const State& s = *states[i];
    Opcode op = insn.opcode;
    if (is_store(op) && !s.stack.empty()) {
      VarId target = VarId::local(*local_slot(insn));
      for (const auto& [local, loads] : s.stack.back()) {
        sites.add(DepPair::assign(target, VarId::local(local)), insn.offset, loads);
      }
    } else if ((op == Opcode::kIreturn || op == Opcode::kFreturn) && !s.stack.empty()) {
      VarId out = output_of(insn.offset);
      for (const auto& [local, loads] : s.stack.back()) {
        sites.add(DepPair::assign(out, VarId::local(local)), insn.offset, loads);
      }
    } else if ((op == Opcode::kFcmpl || op == Opcode::kFcmpg ||
                (op >= Opcode::kIfIcmpeq && op <= Opcode::kIfIcmple)) &&
               s.stack.size() >= 2) {
      const Slot& first = s.stack[s.stack.size() - 2];
      const Slot& second = s.stack.back();
      for (const auto& [a, loads_a] : first) {
        for (const auto& [b, loads_b] : second) {
          std::set<uint32_t> origins = loads_a;
          origins.insert(loads_b.begin(), loads_b.end());
          sites.add(DepPair::compare(VarId::local(a), VarId::local(b)), insn.offset,
                    origins);
        }
      }
    }
  }

  if (options.control_deps) {
    Cfg cfg = build_cfg(method);
    auto dom = dominators(cfg);
    for (uint32_t ret : returns) {
      const Instruction* insn = method.at(ret);
      size_t ret_index = *method.index_of(ret);
      if (insn->opcode == Opcode::kReturn || !states[ret_index]) continue;
      uint32_t block = *cfg.block_of(ret);
      for (uint32_t d : dom[block]) {
        if (d == block) continue;
        const BasicBlock& b = cfg.blocks[d];
        const Instruction& last = code[b.last_index];
        if (!is_conditional_branch(last.opcode) || !states[b.last_index]) continue;
        const State& s = *states[b.last_index];
        Slot cond;
        for (size_t k = 0; k < last.info().pops && k < s.stack.size(); ++k) {
          merge_into(cond, s.stack[s.stack.size() - 1 - k]);
        }
        for (const auto& [local, loads] : cond) {
          std::set<uint32_t> origins = loads;
          origins.insert(last.offset);
          sites.add(DepPair::assign(output_of(ret), VarId::local(local)), ret, origins);
        }
      }
    }
  }
  return sites.take();
}

DepSet extract_deps(const Method& method, const DepOptions& options) {
  DepSet out;
  for (const DepSite& site : extract_dep_sites(method, options)) out.insert(site.pair);
  return out;
}

DepSet transitive_closure(const DepSet& deps) {
  std::map<VarId, std::set<VarId>> edges;
  DepSet out;
  for (const DepPair& p : deps) {
    if (p.kind == DepKind::kCompare) {
      out.insert(p);
    } else if (p.left != p.right) {
      edges[p.left].insert(p.right);
    }
  }
  for (const auto& [start, direct] : edges) {
    std::set<VarId> seen;
    std::vector<VarId> stack(direct.begin(), direct.end());
    while (!stack.empty()) {
      VarId v = stack.back();
      stack.pop_back();
      if (!seen.insert(v).second) continue;
      auto it = edges.find(v);
      if (it == edges.end()) continue;
      for (VarId next : it->second) stack.push_back(next);
    }
    for (VarId v : seen) {
      if (v != start) out.insert(DepPair::assign(start, v));
    }
  }
  return out;
}

DepDiff dep_diff(const DepSet& computed, const DepSet& spec) {
  DepSet closed = transitive_closure(computed);
  DepDiff diff;
  std::set_difference(spec.begin(), spec.end(), closed.begin(), closed.end(),
                      std::inserter(diff.missing, diff.missing.begin()));
  std::set_difference(closed.begin(), closed.end(), spec.begin(), spec.end(),
                      std::inserter(diff.extra, diff.extra.begin()));
  return diff;
}

}  // namespace bytedbg
