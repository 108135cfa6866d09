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

#include <gtest/gtest.h>

#include <algorithm>

#include "bytedbg/error.h"
#include "bytedbg/localize.h"
#include "test_util.h"

namespace bytedbg {
namespace {

using testing::maxf;

Value F(float f) { return Value::of_float(f); }
Value I(int32_t i) { return Value::of_int(i); }

ErrorKind error_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::kUsage;
}

Specification maxf_expecting(float expected) {
  Specification s = parse_spec(testing::kMaxfSpecText);
  s.value_specs[0].expected = F(expected);
  s.dep_spec.reset();
  return s;
}

Program maxf_mutant() {
  Program p = maxf();
  p.methods[0].code[4].opcode = Opcode::kFload1;
  return p;
}

void expect_ordered(const Diagnosis& d) {
  for (size_t i = 1; i < d.candidates.size(); ++i) {
    const Candidate& a = d.candidates[i - 1];
    const Candidate& b = d.candidates[i];
    EXPECT_TRUE(a.score > b.score || (a.score == b.score && a.offset < b.offset));
  }
  for (const Candidate& c : d.candidates) {
    EXPECT_GE(c.score, 0.0);
    EXPECT_LE(c.score, 1.0);
  }
}

TEST(CheckValues, Examples) {
  Verdict pass = check_values(maxf(), parse_spec(testing::kMaxfSpecText));
  ASSERT_EQ(pass.values.size(), 1u);
  EXPECT_EQ(pass.values[0].status, SpecStatus::kPass);

  Verdict fail = check_values(maxf(), maxf_expecting(4.0f));
  EXPECT_EQ(fail.values[0].status, SpecStatus::kFail);
  EXPECT_EQ(fail.values[0].spec.expected, F(4.0f));
  EXPECT_EQ(fail.values[0].got, F(3.0f));

  Specification deps_only = parse_spec(testing::kMaxfSpecText);
  deps_only.value_specs.clear();
  Verdict v = check(maxf(), deps_only);
  EXPECT_TRUE(v.values.empty());
  EXPECT_TRUE(v.consistent());
}

TEST(CheckValues, TrapAndStepLimit) {
  Program p = assemble(".method m (II)I\niload_0\niload_1\nidiv\nireturn\n");
  Specification s = parse_spec(R"({"method":"m","value_specs":[{"inputs":[1,0],"expected":0}]})");
  EXPECT_EQ(check_values(p, s).values[0].status, SpecStatus::kTrap);
  Program loop = assemble(".method m ()V\ngoto 0\n");
  Specification ls = parse_spec(R"({"method":"m","value_specs":[{"inputs":[],"expected":null}]})");
  CheckOptions o;
  o.step_limit = 50;
  EXPECT_EQ(check_values(loop, ls, o).values[0].status, SpecStatus::kStepLimit);
}

TEST(CheckDeps, Examples) {
  Specification s = parse_spec(testing::kMaxfSpecText);
  EXPECT_TRUE(check_deps(maxf(), s).consistent());
  DepVerdict v = check_deps(maxf_mutant(), s);
  EXPECT_EQ(v.diff.missing, (DepSet{DepPair::assign(VarId::output(1), VarId::local(0))}));
  EXPECT_EQ(v.diff.extra, (DepSet{DepPair::assign(VarId::output(1), VarId::local(1))}));

  Program constant = assemble(".method m ()I\niconst_1\nireturn\n");
  EXPECT_TRUE(check_deps(constant, parse_spec(R"({"method":"m","dep_spec":[]})")).consistent());
}

TEST(ProbeSet, Contents) {
  Program p = assemble(testing::kMaxfInitBuggyText);
  Specification s = parse_spec(R"({"method":"maxf","value_specs":[{"inputs":[],"expected":4.0}]})");
  auto probes = build_probe_set(p.methods[0], s, {F(9.5f)});
  auto has = [&](Value v) { return std::find(probes.begin(), probes.end(), v) != probes.end(); };
  EXPECT_TRUE(has(F(4.0f)));
  EXPECT_TRUE(has(F(2.0f)));
  EXPECT_TRUE(has(F(3.0f)));
  EXPECT_TRUE(has(F(9.5f)));
  for (int k = -1; k <= 1; ++k) {
    EXPECT_TRUE(has(I(k)));
    EXPECT_TRUE(has(F(static_cast<float>(k))));
  }
  EXPECT_TRUE(std::is_sorted(probes.begin(), probes.end(), numeric_less));
  EXPECT_EQ(std::adjacent_find(probes.begin(), probes.end()), probes.end());
}

TEST(LocalizeValue, InitBuggyVariant) {
  Program p = assemble(testing::kMaxfInitBuggyText);
  Specification s = parse_spec(R"({"method":"maxf","value_specs":[{"inputs":[],"expected":4.0}]})");
  EXPECT_EQ(check_values(p, s).values[0].status, SpecStatus::kFail);
  Diagnosis d = localize_value(p, s, build_probe_set(p.methods[0], s));
  const Candidate* c = d.find(0);
  ASSERT_NE(c, nullptr);
  EXPECT_NE(std::find(c->fixing_probes.begin(), c->fixing_probes.end(), F(4.0f)),
            c->fixing_probes.end());
  EXPECT_NE(c->evidence.find("4.0"), std::string::npos);
  expect_ordered(d);
}

TEST(LocalizeValue, MaxfExpectingFour) {
  Specification s = maxf_expecting(4.0f);
  Diagnosis d = localize_value(maxf(), s, build_probe_set(maxf().methods[0], s));
  EXPECT_NE(d.find(8), nullptr);
  EXPECT_EQ(d.find(6), nullptr);  // not executed
}

TEST(LocalizeValue, NoFailingSpec) {
  Program p = assemble(".method m ()I\niconst_3\nireturn\n");
  Specification s = parse_spec(R"({"method":"m","value_specs":[{"inputs":[],"expected":3}]})");
  EXPECT_EQ(error_of([&] { localize_value(p, s, build_probe_set(p.methods[0], s)); }),
            ErrorKind::kNoFailingSpec);
}

TEST(LocalizeValue, NeverEmptyWhenFailing) {
  Program p = assemble(".method m (F)F\nfload_0\nldc_float 1.5\nfsub\nfreturn\n");
  Specification s = parse_spec(R"({"method":"m","value_specs":[
      {"inputs":[2.0],"expected":0.75},{"inputs":[3.0],"expected":1.75}]})");
  Diagnosis d = localize_value(p, s, build_probe_set(p.methods[0], s));
  EXPECT_FALSE(d.candidates.empty());
  for (const Candidate& c : d.candidates) EXPECT_EQ(c.score, 0.0);
  Diagnosis with_probe = localize_value(p, s, build_probe_set(p.methods[0], s, {F(1.25f)}));
  ASSERT_NE(with_probe.find(1), nullptr);
  EXPECT_EQ(with_probe.find(1)->score, 1.0);
}

TEST(LocalizeDeps, MaxfMutant) {
  Specification s = parse_spec(testing::kMaxfSpecText);
  Diagnosis d = localize_deps(maxf_mutant(), s);
  EXPECT_EQ(d.mode, DiagnosisMode::kDependency);
  EXPECT_NE(d.find(6), nullptr);
  EXPECT_FALSE(d.candidates.empty());
  expect_ordered(d);
  EXPECT_EQ(error_of([&] { localize_deps(maxf(), s); }), ErrorKind::kConsistentSpec);
}

TEST(LocalizeDeps, ChainMissingTransitivePair) {
  Program p = assemble(testing::slurp(testing::corpus_dir() / "chain.bcasm"));
  Specification s = parse_spec(
      R"({"method":"chain","dep_spec":[["a","b","assign"],["b","c","assign"]]})");
  DepVerdict v = check_deps(p, s);
  ASSERT_FALSE(v.consistent());
  Diagnosis d = localize_deps(p, s);
  EXPECT_NE(d.find(1), nullptr);  // istore_0
  EXPECT_NE(d.find(3), nullptr);  // istore_1
}

TEST(LocalizeLines, MismatchingLineIsCandidate) {
  Specification s = parse_spec(R"({"method":"maxf","value_specs":[{"inputs":[2.0,3.0],"expected":3.0}],
      "block_spec":{"per_line":{"8":[4.0]}}})");
  Verdict v = check_values(maxf(), s);
  EXPECT_FALSE(v.consistent());
  EXPECT_EQ(v.lines.at(8).status, LineStatus::kMismatch);
  Diagnosis d = localize_lines(maxf(), s, v);
  EXPECT_NE(d.find(8), nullptr);
}

TEST(Merge, CombinationFormula) {
  Diagnosis a{"m", DiagnosisMode::kValue, {{6, 0.5, "a", {}}}};
  Diagnosis b{"m", DiagnosisMode::kDependency, {{6, 0.5, "b", {}}, {2, 0.6, "c", {}}}};
  Diagnosis m = merge_diagnoses(a, b);
  EXPECT_EQ(m.mode, DiagnosisMode::kMerged);
  ASSERT_EQ(m.candidates.size(), 2u);
  EXPECT_EQ(m.candidates[0].offset, 6u);
  EXPECT_DOUBLE_EQ(m.candidates[0].score, 0.75);
  EXPECT_EQ(m.candidates[1].offset, 2u);

  Diagnosis empty{"m", DiagnosisMode::kDependency, {}};
  Diagnosis same = merge_diagnoses(a, empty);
  ASSERT_EQ(same.candidates.size(), 1u);
  EXPECT_EQ(same.candidates[0].offset, 6u);
  EXPECT_EQ(same.candidates[0].score, 0.5);

  Diagnosis c{"m", DiagnosisMode::kValue, {{9, 0.5, "x", {}}, {1, 0.5, "y", {}}}};
  Diagnosis disjoint = merge_diagnoses(c, Diagnosis{"m", DiagnosisMode::kDependency, {{4, 0.9, "z", {}}}});
  std::vector<uint32_t> order;
  for (const auto& cand : disjoint.candidates) order.push_back(cand.offset);
  EXPECT_EQ(order, (std::vector<uint32_t>{4, 1, 9}));

  Diagnosis other{"n", DiagnosisMode::kValue, {}};
  EXPECT_EQ(error_of([&] { merge_diagnoses(a, other); }), ErrorKind::kMethodMismatch);
}

TEST(Diagnose, CorpusIsConsistentAndFaultyCorpusLocalizes) {
  for (const auto& path : testing::corpus_programs()) {
    DiagnoseResult r = diagnose(assemble(testing::slurp(path)), testing::corpus_spec(path));
    EXPECT_TRUE(r.verdict.consistent()) << path;
    EXPECT_FALSE(r.diagnosis.has_value()) << path;
  }
  DiagnoseResult r = diagnose(maxf_mutant(), parse_spec(testing::kMaxfSpecText));
  ASSERT_TRUE(r.diagnosis.has_value());
  EXPECT_NE(r.diagnosis->find(6), nullptr);
  EXPECT_EQ(r.diagnosis->mode, DiagnosisMode::kDependency);
  DiagnoseResult again = diagnose(maxf_mutant(), parse_spec(testing::kMaxfSpecText));
  EXPECT_EQ(again.diagnosis->candidates.size(), r.diagnosis->candidates.size());
}

}  // namespace
}  // namespace bytedbg
