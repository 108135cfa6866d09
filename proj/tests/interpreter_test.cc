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

#include <limits>

#include "bytedbg/error.h"
#include "bytedbg/interpreter.h"
#include "generators.h"
#include "test_util.h"

namespace bytedbg {
namespace {

using testing::maxf_method;

Value F(float f) { return Value::of_float(f); }
Value I(int32_t i) { return Value::of_int(i); }

Method asm_method(const char* text) { return assemble(text).methods.front(); }

ExecResult run_text(const char* text, std::vector<Value> inputs = {}, uint64_t limit = kDefaultStepLimit) {
  RunOptions o;
  o.step_limit = limit;
  return run(asm_method(text), inputs, o);
}

TEST(Step, FcmplOnMaxfState) {
  Method m = maxf_method();
  Frame f;
  f.locals = {F(2.0f), F(3.0f)};
  f.stack = {F(2.0f), F(3.0f)};
  f.pc = 2;
  StepResult r = step(f, m);
  EXPECT_EQ(r.status, StepStatus::kContinue);
  EXPECT_EQ(f.stack, (std::vector<Value>{I(-1)}));
  EXPECT_EQ(f.pc, 3u);
  EXPECT_EQ(r.entry.popped, (std::vector<Value>{F(2.0f), F(3.0f)}));
  EXPECT_EQ(r.entry.pushed, (std::vector<Value>{I(-1)}));
}

TEST(Step, NopAdvancesOnly) {
  Method m = asm_method(".method m ()V\nnop\nreturn\n");
  Frame f = Frame::initial(m, {});
  f.stack = {I(9)};
  Frame before = f;
  step(f, m);
  before.pc = 1;
  EXPECT_EQ(f, before);
}

TEST(Step, IdivByZeroTraps) {
  Method m = asm_method(".method m (II)I\niload_0\niload_1\nidiv\nireturn\n");
  Frame f = Frame::initial(m, std::vector<Value>{I(7), I(0)});
  f.stack = {I(7), I(0)};
  f.pc = 2;
  StepResult r = step(f, m);
  EXPECT_EQ(r.status, StepStatus::kTrapped);
  EXPECT_NE(r.trap.find("divide-by-zero"), std::string::npos) << r.trap;
}

TEST(Step, NanComparisons) {
  float nan = std::numeric_limits<float>::quiet_NaN();
  auto cmp = [&](const char* op, float a, float b) {
    std::string text = std::string(".method m (FF)I\nfload_0\nfload_1\n") + op + "\nireturn\n";
    return run(asm_method(text.c_str()), std::vector<Value>{F(a), F(b)}).value->as_int();
  };
  EXPECT_EQ(cmp("fcmpl", nan, 1.0f), -1);
  EXPECT_EQ(cmp("fcmpg", nan, 1.0f), 1);
  EXPECT_EQ(cmp("fcmpl", 1.0f, 1.0f), 0);
  EXPECT_EQ(cmp("fcmpg", 2.0f, 1.0f), 1);
  EXPECT_EQ(cmp("fcmpl", -0.0f, 0.0f), 0);
}

TEST(Run, MaxfExamples) {
  Method m = maxf_method();
  ExecResult r = run(m, std::vector<Value>{F(2.0f), F(3.0f)});
  EXPECT_EQ(r.outcome, Outcome::kReturned);
  EXPECT_EQ(r.value, F(3.0f));
  EXPECT_EQ(r.return_site, 9u);
  std::vector<uint32_t> offsets;
  for (const auto& e : r.trace) offsets.push_back(e.offset);
  EXPECT_EQ(offsets, (std::vector<uint32_t>{0, 1, 2, 3, 8, 9}));

  ExecResult r2 = run(m, std::vector<Value>{F(4.0f), F(3.0f)});
  EXPECT_EQ(r2.value, F(4.0f));
  EXPECT_EQ(r2.return_site, 7u);
}

TEST(Run, StepLimit) {
  ExecResult r = run_text(".method m ()V\ngoto 0\n", {}, 100);
  EXPECT_EQ(r.outcome, Outcome::kStepLimit);
  EXPECT_EQ(r.trace.size(), 100u);
  EXPECT_THROW(run_text(".method m ()V\nreturn\n", {}, 0), Error);
}

TEST(Run, InputMismatch) {
  Method m = maxf_method();
  try {
    run(m, std::vector<Value>{F(1.0f)});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInputMismatch);
  }
  EXPECT_THROW(run(m, std::vector<Value>{F(1.0f), I(1)}), Error);
}

TEST(Run, IntegerEdgeCases) {
  const char* div = ".method m (II)I\niload_0\niload_1\nidiv\nireturn\n";
  const char* rem = ".method m (II)I\niload_0\niload_1\nirem\nireturn\n";
  int32_t min = std::numeric_limits<int32_t>::min();
  EXPECT_EQ(run_text(div, {I(min), I(-1)}).value, I(min));
  EXPECT_EQ(run_text(rem, {I(min), I(-1)}).value, I(0));
  EXPECT_EQ(run_text(div, {I(-7), I(2)}).value, I(-3));
  EXPECT_EQ(run_text(rem, {I(-7), I(2)}).value, I(-1));
  EXPECT_EQ(run_text(rem, {I(1), I(0)}).outcome, Outcome::kTrapped);
  const char* add = ".method m (II)I\niload_0\niload_1\niadd\nireturn\n";
  EXPECT_EQ(run_text(add, {I(std::numeric_limits<int32_t>::max()), I(1)}).value, I(min));
  EXPECT_EQ(run_text(".method m (I)I\niload_0\nineg\nireturn\n", {I(min)}).value, I(min));
}

TEST(Run, FloatDivisionFollowsIeee) {
  const char* div = ".method m (FF)F\nfload_0\nfload_1\nfdiv\nfreturn\n";
  EXPECT_EQ(run_text(div, {F(1.0f), F(0.0f)}).value, F(std::numeric_limits<float>::infinity()));
  EXPECT_EQ(run_text(div, {F(1.0f), F(-0.0f)}).value, F(-std::numeric_limits<float>::infinity()));
  EXPECT_TRUE(std::isnan(run_text(div, {F(0.0f), F(0.0f)}).value->as_float()));
}

TEST(Run, UnsetLocalTraps) {
  ExecResult r = run_text(".method m ()I\n.maxlocals 1\niload_0\nireturn\n");
  EXPECT_EQ(r.outcome, Outcome::kTrapped);
  EXPECT_NE(r.trap_reason.find("unset-local"), std::string::npos) << r.trap_reason;
}

TEST(Run, OverrideReplacesProducedValue) {
  Method m = assemble(testing::kMaxfInitBuggyText).methods.front();
  RunOptions o;
  o.override = ValueOverride{0, F(4.0f)};
  EXPECT_EQ(run(m, {}).value, F(3.0f));
  EXPECT_EQ(run(m, {}, o).value, F(4.0f));
  o.override = ValueOverride{1, F(4.0f)};  // the store of n1
  EXPECT_EQ(run(m, {}, o).value, F(4.0f));
}

TEST(ValueTable, MaxfRows) {
  ExecResult r = run(maxf_method(), std::vector<Value>{F(2.0f), F(3.0f)});
  ValueTable t = value_table(r.trace);
  ASSERT_TRUE(t.count(8));
  EXPECT_EQ(t[8], (std::vector<TableRow>{{5, {F(3.0f)}}}));
  EXPECT_FALSE(t.count(6));
  EXPECT_FALSE(t.count(7));
  EXPECT_TRUE(value_table({}).empty());
}

TEST(ValueTable, LoopBodyRows) {
  Program p = assemble(testing::slurp(testing::corpus_dir() / "sumto.bcasm"));
  ExecResult r = run(p.methods[0], std::vector<Value>{I(3)});
  EXPECT_EQ(r.value, I(6));
  ValueTable t = value_table(r.trace);
  ASSERT_EQ(t[8].size(), 3u);  // iadd
  EXPECT_EQ(t[8][0].values, (std::vector<Value>{I(3)}));
  EXPECT_EQ(t[8][1].values, (std::vector<Value>{I(5)}));
  EXPECT_EQ(t[8][2].values, (std::vector<Value>{I(6)}));
  EXPECT_LT(t[8][0].step, t[8][1].step);
  // The store row carries the written value.
  EXPECT_EQ(t[9][0].values, (std::vector<Value>{I(3)}));
}

TEST(CheckLines, Examples) {
  ValueTable t = value_table(run(maxf_method(), std::vector<Value>{F(2.0f), F(3.0f)}).trace);
  auto ok = check_lines(t, {{8, {F(3.0f)}}});
  EXPECT_EQ(ok.at(8).status, LineStatus::kOk);
  EXPECT_TRUE(check_lines(t, {}).empty());
  auto bad = check_lines(t, {{8, {F(4.0f)}}});
  EXPECT_EQ(bad.at(8).status, LineStatus::kMismatch);
  EXPECT_EQ(bad.at(8).expected, (std::vector<Value>{F(4.0f)}));
  EXPECT_EQ(bad.at(8).got, (std::vector<Value>{F(3.0f)}));
  EXPECT_EQ(check_lines(t, {{6, {F(2.0f)}}}).at(6).status, LineStatus::kNotExecuted);
}

// Replaying each entry's effects reconstructs the frame the interpreter
// actually reached; stacks stay within max_stack; runs are deterministic.
TEST(InterpreterProperties, TraceFaithfulnessAndStackSafety) {
  testing::Rng rng(21);
  testing::BranchingGenerator gen(rng);
  for (int i = 0; i < 300; ++i) {
    auto c = gen.generate("g");
    Method m = assemble(c.text).methods.front();
    std::vector<Value> inputs;
    for (Kind k : c.params) {
      inputs.push_back(k == Kind::kInt ? I(testing::pick(rng, -5, 5))
                                       : F(static_cast<float>(testing::pick(rng, -5, 5))));
    }
    Frame f = Frame::initial(m, inputs);
    Frame replay = f;
    for (uint64_t n = 1; n < 10000; ++n) {
      StepResult r = step(f, m, n);
      ASSERT_NE(r.status, StepStatus::kTrapped) << r.trap << "\n" << c.text;
      ASSERT_GE(replay.stack.size(), r.entry.popped.size());
      std::vector<Value> top(replay.stack.end() - static_cast<long>(r.entry.popped.size()),
                             replay.stack.end());
      EXPECT_EQ(top, r.entry.popped);
      replay.stack.resize(replay.stack.size() - r.entry.popped.size());
      for (const Value& v : r.entry.pushed) replay.stack.push_back(v);
      if (r.entry.local_write) replay.locals[r.entry.local_write->first] = r.entry.local_write->second;
      EXPECT_LE(f.stack.size(), m.max_stack);
      if (r.status == StepStatus::kReturned) break;
      EXPECT_EQ(replay.stack, f.stack);
      EXPECT_EQ(replay.locals, f.locals);
    }
    EXPECT_EQ(run(m, inputs), run(m, inputs));
  }
}

TEST(InterpreterProperties, MatchesExpressionEvaluator) {
  testing::Rng rng(99);
  for (int i = 0; i < 1000; ++i) {
    auto c = testing::random_straight_line(rng);
    ExecResult r = run(c.method, c.inputs);
    testing::EvalResult want = testing::evaluate(*c.expr, c.inputs);
    if (want.trapped) {
      EXPECT_EQ(r.outcome, Outcome::kTrapped);
    } else {
      ASSERT_EQ(r.outcome, Outcome::kReturned) << r.trap_reason;
      EXPECT_EQ(r.value, want.value);
    }
  }
}

}  // namespace
}  // namespace bytedbg
