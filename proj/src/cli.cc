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

#include "bytedbg/cli.h"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "CLI11.hpp"
#include "bytedbg/corpus.h"
#include "bytedbg/depflow.h"
#include "bytedbg/error.h"
#include "bytedbg/ingest.h"
#include "bytedbg/interpreter.h"
#include "bytedbg/localize.h"
#include "bytedbg/report.h"
#include "bytedbg/spec.h"

namespace bytedbg {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Options {
  std::string file;
  std::string spec;
  std::string method;
  std::string output;
  std::string spec_dir;
  std::vector<std::string> inputs;
  std::string probes;
  uint64_t step_limit = kDefaultStepLimit;
  bool control_deps = false;
  bool json = false;
  bool pretty = false;
};

std::vector<Value> parse_inputs(const std::vector<std::string>& texts, const Method& method) {
  if (texts.size() != method.params.size()) {
    throw Error(ErrorKind::kInputMismatch,
                "method " + method.name + " takes " + std::to_string(method.params.size()) +
                    " inputs, got " + std::to_string(texts.size()));
  }
  std::vector<Value> values;
  for (size_t i = 0; i < texts.size(); ++i) {
    std::string where = "--input #" + std::to_string(i + 1);
    if (method.params[i] == Kind::kInt) {
      auto v = parse_int(texts[i]);
      if (!v) throw Error(ErrorKind::kKindMismatch, "expected an int literal: " + texts[i], where);
      values.push_back(Value::of_int(*v));
    } else {
      auto v = parse_float(texts[i]);
      if (!v) throw Error(ErrorKind::kKindMismatch, "expected a float literal: " + texts[i], where);
      values.push_back(Value::of_float(*v));
    }
  }
  return values;
}

// Integral literals probe both kinds.
std::vector<Value> parse_probes(const std::string& text) {
  std::vector<Value> probes;
  size_t pos = 0;
  while (pos <= text.size() && !text.empty()) {
    size_t comma = text.find(',', pos);
    std::string item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (auto i = parse_int(item)) {
      probes.push_back(Value::of_int(*i));
      probes.push_back(Value::of_float(static_cast<float>(*i)));
    } else if (auto f = parse_float(item)) {
      probes.push_back(Value::of_float(*f));
    } else {
      throw Error(ErrorKind::kUsage, "bad probe literal '" + item + "'", "--probes");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return probes;
}

Specification load_spec(const Options& o, bool required) {
  if (o.spec.empty()) {
    if (required) throw Error(ErrorKind::kUsage, "--spec is required");
    Specification spec;
    spec.method = o.method;
    return spec;
  }
  Specification spec = parse_spec(read_text_file(o.spec));
  if (!o.method.empty()) spec.method = o.method;
  return spec;
}

class Driver {
 public:
  Driver(const Options& o, std::ostream& out) : o_(o), out_(out) {}

  void emit(const Report& report) { out_ << emit_report(report, o_.pretty); }

  int cmd_asm() {
    Program program = load_program(o_.file);
    fs::path target = o_.output.empty() ? fs::path(o_.file).replace_extension(".class")
                                        : fs::path(o_.output);
    std::vector<uint8_t> bytes = write_class(program);
    std::ofstream f(target, std::ios::binary);
    if (!f) throw Error(ErrorKind::kIo, "cannot write " + target.string(), target.string());
    f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw Error(ErrorKind::kIo, "cannot write " + target.string(), target.string());
    Report r = base("asm", program);
    r.extra["output"] = target.string();
    r.extra["bytes"] = bytes.size();
    emit(r);
    return kExitOk;
  }

  int cmd_disasm() {
    Program program = load_program(o_.file);
    std::string text;
    if (o_.method.empty()) {
      text = disassemble(program);
    } else {
      text = disassemble(program.method(o_.method));
    }
    if (!o_.json && !o_.pretty) {
      out_ << text;
      return kExitOk;
    }
    Report r = base("disasm", program);
    r.extra["text"] = text;
    emit(r);
    return kExitOk;
  }

  int cmd_trace() {
    Program program = load_program(o_.file);
    const Method& method = program.method(o_.method);
    std::vector<Value> inputs = parse_inputs(o_.inputs, method);
    RunOptions ro;
    ro.step_limit = o_.step_limit;
    ExecResult result = run(method, inputs, ro);
    Report r = base("trace", program, method);
    r.extra["result"] = exec_result_json(result);
    r.extra["trace"] = trace_json(result.trace);
    r.value_table = value_table_json(value_table(result.trace));
    emit(r);
    return result.outcome == Outcome::kReturned ? kExitOk : kExitTrap;
  }

  int cmd_deps() {
    Program program = load_program(o_.file);
    Specification spec = load_spec(o_, false);
    const Method& method = program.method(spec.method);
    spec.method = method.name;
    NameBinding binding = bind_names(spec, method);
    DepOptions options{.control_deps = o_.control_deps};
    DepSet direct = extract_deps(method, options);
    Report r = base("deps", program, method);
    r.extra["deps"] = dep_set_json(direct, binding);
    r.extra["closure"] = dep_set_json(transitive_closure(direct), binding);
    int code = kExitOk;
    if (spec.dep_spec) {
      DepVerdict verdict = check_deps(program, spec, options);
      r.dep_verdict = dep_verdict_json(verdict, binding);
      if (!verdict.consistent()) code = kExitViolated;
    }
    emit(r);
    return code;
  }

  int cmd_check() {
    Program program = load_program(o_.file);
    Specification spec = load_spec(o_, true);
    const Method& method = program.method(spec.method);
    spec.method = method.name;
    Verdict verdict = check(program, spec, check_options());
    Report r = base("check", program, method);
    fill_verdict(r, verdict, spec, method);
    emit(r);
    return verdict.consistent() ? kExitOk : kExitViolated;
  }

  int cmd_localize() {
    Program program = load_program(o_.file);
    Specification spec = load_spec(o_, true);
    const Method& method = program.method(spec.method);
    spec.method = method.name;
    DiagnoseOptions options;
    options.check = check_options();
    options.extra_probes = parse_probes(o_.probes);
    DiagnoseResult result = diagnose(program, spec, options);
    Report r = base("localize", program, method);
    fill_verdict(r, result.verdict, spec, method);
    if (result.diagnosis) r.diagnosis = diagnosis_json(*result.diagnosis);
    emit(r);
    return result.verdict.consistent() ? kExitOk : kExitViolated;
  }

  int cmd_corpus() {
    fs::path dir = o_.file;
    fs::path spec_dir = o_.spec_dir.empty() ? dir : fs::path(o_.spec_dir);
    DiagnoseOptions options;
    options.check = check_options();
    options.extra_probes = parse_probes(o_.probes);
    CorpusSummary summary = corpus_run(dir, spec_dir, options);
    Report r;
    r.command = "corpus";
    r.extra = corpus_json(summary);
    emit(r);
    if (summary.errors > 0) return kExitUsage;
    return summary.faulty > 0 ? kExitViolated : kExitOk;
  }

 private:
  Report base(std::string command, const Program& program) {
    Report r;
    r.command = std::move(command);
    if (!program.methods.empty()) {
      r.method = o_.method.empty() ? program.methods.front().name : o_.method;
    }
    return r;
  }

  Report base(std::string command, const Program& program, const Method& method) {
    Report r = base(std::move(command), program);
    r.method = method.name;
    return r;
  }

  CheckOptions check_options() const {
    CheckOptions c;
    c.step_limit = o_.step_limit;
    c.deps.control_deps = o_.control_deps;
    return c;
  }

  void fill_verdict(Report& r, const Verdict& verdict, const Specification& spec,
                    const Method& method) {
    r.verdicts = spec_results_json(verdict);
    if (verdict.deps) r.dep_verdict = dep_verdict_json(*verdict.deps, bind_names(spec, method));
    if (!verdict.lines.empty()) r.extra["line_checks"] = line_checks_json(verdict.lines);
    if (!verdict.blocks.empty()) r.extra["block_checks"] = line_checks_json(verdict.blocks);
  }

  const Options& o_;
  std::ostream& out_;
};

void write_error(std::ostream& err, const Error& e) { err << emit_json(error_json(e), false); }

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bytecode debugger: tracing, dependency checks and fault localization", "bytedbg"};
  app.require_subcommand(1);
  Options o;
  std::string command;

  auto add_common = [&](CLI::App* sub) {
    sub->add_flag("--json", o.json, "Compact JSON report (default)");
    sub->add_flag("--pretty", o.pretty, "Indented JSON report");
  };
  auto add_method = [&](CLI::App* sub) {
    sub->add_option("--method", o.method, "Method name (default: first method)");
  };
  auto add_run = [&](CLI::App* sub) {
    sub->add_option("--step-limit", o.step_limit, "Instruction budget per run")
        ->check(CLI::PositiveNumber);
  };
  auto add_probes = [&](CLI::App* sub) {
    sub->add_option("--probes", o.probes, "Extra probe values, comma separated");
  };

  auto* s_asm = app.add_subcommand("asm", "Assemble to a class file");
  s_asm->add_option("file", o.file, "Input program")->required();
  s_asm->add_option("-o,--output", o.output, "Output class file");
  add_common(s_asm);

  auto* s_disasm = app.add_subcommand("disasm", "Print canonical assembly");
  s_disasm->add_option("file", o.file, "Input program")->required();
  add_method(s_disasm);
  add_common(s_disasm);

  auto* s_trace = app.add_subcommand("trace", "Execute a method and record its trace");
  s_trace->add_option("file", o.file, "Input program")->required();
  s_trace->add_option("--input", o.inputs, "Argument value, in parameter order")
      ->allow_extra_args(false);
  add_method(s_trace);
  add_run(s_trace);
  add_common(s_trace);

  auto* s_deps = app.add_subcommand("deps", "Extract dependency pairs");
  s_deps->add_option("file", o.file, "Input program")->required();
  s_deps->add_option("--spec", o.spec, "Specification supplying names and expected pairs");
  s_deps->add_flag("--control-deps", o.control_deps, "Include control dependencies");
  add_method(s_deps);
  add_common(s_deps);

  auto* s_check = app.add_subcommand("check", "Check a program against its specification");
  s_check->add_option("file", o.file, "Input program")->required();
  s_check->add_option("--spec", o.spec, "Specification file")->required();
  s_check->add_flag("--control-deps", o.control_deps, "Include control dependencies");
  add_method(s_check);
  add_run(s_check);
  add_common(s_check);

  auto* s_loc = app.add_subcommand("localize", "Rank fault candidates");
  s_loc->add_option("file", o.file, "Input program")->required();
  s_loc->add_option("--spec", o.spec, "Specification file")->required();
  s_loc->add_flag("--control-deps", o.control_deps, "Include control dependencies");
  add_method(s_loc);
  add_run(s_loc);
  add_probes(s_loc);
  add_common(s_loc);

  auto* s_corpus = app.add_subcommand("corpus", "Check and localize every program in a directory");
  s_corpus->add_option("dir", o.file, "Corpus directory")->required();
  s_corpus->add_option("--spec-dir", o.spec_dir, "Directory holding <stem>.spec.json files");
  s_corpus->add_flag("--control-deps", o.control_deps, "Include control dependencies");
  add_run(s_corpus);
  add_probes(s_corpus);
  add_common(s_corpus);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    write_error(err, Error(ErrorKind::kUsage, e.what()));
    return kExitUsage;
  }

  Driver driver(o, out);
  try {
    if (s_asm->parsed()) return driver.cmd_asm();
    if (s_disasm->parsed()) return driver.cmd_disasm();
    if (s_trace->parsed()) return driver.cmd_trace();
    if (s_deps->parsed()) return driver.cmd_deps();
    if (s_check->parsed()) return driver.cmd_check();
    if (s_loc->parsed()) return driver.cmd_localize();
    return driver.cmd_corpus();
  } catch (const Error& e) {
    write_error(err, e);
    return kExitUsage;
  } catch (const std::exception& e) {
    err << emit_json(json{{"error", {{"kind", "internal"}, {"message", e.what()}}}}, false);
    return kExitTrap;
  }
}

}  // namespace bytedbg
