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

#include "bytedbg/corpus.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "bytedbg/error.h"
#include "bytedbg/report.h"

namespace bytedbg {

namespace fs = std::filesystem;

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string(), path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Program load_program(const fs::path& path) {
  std::string ext = path.extension().string();
  if (ext == ".bcasm") return assemble(read_text_file(path));
  if (ext == ".class") {
    std::string bytes = read_text_file(path);
    std::vector<uint8_t> data(bytes.begin(), bytes.end());
    return parse_class(data);
  }
  throw Error(ErrorKind::kUsage, "unsupported program extension '" + ext + "'",
              path.string());
}

std::string_view corpus_status_name(CorpusStatus status) {
  switch (status) {
    case CorpusStatus::kConsistent: return "consistent";
    case CorpusStatus::kFaulty: return "faulty";
    case CorpusStatus::kError: return "error";
    case CorpusStatus::kMissingSpec: return "missing_spec";
  }
  return "?";
}

namespace {

std::optional<uint32_t> read_fault(const fs::path& path) {
  std::error_code ec;
  if (!fs::exists(path, ec)) return std::nullopt;
  std::string text = read_text_file(path);
  auto first = text.find_first_not_of(" \t\r\n");
  auto last = text.find_last_not_of(" \t\r\n");
  if (first == std::string::npos) {
    throw Error(ErrorKind::kParse, "empty fault file", path.string());
  }
  auto v = parse_int(std::string_view(text).substr(first, last - first + 1));
  if (!v || *v < 0) throw Error(ErrorKind::kParse, "fault file must hold an offset", path.string());
  return static_cast<uint32_t>(*v);
}

CorpusEntry run_one(const fs::path& program_path, const fs::path& spec_dir,
                    const DiagnoseOptions& options) {
  CorpusEntry entry;
  entry.file = program_path.filename().string();
  std::string stem = program_path.stem().string();
  fs::path spec_path = spec_dir / (stem + ".spec.json");
  std::error_code ec;
  if (!fs::exists(spec_path, ec)) {
    entry.status = CorpusStatus::kMissingSpec;
    entry.message = "no spec file " + spec_path.filename().string();
    return entry;
  }
  try {
    entry.fault = read_fault(program_path.parent_path() / (stem + ".fault"));
    Program program = load_program(program_path);
    Specification spec = parse_spec(read_text_file(spec_path));
    DiagnoseResult result = diagnose(program, spec, options);
    if (result.verdict.consistent()) {
      entry.status = CorpusStatus::kConsistent;
    } else {
      entry.status = CorpusStatus::kFaulty;
      entry.diagnosis = std::move(result.diagnosis);
    }
    if (entry.fault) {
      entry.hit = entry.diagnosis && entry.diagnosis->find(*entry.fault) != nullptr;
    }
  } catch (const Error& e) {
    entry.status = CorpusStatus::kError;
    entry.message = std::string(error_kind_name(e.kind())) + ": " + e.what();
  } catch (const std::exception& e) {
    entry.status = CorpusStatus::kError;
    entry.message = std::string("internal: ") + e.what();
  }
  return entry;
}

}  // namespace

CorpusSummary corpus_run(const fs::path& dir, const fs::path& spec_dir,
                         const DiagnoseOptions& options) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw Error(ErrorKind::kIo, "not a directory: " + dir.string(), dir.string());
  }
  std::vector<fs::path> programs;
  for (const auto& e : fs::directory_iterator(dir, ec)) {
    if (!e.is_regular_file()) continue;
    std::string ext = e.path().extension().string();
    if (ext == ".bcasm" || ext == ".class") programs.push_back(e.path());
  }
  if (ec) throw Error(ErrorKind::kIo, "cannot list " + dir.string(), dir.string());
  std::sort(programs.begin(), programs.end(), [](const fs::path& a, const fs::path& b) {
    return a.filename().string() < b.filename().string();
  });

  CorpusSummary summary;
  for (const fs::path& p : programs) {
    CorpusEntry entry = run_one(p, spec_dir, options);
    switch (entry.status) {
      case CorpusStatus::kConsistent: ++summary.consistent; break;
      case CorpusStatus::kFaulty: ++summary.faulty; break;
      case CorpusStatus::kError: ++summary.errors; break;
      case CorpusStatus::kMissingSpec: ++summary.missing_spec; break;
    }
    if (entry.hit) {
      ++summary.with_fault;
      if (*entry.hit) ++summary.hits;
    }
    summary.entries.push_back(std::move(entry));
  }
  return summary;
}

nlohmann::json corpus_json(const CorpusSummary& summary) {
  using nlohmann::json;
  json programs = json::array();
  for (const CorpusEntry& e : summary.entries) {
    json j;
    j["file"] = e.file;
    j["status"] = std::string(corpus_status_name(e.status));
    if (!e.message.empty()) j["message"] = e.message;
    if (e.diagnosis) j["diagnosis"] = diagnosis_json(*e.diagnosis);
    if (e.fault) j["fault"] = *e.fault;
    if (e.hit) j["hit"] = *e.hit;
    programs.push_back(j);
  }
  json out;
  out["programs"] = programs;
  out["counts"] = {{"consistent", summary.consistent},
                   {"faulty", summary.faulty},
                   {"error", summary.errors},
                   {"missing_spec", summary.missing_spec}};
  out["localization"] = {{"with_fault", summary.with_fault},
                         {"hits", summary.hits},
                         {"hit_rate", summary.hit_rate()}};
  return out;
}

}  // namespace bytedbg
