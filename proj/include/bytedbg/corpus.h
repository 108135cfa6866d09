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

// Batch checking of a directory of programs against specs matched by stem
// (`<stem>.bcasm` or `<stem>.class` with `<stem>.spec.json`). An optional
// `<stem>.fault` sidecar holds the true faulty offset and turns the run into
// a localization hit-rate measurement.

#ifndef BYTEDBG_CORPUS_H_
#define BYTEDBG_CORPUS_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bytedbg/ingest.h"
#include "bytedbg/localize.h"
#include "json.hpp"

namespace bytedbg {

// Loads by extension: .bcasm assembles, .class parses.
Program load_program(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);

enum class CorpusStatus { kConsistent, kFaulty, kError, kMissingSpec };

std::string_view corpus_status_name(CorpusStatus status);

struct CorpusEntry {
  std::string file;  // file name within the corpus directory
  CorpusStatus status = CorpusStatus::kError;
  std::string message;
  std::optional<Diagnosis> diagnosis;
  std::optional<uint32_t> fault;
  std::optional<bool> hit;
};

struct CorpusSummary {
  std::vector<CorpusEntry> entries;  // sorted by file name
  size_t consistent = 0;
  size_t faulty = 0;
  size_t errors = 0;
  size_t missing_spec = 0;
  size_t with_fault = 0;
  size_t hits = 0;

  double hit_rate() const {
    return with_fault == 0 ? 1.0 : static_cast<double>(hits) / static_cast<double>(with_fault);
  }
};

// Per-program failures are recorded, never thrown. Throws Error(kIo) only
// when `dir` itself cannot be listed.
CorpusSummary corpus_run(const std::filesystem::path& dir,
                         const std::filesystem::path& spec_dir,
                         const DiagnoseOptions& options = {});

nlohmann::json corpus_json(const CorpusSummary& summary);

}  // namespace bytedbg

#endif  // BYTEDBG_CORPUS_H_
