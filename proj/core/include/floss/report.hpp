// Copyright 2026 The floss Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "floss/error.hpp"

namespace floss {

struct PipelineConfig {
  std::filesystem::path input_dir;
  std::filesystem::path out_dir;
  std::filesystem::path model_path;
  std::optional<std::filesystem::path> mobility_model_path;
  double epoch_len_s = 10.0;
  double sleep_epoch_len_s = 30.0;
  // When set, the usability model must carry this variant name.
  std::optional<std::string> variant;
  bool despike = false;
  int tib_run_epochs = 12;
  std::uint64_t seed = 0;
  int workers = 1;

  // Throws InvalidArgument on out-of-range values.
  void validate() const;
};

// Flat `key = value` lines; '#' starts a comment. Keys match the long CLI
// flag names with dashes or underscores (input, out, model, mobility-model,
// epoch-len, sleep-epoch-len, variant, despike, tib-run-epochs, seed, workers).
std::map<std::string, std::string> parse_config_text(std::string_view text);
// Applies parsed entries on top of `base`; unknown keys throw InvalidArgument.
PipelineConfig apply_config(const std::map<std::string, std::string>& entries, PipelineConfig base = {});

struct NightReport {
  std::string night_id;
  bool ok = false;
  std::optional<ErrorCode> error_code;  // one of the night-level codes when skipped
  std::string error_message;
  std::vector<std::string> outputs;  // file names relative to the night's output directory
  std::vector<std::string> warnings;
};

// Recordings in `dir`: *.edf, and *.csv files whose stem has no dot (so
// sidecars such as x.annotations.csv are skipped). Sorted
// by night id (the file stem).
std::vector<std::filesystem::path> discover_nights(const std::filesystem::path& dir);

// Processes every night independently; a night-level error skips that night
// and leaves no files behind. Writes `<out>/<night>/...` and
// `<out>/report.json`. Only configuration problems throw.
std::vector<NightReport> run_pipeline(const PipelineConfig& cfg);

std::string reports_to_json(const std::vector<NightReport>& reports);

// Sidecar with one sleep stage per line next to the recording.
std::filesystem::path scores_sidecar(const std::filesystem::path& recording);

// Writes `count` synthetic nights (EDF, sleep scores, artifact annotations,
// mobility truth) into `dir`; returns the recording paths.
std::vector<std::filesystem::path> write_synthetic_nights(const std::filesystem::path& dir, int count,
                                                          double duration_s, std::uint64_t seed);

}  // namespace floss
