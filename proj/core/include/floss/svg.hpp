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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "floss/mobility_tib.hpp"
#include "floss/signal_io.hpp"
#include "floss/usability.hpp"

namespace floss {

// Stacked panels: ACC norm trace (when ACC exists), then for every channel a
// log-power spectrogram heatmap and a usability color strip. Throws
// LengthMismatch when the scores do not fit the recording.
std::string usability_graph_svg(const Recording& rec, const UsabilityScores& scores);

// Step chart over the stages (top to bottom W, REM, N1, N2, N3, un) plus a
// mobility strip with Lights Out / Lights On markers. `mobility` may be
// empty. Throws LengthMismatch when the two time axes disagree by more than
// one sleep epoch.
std::string hypnogram_svg(const std::vector<int>& scores, double sleep_epoch_s,
                          const std::vector<MobilityLabel>& mobility, double mobility_epoch_s,
                          const std::optional<TibResult>& tib);

// Row of a stage in the hypnogram, 0 at the top.
int hypnogram_row(int stage);

void emit_usability_graph(const Recording& rec, const UsabilityScores& scores, const std::filesystem::path& path);
void emit_hypnogram(const std::vector<int>& scores, double sleep_epoch_s, const std::vector<MobilityLabel>& mobility,
                    double mobility_epoch_s, const std::optional<TibResult>& tib, const std::filesystem::path& path);

// Writes `content` to `path`; throws FileUnreadable when the file cannot be written.
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace floss
