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

#include <string>
#include <string_view>
#include <vector>

namespace floss {

// Sleep stages W, N1, N2, N3, REM encoded 0..4; -1 marks an unscorable epoch.
inline constexpr int kUnscorable = -1;
inline constexpr int kWake = 0;
inline constexpr int kRem = 4;

std::string_view stage_name(int code);

// Usability labels {0..4} -> {0 usable, 1 unusable}.
std::vector<int> binarize(const std::vector<int>& usability);

// 1 where strictly more than half of the channels are unusable; an exact tie
// counts as usable. Throws LengthMismatch on ragged input.
std::vector<int> channel_majority(const std::vector<std::vector<int>>& binarized);

// Groups of `scaling_factor` consecutive epochs; 1 iff the group mean > 0.5.
// The trailing partial group is dropped.
std::vector<int> downsample_majority(const std::vector<int>& aggregated, int scaling_factor);

// Sleep epochs flagged unusable become -1, the rest keep their stage. A
// one-epoch length difference is repaired by truncating the longer input;
// anything larger throws LengthMismatch.
std::vector<int> reject_artifacts(const std::vector<int>& sleep_scores, const std::vector<int>& unusable);

// Validates and normalizes sleep scores: 5 is accepted as an alias of REM.
std::vector<int> normalize_sleep_scores(const std::vector<int>& scores);

// Scaling factor for the two epoch lengths; throws EpochMultipleViolation
// unless the sleep epoch is an exact multiple of the usability epoch.
int scaling_factor(double sleep_epoch_s, double usability_epoch_s);

// Runs binarize -> channel_majority -> downsample_majority -> reject.
struct AggregationTrace {
  std::vector<std::vector<int>> binarized;
  std::vector<int> aggregated;
  std::vector<int> downsampled;
  std::vector<int> artifact_rejected;
};
AggregationTrace aggregate(const std::vector<std::vector<int>>& usability, const std::vector<int>& sleep_scores,
                           int scaling_factor);

// One integer per line.
std::string write_scores_text(const std::vector<int>& scores);
std::vector<int> read_scores_text(std::string_view text);
// `epoch_index,start_s,stage` with stage as an integer code.
std::string write_scores_timed_csv(const std::vector<int>& scores, double epoch_len_s);

}  // namespace floss
