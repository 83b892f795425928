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
#include <vector>

#include "floss/features.hpp"
#include "floss/gbt.hpp"
#include "floss/signal_io.hpp"

namespace floss {

struct UsabilityScores {
  std::vector<std::string> channels;
  std::vector<std::vector<int>> labels;  // [channel][epoch], values in {0..4}
  double epoch_len_s = 10.0;
  int num_classes = 5;  // 2 for binary models: {Usable, Unusable}
  std::vector<std::string> warnings;

  std::size_t epoch_count() const { return labels.empty() ? 0 : labels.front().size(); }
};

// Scores every EEG channel epoch by epoch. ACC is zero-padded when absent and
// trailing partial epochs are dropped. Channels whose 99.9th-percentile
// |amplitude| exceeds 2000 µV get a normalization warning; data is never
// rescaled.
UsabilityScores score_recording(const Recording& rec, const gbt::GbtModel& model,
                                double epoch_len_s = 10.0, int workers = 1);

// 99.9th percentile of |x| (nearest-rank).
double amplitude_percentile(const std::vector<double>& x, double q = 0.999);

inline constexpr double kAmplitudeWarningUv = 2000.0;

// `channel,epoch_index,label`
std::string write_scores_csv(const UsabilityScores& scores);

}  // namespace floss
