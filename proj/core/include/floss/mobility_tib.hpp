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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "floss/features.hpp"
#include "floss/gbt.hpp"
#include "floss/signal_io.hpp"

namespace floss {

enum class MobilityLabel : int { Idle = 0, Lying = 1, Stationary = 2, Mobile = 3 };

inline constexpr int kNumMobilityClasses = 4;

std::string_view mobility_name(MobilityLabel label);
MobilityLabel parse_mobility(std::string_view name);

struct TibResult {
  double lights_out_s = 0.0;
  double lights_on_s = 0.0;
  double tib_min = 0.0;
};

// Per-epoch mobility features of an ACC trace; trailing partial epochs dropped.
std::vector<std::vector<double>> mobility_feature_rows(const TriAxialAcc& acc,
                                                       const FeatureLayout& layout);

// Classifies every epoch. The feature mode ("stat" or "welch") comes from
// the model's layout; fs and epoch length must match it too.
std::vector<MobilityLabel> classify_mobility(const TriAxialAcc& acc, int fs,
                                             const gbt::GbtModel& model);

// Lights Out is the start of the first run of `run_epochs` consecutive Lying
// epochs and Lights On the end of the last such run, both with the 1-based
// epoch indexing of the original formulation:
//   lights_out = L * min{i}, lights_on = L * max{i + run_epochs - 1},
//   tib_min = (lights_on - lights_out + 1) / 60.
// Throws NoLyingPeriod when no run exists.
TibResult detect_tib(const std::vector<MobilityLabel>& labels, int run_epochs = 12,
                     double epoch_len_s = 10.0);

std::string write_mobility_csv(const std::vector<MobilityLabel>& labels, double epoch_len_s);

}  // namespace floss
