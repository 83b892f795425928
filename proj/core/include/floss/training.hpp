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
#include <string>
#include <string_view>
#include <vector>

#include "floss/epoching.hpp"
#include "floss/gbt.hpp"
#include "floss/mobility_tib.hpp"
#include "floss/synth.hpp"

namespace floss {

// Usability model variants: feature set and label handling.
struct Variant {
  std::string name = "default";
  bool lite = false;  // spectrogram features only
  bool binary = false;  // {Usable, Unusable}
  bool weighted_m = false;  // MShaped class weight above 1
};

inline constexpr double kMShapedWeight = 3.0;

// Accepts default, lite, binary, weighted-m, lite-binary, lite-weighted-m.
Variant parse_variant(std::string_view name);

// Applies the variant to a base config: class count, class weights.
gbt::TrainConfig variant_config(const Variant& v, gbt::TrainConfig base);

// Features of labeled samples; binary variants collapse labels to {0, 1}.
gbt::LabeledMatrix usability_matrix(const std::vector<EpochSample>& samples, const FeatureLayout& layout,
                                    bool binary, int workers);

gbt::GbtModel train_usability(const std::vector<EpochSample>& samples, const Variant& variant,
                              const gbt::TrainConfig& cfg, int fs, double epoch_len_s, int workers = 1);

gbt::GbtModel train_mobility(const std::vector<synth::MobilitySequence>& sequences, bool welch,
                             const gbt::TrainConfig& cfg, int fs, double epoch_len_s);

// Mixed-class synthetic sequences for mobility training, `epochs_per_class`
// epochs of each class per sequence.
std::vector<synth::MobilitySequence> synth_mobility_corpus(int sequences, int epochs_per_class, int fs,
                                                           double epoch_len_s, std::uint64_t seed);

struct Evaluation {
  int num_classes = 0;
  std::vector<std::vector<std::size_t>> confusion;  // [truth][prediction]
  std::vector<double> precision, recall, f1;
  double accuracy = 0.0;
  double macro_f1 = 0.0;
  double kappa = 0.0;

  std::string to_json() const;
};

Evaluation evaluate(const std::vector<int>& truth, const std::vector<int>& predicted, int num_classes);

// Predictions for every row of `data`.
std::vector<int> predict_all(const gbt::GbtModel& model, const gbt::LabeledMatrix& data, int workers = 1);

}  // namespace floss
