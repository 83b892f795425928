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

#include "floss/mobility_tib.hpp"

#include <cmath>
#include <sstream>

#include "floss/epoching.hpp"
#include "floss/error.hpp"

namespace floss {

std::string_view mobility_name(MobilityLabel label) {
  switch (label) {
    case MobilityLabel::Idle: return "Idle";
    case MobilityLabel::Lying: return "Lying";
    case MobilityLabel::Stationary: return "Stationary";
    case MobilityLabel::Mobile: return "Mobile";
  }
  return "?";
}

MobilityLabel parse_mobility(std::string_view name) {
  for (int k = 0; k < kNumMobilityClasses; ++k) {
    const auto label = static_cast<MobilityLabel>(k);
    if (mobility_name(label) == name || std::to_string(k) == name) return label;
  }
  throw Error(ErrorCode::UnknownLabelCode, "mobility label '" + std::string(name) + "'");
}

std::vector<std::vector<double>> mobility_feature_rows(const TriAxialAcc& acc,
                                                       const FeatureLayout& layout) {
  const std::size_t w = window_samples(layout.fs, layout.epoch_len_s);
  const std::size_t n_epochs = acc.size() / w;
  std::vector<std::vector<double>> rows(n_epochs);
  for (std::size_t e = 0; e < n_epochs; ++e) {
    const auto slice = [&](const std::vector<double>& axis) {
      return std::span<const double>(axis.data() + e * w, w);
    };
    rows[e] = mobility_features(slice(acc.ax), slice(acc.ay), slice(acc.az), layout);
  }
  return rows;
}

std::vector<MobilityLabel> classify_mobility(const TriAxialAcc& acc, int fs,
                                             const gbt::GbtModel& model) {
  if (model.layout_json.empty())
    throw Error(ErrorCode::ModelIncompatible, "mobility model has no feature layout");
  const FeatureLayout layout = FeatureLayout::from_json(model.layout_json);
  if (layout.kind != "mobility")
    throw Error(ErrorCode::ModelIncompatible, "model was not trained on mobility features");
  if (layout.fs != fs)
    throw Error(ErrorCode::ModelIncompatible,
                "model expects " + std::to_string(layout.fs) + " Hz, recording has " + std::to_string(fs));
  if (model.num_classes != kNumMobilityClasses)
    throw Error(ErrorCode::ModelIncompatible, "mobility model must have four classes");
  std::vector<MobilityLabel> labels;
  for (const auto& row : mobility_feature_rows(acc, layout))
    labels.push_back(static_cast<MobilityLabel>(model.predict_label(row)));
  return labels;
}

TibResult detect_tib(const std::vector<MobilityLabel>& labels, int run_epochs, double epoch_len_s) {
  if (run_epochs < 1) throw Error(ErrorCode::InvalidArgument, "run_epochs must be >= 1");
  // run[i]: length of the Lying run starting at i (0-based).
  std::vector<int> run(labels.size() + 1, 0);
  for (std::size_t i = labels.size(); i-- > 0;)
    run[i] = labels[i] == MobilityLabel::Lying ? run[i + 1] + 1 : 0;

  std::optional<std::size_t> first, last;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (run[i] >= run_epochs) {
      if (!first) first = i;
      last = i;
    }
  }
  if (!first)
    throw Error(ErrorCode::NoLyingPeriod,
                "no run of " + std::to_string(run_epochs) + " consecutive Lying epochs");
  TibResult r;
  r.lights_out_s = epoch_len_s * static_cast<double>(*first + 1);
  r.lights_on_s = epoch_len_s * static_cast<double>(*last + 1 + static_cast<std::size_t>(run_epochs) - 1);
  r.tib_min = (r.lights_on_s - r.lights_out_s + 1.0) / 60.0;
  return r;
}

std::string write_mobility_csv(const std::vector<MobilityLabel>& labels, double epoch_len_s) {
  std::ostringstream out;
  out << "epoch_index,start_s,label\n";
  for (std::size_t i = 0; i < labels.size(); ++i)
    out << i << ',' << static_cast<double>(i) * epoch_len_s << ',' << mobility_name(labels[i]) << '\n';
  return out.str();
}

}  // namespace floss
