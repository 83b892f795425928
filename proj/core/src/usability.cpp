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

#include "floss/usability.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "floss/epoching.hpp"
#include "floss/error.hpp"
#include "floss/parallel.hpp"

namespace floss {

double amplitude_percentile(const std::vector<double>& x, double q) {
  if (x.empty()) return 0.0;
  std::vector<double> a(x.size());
  std::transform(x.begin(), x.end(), a.begin(), [](double v) { return std::abs(v); });
  const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(a.size())));
  const std::size_t k = std::clamp<std::size_t>(rank, 1, a.size()) - 1;
  std::nth_element(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(k), a.end());
  return a[k];
}

UsabilityScores score_recording(const Recording& rec, const gbt::GbtModel& model,
                                double epoch_len_s, int workers) {
  validate(rec);
  if (rec.channels.empty()) throw Error(ErrorCode::ChannelMissing, "recording has no EEG channels");
  if (rec.sample_count() == 0) throw Error(ErrorCode::EmptyRecording, "recording has no samples");
  if (model.layout_json.empty())
    throw Error(ErrorCode::ModelIncompatible, "usability model has no feature layout");
  const FeatureLayout layout = FeatureLayout::from_json(model.layout_json);
  if (layout.kind != "usability")
    throw Error(ErrorCode::ModelIncompatible, "model was not trained on usability features");
  if (layout.fs != rec.fs)
    throw Error(ErrorCode::ModelIncompatible,
                "model expects " + std::to_string(layout.fs) + " Hz, recording has " + std::to_string(rec.fs));
  if (layout.size() != model.feature_count)
    throw Error(ErrorCode::FeatureCountMismatch, "layout and model disagree on feature count");

  const std::size_t w = window_samples(rec.fs, epoch_len_s);
  if (w < layout.spectrogram.segment_len)
    throw Error(ErrorCode::EpochMultipleViolation, "epoch shorter than one spectrogram segment");
  const std::size_t n_epochs = rec.sample_count() / w;

  UsabilityScores out;
  out.epoch_len_s = epoch_len_s;
  out.num_classes = model.num_classes;
  for (const auto& ch : rec.channels) {
    out.channels.push_back(ch.label);
    const double p = amplitude_percentile(ch.samples);
    if (p > kAmplitudeWarningUv) {
      out.warnings.push_back("channel '" + ch.label + "': 99.9th percentile |amplitude| " +
                             std::to_string(p) + " uV exceeds " +
                             std::to_string(kAmplitudeWarningUv) + " uV; consider normalizing");
    }
  }
  out.labels.assign(rec.channels.size(), std::vector<int>(n_epochs, 0));

  std::vector<double> anorm;
  if (rec.acc) anorm = acc_norm(*rec.acc);

  const std::size_t jobs = rec.channels.size() * n_epochs;
  parallel_for(jobs, workers, [&](std::size_t job) {
    const std::size_t c = job / n_epochs, e = job % n_epochs;
    const std::span<const double> eeg(rec.channels[c].samples.data() + e * w, w);
    std::optional<std::span<const double>> acc;
    if (!anorm.empty()) acc = std::span<const double>(anorm.data() + e * w, w);
    const auto features = usability_features(eeg, acc, layout);
    out.labels[c][e] = model.predict_label(features);
  });
  return out;
}

std::string write_scores_csv(const UsabilityScores& scores) {
  std::ostringstream out;
  out << "channel,epoch_index,label\n";
  for (std::size_t c = 0; c < scores.channels.size(); ++c)
    for (std::size_t e = 0; e < scores.labels[c].size(); ++e)
      out << scores.channels[c] << ',' << e << ',' << scores.labels[c][e] << '\n';
  return out.str();
}

}  // namespace floss
