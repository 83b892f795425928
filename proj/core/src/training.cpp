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

#include "floss/training.hpp"

#include <json.hpp>

#include "floss/error.hpp"
#include "floss/parallel.hpp"
#include "floss/random.hpp"

namespace floss {

Variant parse_variant(std::string_view name) {
  Variant v;
  v.name = std::string(name);
  if (name == "default") return v;
  if (name == "lite") v.lite = true;
  else if (name == "binary") v.binary = true;
  else if (name == "weighted-m") v.weighted_m = true;
  else if (name == "lite-binary") v.lite = v.binary = true;
  else if (name == "lite-weighted-m") v.lite = v.weighted_m = true;
  else throw Error(ErrorCode::InvalidArgument, "unknown variant '" + std::string(name) + "'");
  return v;
}

gbt::TrainConfig variant_config(const Variant& v, gbt::TrainConfig base) {
  base.num_classes = v.binary ? 2 : kNumArtifactClasses;
  base.class_weights.clear();
  if (v.weighted_m) {
    base.class_weights.assign(kNumArtifactClasses, 1.0);
    base.class_weights[static_cast<int>(ClassLabel::MShaped)] = kMShapedWeight;
  }
  return base;
}

gbt::LabeledMatrix usability_matrix(const std::vector<EpochSample>& samples, const FeatureLayout& layout,
                                    bool binary, int workers) {
  gbt::LabeledMatrix m;
  m.rows = samples.size();
  m.cols = layout.size();
  m.x.resize(m.rows * m.cols);
  m.y.resize(m.rows);
  parallel_for(samples.size(), workers, [&](std::size_t i) {
    const auto& s = samples[i];
    if (!s.label) throw Error(ErrorCode::InvalidArgument, "training sample without a label");
    std::optional<std::span<const double>> acc;
    if (s.anorm) acc = std::span<const double>(*s.anorm);
    const auto f = usability_features(s.eeg, acc, layout);
    std::copy(f.begin(), f.end(), m.x.begin() + static_cast<std::ptrdiff_t>(i * m.cols));
    const int label = static_cast<int>(*s.label);
    m.y[i] = binary ? (label == 0 ? 0 : 1) : label;
  });
  return m;
}

gbt::GbtModel train_usability(const std::vector<EpochSample>& samples, const Variant& variant,
                              const gbt::TrainConfig& cfg, int fs, double epoch_len_s, int workers) {
  const FeatureLayout layout = usability_layout(fs, epoch_len_s, variant.lite);
  const auto data = usability_matrix(samples, layout, variant.binary, workers);
  gbt::TrainConfig c = variant_config(variant, cfg);
  gbt::GbtModel model = gbt::fit(data, c);
  model.variant = variant.name;
  model.layout_json = layout.to_json();
  model.class_names.clear();
  if (variant.binary) {
    model.class_names = {"Usable", "Unusable"};
  } else {
    for (int k = 0; k < kNumArtifactClasses; ++k)
      model.class_names.emplace_back(class_name(static_cast<ClassLabel>(k)));
  }
  return model;
}

gbt::GbtModel train_mobility(const std::vector<synth::MobilitySequence>& sequences, bool welch,
                             const gbt::TrainConfig& cfg, int fs, double epoch_len_s) {
  const FeatureLayout layout = mobility_layout(fs, epoch_len_s, welch);
  gbt::LabeledMatrix data;
  data.cols = layout.size();
  for (const auto& seq : sequences) {
    const auto rows = mobility_feature_rows(seq.acc, layout);
    if (rows.size() != seq.labels.size())
      throw Error(ErrorCode::LengthMismatch, "mobility labels do not match the epoch count");
    for (std::size_t i = 0; i < rows.size(); ++i) data.add_row(rows[i], static_cast<int>(seq.labels[i]));
  }
  gbt::TrainConfig c = cfg;
  c.num_classes = kNumMobilityClasses;
  c.class_weights.clear();
  gbt::GbtModel model = gbt::fit(data, c);
  model.variant = welch ? "welch" : "stat";
  model.layout_json = layout.to_json();
  model.class_names.clear();
  for (int k = 0; k < kNumMobilityClasses; ++k)
    model.class_names.emplace_back(mobility_name(static_cast<MobilityLabel>(k)));
  return model;
}

std::vector<synth::MobilitySequence> synth_mobility_corpus(int sequences, int epochs_per_class, int fs,
                                                           double epoch_len_s, std::uint64_t seed) {
  std::vector<synth::MobilitySequence> out;
  Rng rng(seed);
  for (int s = 0; s < sequences; ++s) {
    // Shuffled class order so transitions vary between sequences.
    std::vector<MobilityLabel> order{MobilityLabel::Idle, MobilityLabel::Lying, MobilityLabel::Stationary,
                                     MobilityLabel::Mobile};
    for (std::size_t i = order.size() - 1; i > 0; --i) std::swap(order[i], order[rng.index(i + 1)]);
    std::vector<synth::MobilitySegment> segs;
    for (auto label : order) segs.push_back({label, epochs_per_class});
    out.push_back(synth::gen_mobility_sequence(segs, fs, epoch_len_s, derive_seed(seed, static_cast<std::uint64_t>(s))));
  }
  return out;
}

Evaluation evaluate(const std::vector<int>& truth, const std::vector<int>& predicted, int num_classes) {
  if (truth.size() != predicted.size()) throw Error(ErrorCode::LengthMismatch, "truth and predictions differ");
  if (num_classes < 1) throw Error(ErrorCode::InvalidArgument, "num_classes must be positive");
  const auto K = static_cast<std::size_t>(num_classes);
  Evaluation e;
  e.num_classes = num_classes;
  e.confusion.assign(K, std::vector<std::size_t>(K, 0));
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] < 0 || truth[i] >= num_classes || predicted[i] < 0 || predicted[i] >= num_classes)
      throw Error(ErrorCode::InvalidArgument, "label out of range");
    ++e.confusion[static_cast<std::size_t>(truth[i])][static_cast<std::size_t>(predicted[i])];
  }
  const double n = static_cast<double>(truth.size());
  double correct = 0.0, chance = 0.0;
  e.precision.assign(K, 0.0);
  e.recall.assign(K, 0.0);
  e.f1.assign(K, 0.0);
  for (std::size_t k = 0; k < K; ++k) {
    double row = 0.0, col = 0.0;
    for (std::size_t j = 0; j < K; ++j) {
      row += static_cast<double>(e.confusion[k][j]);
      col += static_cast<double>(e.confusion[j][k]);
    }
    const double tp = static_cast<double>(e.confusion[k][k]);
    correct += tp;
    if (n > 0.0) chance += (row / n) * (col / n);
    e.precision[k] = col > 0.0 ? tp / col : 0.0;
    e.recall[k] = row > 0.0 ? tp / row : 0.0;
    const double ps = e.precision[k] + e.recall[k];
    e.f1[k] = ps > 0.0 ? 2.0 * e.precision[k] * e.recall[k] / ps : 0.0;
    e.macro_f1 += e.f1[k] / static_cast<double>(K);
  }
  e.accuracy = n > 0.0 ? correct / n : 0.0;
  e.kappa = chance < 1.0 ? (e.accuracy - chance) / (1.0 - chance) : 1.0;
  return e;
}

std::string Evaluation::to_json() const {
  nlohmann::ordered_json j;
  j["num_classes"] = num_classes;
  j["accuracy"] = accuracy;
  j["macro_f1"] = macro_f1;
  j["kappa"] = kappa;
  j["precision"] = precision;
  j["recall"] = recall;
  j["f1"] = f1;
  j["confusion"] = confusion;
  return j.dump(2);
}

std::vector<int> predict_all(const gbt::GbtModel& model, const gbt::LabeledMatrix& data, int workers) {
  std::vector<int> out(data.rows);
  parallel_for(data.rows, workers, [&](std::size_t i) { out[i] = model.predict_label(data.row(i)); });
  return out;
}

}  // namespace floss
