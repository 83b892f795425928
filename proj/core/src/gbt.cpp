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

#include "floss/gbt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <json.hpp>

#include "floss/error.hpp"
#include "floss/parallel.hpp"
#include "floss/random.hpp"

namespace floss::gbt {
namespace {

using Json = nlohmann::ordered_json;

struct BinnedData {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::vector<double>> cuts;  // per feature, ascending
  std::vector<std::uint8_t> bins;         // column-major

  std::uint8_t at(std::size_t feature, std::size_t row) const { return bins[feature * rows + row]; }
  std::size_t bin_count(std::size_t feature) const { return cuts[feature].size() + 1; }
};

// Cut points between consecutive distinct values, placed at quantiles when
// there are more distinct values than bins.
std::vector<double> make_cuts(std::vector<double> values, int max_bins) {
  std::sort(values.begin(), values.end());
  std::vector<double> distinct;
  std::vector<std::size_t> cumulative;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (distinct.empty() || values[i] != distinct.back()) {
      distinct.push_back(values[i]);
      cumulative.push_back(0);
    }
    cumulative.back() = i + 1;
  }
  auto midpoint = [](double a, double b) {
    const double m = a + (b - a) / 2.0;
    return m >= b ? a : m;
  };
  std::vector<double> cuts;
  if (distinct.size() <= static_cast<std::size_t>(max_bins)) {
    for (std::size_t i = 0; i + 1 < distinct.size(); ++i)
      cuts.push_back(midpoint(distinct[i], distinct[i + 1]));
    return cuts;
  }
  const double n = static_cast<double>(values.size());
  int next = 1;
  for (std::size_t i = 0; i + 1 < distinct.size() && next < max_bins; ++i) {
    if (static_cast<double>(cumulative[i]) >= next * n / max_bins) {
      cuts.push_back(midpoint(distinct[i], distinct[i + 1]));
      while (next < max_bins && static_cast<double>(cumulative[i]) >= next * n / max_bins) ++next;
    }
  }
  return cuts;
}

BinnedData bin_features(const LabeledMatrix& data, int max_bins, int threads) {
  BinnedData b;
  b.rows = data.rows;
  b.cols = data.cols;
  b.cuts.resize(data.cols);
  b.bins.resize(data.rows * data.cols);
  parallel_for(data.cols, threads, [&](std::size_t f) {
    std::vector<double> column(data.rows);
    for (std::size_t i = 0; i < data.rows; ++i) column[i] = data.x[i * data.cols + f];
    b.cuts[f] = make_cuts(column, max_bins);
    const auto& cuts = b.cuts[f];
    for (std::size_t i = 0; i < data.rows; ++i) {
      const auto pos = std::lower_bound(cuts.begin(), cuts.end(), column[i]) - cuts.begin();
      b.bins[f * data.rows + i] = static_cast<std::uint8_t>(pos);
    }
  });
  return b;
}

struct HistEntry {
  double g = 0.0;
  double h = 0.0;
  std::uint32_t n = 0;
};

struct Split {
  bool valid = false;
  double gain = 0.0;
  int feature = -1;
  int bin = -1;
  double g_left = 0.0;
  double h_left = 0.0;
  std::uint32_t n_left = 0;
};

struct Leaf {
  std::size_t begin = 0;
  std::size_t end = 0;
  double g = 0.0;
  double h = 0.0;
  int node = 0;
  Split split;
};

class TreeGrower {
 public:
  TreeGrower(const BinnedData& data, std::span<const double> grad, std::span<const double> hess,
             const TrainConfig& cfg)
      : data_(data), grad_(grad), hess_(hess), cfg_(cfg) {}

  // Grows one tree on `rows` (reordered in place) using `features`. Also
  // returns, per node, the bin threshold used for fast binned traversal.
  RegressionTree grow(std::vector<std::uint32_t>& rows, const std::vector<int>& features,
                      std::vector<int>& node_bins) {
    features_ = &features;
    RegressionTree tree;
    tree.nodes.emplace_back();
    node_bins.assign(1, -1);

    std::vector<Leaf> leaves(1);
    leaves[0].begin = 0;
    leaves[0].end = rows.size();
    for (std::uint32_t r : rows) {
      leaves[0].g += grad_[r];
      leaves[0].h += hess_[r];
    }
    leaves[0].split = best_split(rows, leaves[0]);

    while (static_cast<int>(leaves.size()) < cfg_.max_leaves) {
      int pick = -1;
      for (std::size_t i = 0; i < leaves.size(); ++i) {
        if (!leaves[i].split.valid) continue;
        if (pick < 0 || leaves[i].split.gain > leaves[static_cast<std::size_t>(pick)].split.gain)
          pick = static_cast<int>(i);
      }
      if (pick < 0) break;

      Leaf parent = leaves[static_cast<std::size_t>(pick)];
      const Split& s = parent.split;
      const auto f = static_cast<std::size_t>(s.feature);
      auto mid = std::stable_partition(
          rows.begin() + static_cast<std::ptrdiff_t>(parent.begin),
          rows.begin() + static_cast<std::ptrdiff_t>(parent.end),
          [&](std::uint32_t r) { return data_.at(f, r) <= s.bin; });

      const int left_id = static_cast<int>(tree.nodes.size());
      tree.nodes.emplace_back();
      tree.nodes.emplace_back();
      node_bins.push_back(-1);
      node_bins.push_back(-1);
      TreeNode& node = tree.nodes[static_cast<std::size_t>(parent.node)];
      node.feature = s.feature;
      node.threshold = data_.cuts[f][static_cast<std::size_t>(s.bin)];
      node.left = left_id;
      node.right = left_id + 1;
      node_bins[static_cast<std::size_t>(parent.node)] = s.bin;

      Leaf left, right;
      left.begin = parent.begin;
      left.end = static_cast<std::size_t>(mid - rows.begin());
      left.g = s.g_left;
      left.h = s.h_left;
      left.node = left_id;
      right.begin = left.end;
      right.end = parent.end;
      right.g = parent.g - s.g_left;
      right.h = parent.h - s.h_left;
      right.node = left_id + 1;
      left.split = best_split(rows, left);
      right.split = best_split(rows, right);
      leaves[static_cast<std::size_t>(pick)] = left;
      leaves.push_back(right);
    }

    for (const auto& leaf : leaves) {
      tree.nodes[static_cast<std::size_t>(leaf.node)].value =
          -cfg_.eta * leaf.g / (leaf.h + cfg_.lambda);
    }
    return tree;
  }

 private:
  double score(double g, double h) const { return g * g / (h + cfg_.lambda); }

  Split best_split(const std::vector<std::uint32_t>& rows, const Leaf& leaf) const {
    const std::size_t n = leaf.end - leaf.begin;
    const auto min_leaf = static_cast<std::size_t>(std::max(1, cfg_.min_samples_leaf));
    if (n < 2 * min_leaf) return {};
    const auto& features = *features_;
    std::vector<Split> per_feature(features.size());
    const std::span<const std::uint32_t> leaf_rows(rows.data() + leaf.begin, n);
    const double parent_score = score(leaf.g, leaf.h);

    const int workers = n * features.size() > 200000 ? cfg_.threads : 1;
    parallel_for(features.size(), workers, [&](std::size_t idx) {
      thread_local std::vector<HistEntry> hist;
      const auto f = static_cast<std::size_t>(features[idx]);
      const std::size_t nb = data_.bin_count(f);
      if (nb < 2) return;
      hist.assign(nb, HistEntry{});
      const std::uint8_t* column = data_.bins.data() + f * data_.rows;
      for (std::uint32_t r : leaf_rows) {
        HistEntry& e = hist[column[r]];
        e.g += grad_[r];
        e.h += hess_[r];
        ++e.n;
      }
      Split best;
      double gl = 0.0, hl = 0.0;
      std::uint32_t nl = 0;
      for (std::size_t b = 0; b + 1 < nb; ++b) {
        gl += hist[b].g;
        hl += hist[b].h;
        nl += hist[b].n;
        if (nl < min_leaf) continue;
        if (n - nl < min_leaf) break;
        const double gain =
            0.5 * (score(gl, hl) + score(leaf.g - gl, leaf.h - hl) - parent_score);
        if (gain > 1e-12 && (!best.valid || gain > best.gain)) {
          best = {true, gain, static_cast<int>(f), static_cast<int>(b), gl, hl, nl};
        }
      }
      // Bins empty in this leaf give the same partition; cut in the middle
      // of the gap so rows outside the subsample are not pushed to one side.
      if (best.valid) {
        std::size_t hi = static_cast<std::size_t>(best.bin);
        while (hi + 2 < nb && hist[hi + 1].n == 0) ++hi;
        best.bin = static_cast<int>((static_cast<std::size_t>(best.bin) + hi + 1) / 2);
      }
      per_feature[idx] = best;
    });

    Split best;
    for (const auto& s : per_feature) {
      if (s.valid && (!best.valid || s.gain > best.gain)) best = s;
    }
    return best;
  }

  const BinnedData& data_;
  std::span<const double> grad_;
  std::span<const double> hess_;
  const TrainConfig& cfg_;
  const std::vector<int>* features_ = nullptr;
};

double predict_binned(const RegressionTree& tree, const std::vector<int>& node_bins,
                      const BinnedData& data, std::size_t row) {
  std::size_t i = 0;
  while (!tree.nodes[i].is_leaf()) {
    const auto& node = tree.nodes[i];
    const bool left = data.at(static_cast<std::size_t>(node.feature), row) <= node_bins[i];
    i = static_cast<std::size_t>(left ? node.left : node.right);
  }
  return tree.nodes[i].value;
}

// Draws `k` distinct indices from [0, n) and returns them sorted.
std::vector<std::uint32_t> sample_indices(std::size_t n, std::size_t k, Rng& rng) {
  std::vector<std::uint32_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0u);
  k = std::min(k, n);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.index(n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

Json tree_to_json(const RegressionTree& tree, std::size_t i) {
  const auto& n = tree.nodes[i];
  if (n.is_leaf()) return Json{{"leaf", n.value}};
  Json j;
  j["feature"] = n.feature;
  j["threshold"] = n.threshold;
  j["left"] = tree_to_json(tree, static_cast<std::size_t>(n.left));
  j["right"] = tree_to_json(tree, static_cast<std::size_t>(n.right));
  return j;
}

int tree_from_json(const Json& j, RegressionTree& tree) {
  const int id = static_cast<int>(tree.nodes.size());
  tree.nodes.emplace_back();
  if (j.contains("leaf")) {
    tree.nodes[static_cast<std::size_t>(id)].value = j.at("leaf").get<double>();
    return id;
  }
  const int feature = j.at("feature").get<int>();
  const double threshold = j.at("threshold").get<double>();
  const int left = tree_from_json(j.at("left"), tree);
  const int right = tree_from_json(j.at("right"), tree);
  auto& node = tree.nodes[static_cast<std::size_t>(id)];
  node.feature = feature;
  node.threshold = threshold;
  node.left = left;
  node.right = right;
  return id;
}

Json config_to_json(const TrainConfig& c) {
  Json j;
  j["eta"] = c.eta;
  j["n_iterations"] = c.n_iterations;
  j["num_classes"] = c.num_classes;
  j["feature_subsample"] = c.feature_subsample;
  j["data_subsample"] = c.data_subsample;
  j["data_resample_period"] = c.data_resample_period;
  j["max_leaves"] = c.max_leaves;
  j["min_samples_leaf"] = c.min_samples_leaf;
  j["lambda"] = c.lambda;
  j["max_bins"] = c.max_bins;
  j["class_weights"] = c.class_weights;
  j["seed"] = c.seed;
  return j;
}

TrainConfig config_from_json(const Json& j) {
  TrainConfig c;
  c.eta = j.at("eta").get<double>();
  c.n_iterations = j.at("n_iterations").get<int>();
  c.num_classes = j.at("num_classes").get<int>();
  c.feature_subsample = j.at("feature_subsample").get<double>();
  c.data_subsample = j.at("data_subsample").get<double>();
  c.data_resample_period = j.at("data_resample_period").get<int>();
  c.max_leaves = j.at("max_leaves").get<int>();
  c.min_samples_leaf = j.at("min_samples_leaf").get<int>();
  c.lambda = j.at("lambda").get<double>();
  c.max_bins = j.at("max_bins").get<int>();
  c.class_weights = j.at("class_weights").get<std::vector<double>>();
  c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

constexpr int kFormatVersion = 1;

}  // namespace

void TrainConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidArgument, what); };
  if (!(eta > 0.0 && eta <= 1.0)) fail("eta must be in (0, 1]");
  if (n_iterations < 0) fail("n_iterations must be >= 0");
  if (num_classes < 2) fail("num_classes must be >= 2");
  if (!(feature_subsample > 0.0 && feature_subsample <= 1.0)) fail("feature_subsample must be in (0, 1]");
  if (!(data_subsample > 0.0 && data_subsample <= 1.0)) fail("data_subsample must be in (0, 1]");
  if (data_resample_period < 1) fail("data_resample_period must be >= 1");
  if (max_leaves < 2) fail("max_leaves must be >= 2");
  if (min_samples_leaf < 1) fail("min_samples_leaf must be >= 1");
  if (lambda < 0.0) fail("lambda must be >= 0");
  if (max_bins < 2 || max_bins > 256) fail("max_bins must be in [2, 256]");
  if (!class_weights.empty() && class_weights.size() != static_cast<std::size_t>(num_classes))
    fail("class_weights needs one entry per class");
  for (double w : class_weights)
    if (!(w > 0.0) || !std::isfinite(w)) fail("class weights must be positive");
}

void LabeledMatrix::add_row(std::span<const double> values, int label) {
  if (rows == 0 && cols == 0) cols = values.size();
  if (values.size() != cols)
    throw Error(ErrorCode::FeatureCountMismatch,
                std::to_string(values.size()) + " != " + std::to_string(cols));
  x.insert(x.end(), values.begin(), values.end());
  y.push_back(label);
  ++rows;
}

double RegressionTree::predict(std::span<const double> x) const {
  std::size_t i = 0;
  while (!nodes[i].is_leaf()) {
    const auto& n = nodes[i];
    i = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
  }
  return nodes[i].value;
}

int RegressionTree::leaf_count() const {
  return static_cast<int>(std::count_if(nodes.begin(), nodes.end(),
                                        [](const TreeNode& n) { return n.is_leaf(); }));
}

std::vector<double> softmax(std::span<const double> logits) {
  std::vector<double> p(logits.size());
  if (logits.empty()) return p;
  const double m = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (std::size_t k = 0; k < logits.size(); ++k) {
    p[k] = std::exp(logits[k] - m);
    sum += p[k];
  }
  for (double& v : p) v /= sum;
  return p;
}

GradHess grad_hess(std::span<const double> p, int label, double weight) {
  GradHess gh;
  gh.grad.resize(p.size());
  gh.hess.resize(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double y = static_cast<int>(k) == label ? 1.0 : 0.0;
    gh.grad[k] = weight * (p[k] - y);
    gh.hess[k] = weight * p[k] * (1.0 - p[k]);
  }
  return gh;
}

double ce_loss(std::span<const double> probs, std::span<const int> labels, int num_classes) {
  constexpr double kEps = 1e-15;
  double loss = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double p = probs[i * static_cast<std::size_t>(num_classes) + static_cast<std::size_t>(labels[i])];
    loss -= std::log(std::clamp(p, kEps, 1.0 - kEps));
  }
  return loss;
}

int argmax(std::span<const double> values) {
  int best = 0;
  for (std::size_t k = 1; k < values.size(); ++k)
    if (values[k] > values[static_cast<std::size_t>(best)]) best = static_cast<int>(k);
  return best;
}

std::vector<double> GbtModel::predict_logits(std::span<const double> x) const {
  if (x.size() != feature_count)
    throw Error(ErrorCode::FeatureCountMismatch,
                "model expects " + std::to_string(feature_count) + " features, got " +
                    std::to_string(x.size()));
  std::vector<double> z = base_score;
  for (const auto& iteration : trees)
    for (std::size_t k = 0; k < iteration.size(); ++k) z[k] += iteration[k].predict(x);
  return z;
}

std::vector<double> GbtModel::predict_proba(std::span<const double> x) const {
  return softmax(predict_logits(x));
}

int GbtModel::predict_label(std::span<const double> x) const {
  return argmax(predict_logits(x));
}

std::string GbtModel::to_json() const {
  Json j;
  j["format"] = "floss-gbt";
  j["version"] = kFormatVersion;
  j["variant"] = variant;
  j["num_classes"] = num_classes;
  j["feature_count"] = feature_count;
  j["learning_rate"] = learning_rate;
  j["class_names"] = class_names;
  j["base_score"] = base_score;
  j["config"] = config_to_json(config);
  j["layout"] = layout_json.empty() ? Json(nullptr) : Json::parse(layout_json);
  Json all = Json::array();
  for (const auto& iteration : trees) {
    Json per_class = Json::array();
    for (const auto& tree : iteration) per_class.push_back(tree_to_json(tree, 0));
    all.push_back(std::move(per_class));
  }
  j["trees"] = std::move(all);
  return j.dump() + "\n";
}

GbtModel GbtModel::from_json(std::string_view text) {
  GbtModel m;
  try {
    const Json j = Json::parse(text);
    if (j.at("format").get<std::string>() != "floss-gbt")
      throw Error(ErrorCode::ModelIncompatible, "not a floss-gbt model");
    if (j.at("version").get<int>() != kFormatVersion)
      throw Error(ErrorCode::ModelIncompatible, "unsupported model version");
    m.variant = j.at("variant").get<std::string>();
    m.num_classes = j.at("num_classes").get<int>();
    m.feature_count = j.at("feature_count").get<std::size_t>();
    m.learning_rate = j.at("learning_rate").get<double>();
    m.class_names = j.at("class_names").get<std::vector<std::string>>();
    m.base_score = j.at("base_score").get<std::vector<double>>();
    m.config = config_from_json(j.at("config"));
    if (!j.at("layout").is_null()) m.layout_json = j.at("layout").dump();
    for (const auto& iteration : j.at("trees")) {
      std::vector<RegressionTree> per_class;
      for (const auto& t : iteration) {
        RegressionTree tree;
        tree_from_json(t, tree);
        per_class.push_back(std::move(tree));
      }
      if (per_class.size() != static_cast<std::size_t>(m.num_classes))
        throw Error(ErrorCode::ModelIncompatible, "tree count per iteration != num_classes");
      m.trees.push_back(std::move(per_class));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ModelIncompatible, e.what());
  }
  if (m.base_score.size() != static_cast<std::size_t>(m.num_classes))
    throw Error(ErrorCode::ModelIncompatible, "base_score size != num_classes");
  for (const auto& iteration : m.trees) {
    for (const auto& tree : iteration) {
      for (const auto& node : tree.nodes) {
        if (!node.is_leaf() && static_cast<std::size_t>(node.feature) >= m.feature_count)
          throw Error(ErrorCode::ModelIncompatible, "tree references a missing feature");
        if (!std::isfinite(node.value))
          throw Error(ErrorCode::ModelIncompatible, "non-finite leaf value");
      }
    }
  }
  return m;
}

GbtModel fit(const LabeledMatrix& data, const TrainConfig& cfg, const IterationCallback& on_iteration) {
  cfg.validate();
  const std::size_t n = data.rows;
  const auto k_classes = static_cast<std::size_t>(cfg.num_classes);
  if (data.y.size() != n || data.x.size() != n * data.cols)
    throw Error(ErrorCode::InvalidArgument, "feature matrix and labels disagree in size");
  for (double v : data.x)
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteFeature, "training matrix");

  std::vector<std::size_t> counts(k_classes, 0);
  for (int label : data.y) {
    if (label < 0 || label >= cfg.num_classes)
      throw Error(ErrorCode::InvalidArgument, "label out of range: " + std::to_string(label));
    ++counts[static_cast<std::size_t>(label)];
  }
  for (std::size_t k = 0; k < k_classes; ++k) {
    if (counts[k] == 0)
      throw Error(ErrorCode::DegenerateData, "class " + std::to_string(k) + " absent from training data");
  }

  GbtModel model;
  model.num_classes = cfg.num_classes;
  model.feature_count = data.cols;
  model.learning_rate = cfg.eta;
  model.config = cfg;
  model.base_score.resize(k_classes);
  for (std::size_t k = 0; k < k_classes; ++k)
    model.base_score[k] = std::log(static_cast<double>(counts[k]) / static_cast<double>(n));

  std::vector<double> weight(n, 1.0);
  if (!cfg.class_weights.empty())
    for (std::size_t i = 0; i < n; ++i) weight[i] = cfg.class_weights[static_cast<std::size_t>(data.y[i])];

  const BinnedData binned = bin_features(data, cfg.max_bins, cfg.threads);
  Rng rng(cfg.seed);

  std::vector<double> logits(n * k_classes);
  for (std::size_t i = 0; i < n; ++i)
    std::copy(model.base_score.begin(), model.base_score.end(), logits.begin() + static_cast<std::ptrdiff_t>(i * k_classes));
  std::vector<double> probs(n * k_classes);
  auto refresh_probs = [&] {
    for (std::size_t i = 0; i < n; ++i) {
      const auto p = softmax(std::span<const double>(logits.data() + i * k_classes, k_classes));
      std::copy(p.begin(), p.end(), probs.begin() + static_cast<std::ptrdiff_t>(i * k_classes));
    }
  };
  refresh_probs();

  const auto n_features = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(cfg.feature_subsample * static_cast<double>(data.cols))));
  const auto n_rows = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(cfg.data_subsample * static_cast<double>(n))));

  std::vector<std::uint32_t> active;
  std::vector<double> grad(n), hess(n);
  std::vector<std::uint32_t> work;
  std::vector<int> node_bins;
  TreeGrower grower(binned, grad, hess, cfg);

  for (int it = 0; it < cfg.n_iterations; ++it) {
    if (it % cfg.data_resample_period == 0) active = sample_indices(n, n_rows, rng);

    std::vector<RegressionTree> iteration(k_classes);
    std::vector<std::vector<int>> iteration_bins(k_classes);
    for (std::size_t k = 0; k < k_classes; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        const double p = probs[i * k_classes + k];
        const double y = static_cast<std::size_t>(data.y[i]) == k ? 1.0 : 0.0;
        grad[i] = weight[i] * (p - y);
        hess[i] = weight[i] * p * (1.0 - p);
      }
      const auto sampled = sample_indices(data.cols, n_features, rng);
      const std::vector<int> features(sampled.begin(), sampled.end());
      work = active;
      iteration[k] = grower.grow(work, features, node_bins);
      iteration_bins[k] = node_bins;
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < k_classes; ++k)
        logits[i * k_classes + k] += predict_binned(iteration[k], iteration_bins[k], binned, i);
    refresh_probs();
    model.trees.push_back(std::move(iteration));
    if (on_iteration) on_iteration(it, ce_loss(probs, data.y, cfg.num_classes));
  }
  return model;
}

}  // namespace floss::gbt
