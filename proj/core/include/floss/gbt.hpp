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
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace floss::gbt {

struct TrainConfig {
  double eta = 0.01;
  int n_iterations = 100;
  int num_classes = 5;
  double feature_subsample = 0.8;
  double data_subsample = 0.7;
  int data_resample_period = 10;
  int max_leaves = 31;
  int min_samples_leaf = 20;
  double lambda = 1.0;
  // Quantile bins per feature for split search; exact when a feature has
  // at most this many distinct values.
  int max_bins = 64;
  std::vector<double> class_weights;  // empty means all 1
  std::uint64_t seed = 0;
  int threads = 1;

  // Throws InvalidArgument when a field is out of range.
  void validate() const;
};

// N x F row-major feature matrix with class labels in [0, K).
struct LabeledMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> x;
  std::vector<int> y;

  std::span<const double> row(std::size_t i) const { return {x.data() + i * cols, cols}; }
  void add_row(std::span<const double> values, int label);
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;  // x[feature] <= threshold goes left
  int left = -1;
  int right = -1;
  double value = 0.0;  // leaf output, learning rate already applied

  bool is_leaf() const { return feature < 0; }
};

struct RegressionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  double predict(std::span<const double> x) const;
  int leaf_count() const;
};

struct GbtModel {
  int num_classes = 0;
  std::size_t feature_count = 0;
  double learning_rate = 0.0;
  std::vector<double> base_score;
  std::vector<std::vector<RegressionTree>> trees;  // [iteration][class]
  std::vector<std::string> class_names;
  std::string variant = "default";
  std::string layout_json;  // feature layout descriptor, opaque here
  TrainConfig config;

  std::vector<double> predict_logits(std::span<const double> x) const;
  std::vector<double> predict_proba(std::span<const double> x) const;
  int predict_label(std::span<const double> x) const;

  // Versioned JSON: trees as nested nodes, config echo, layout descriptor.
  std::string to_json() const;
  static GbtModel from_json(std::string_view text);
};

std::vector<double> softmax(std::span<const double> logits);

struct GradHess {
  std::vector<double> grad;
  std::vector<double> hess;
};
GradHess grad_hess(std::span<const double> p, int label, double weight = 1.0);

// Summed categorical cross-entropy; `probs` is N x K row-major.
double ce_loss(std::span<const double> probs, std::span<const int> labels, int num_classes);

// Index of the largest value; smallest index wins ties.
int argmax(std::span<const double> values);

// Called after every boosting iteration with the training-set loss.
using IterationCallback = std::function<void(int iteration, double train_loss)>;

GbtModel fit(const LabeledMatrix& data, const TrainConfig& cfg,
             const IterationCallback& on_iteration = {});

}  // namespace floss::gbt
