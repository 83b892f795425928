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

#include <doctest.h>

#include <cmath>
#include <random>

#include "floss/error.hpp"
#include "floss/gbt.hpp"
#include "oracles.hpp"

using namespace floss;
using namespace floss::gbt;

namespace {

// Gaussian blobs centred on a ring, one per class.
LabeledMatrix blobs(int classes, int per_class, double spread, std::uint64_t seed, int extra_noise_cols = 0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0.0, spread);
  LabeledMatrix m;
  m.cols = static_cast<std::size_t>(2 + extra_noise_cols);
  for (int k = 0; k < classes; ++k) {
    const double ang = 2.0 * 3.141592653589793 * k / classes;
    for (int i = 0; i < per_class; ++i) {
      std::vector<double> row{std::cos(ang) * 3 + d(rng), std::sin(ang) * 3 + d(rng)};
      for (int e = 0; e < extra_noise_cols; ++e) row.push_back(d(rng));
      m.add_row(row, k);
    }
  }
  return m;
}

double brute_force_logit(const GbtModel& m, std::span<const double> x, int k) {
  double z = m.base_score[static_cast<std::size_t>(k)];
  for (const auto& iter : m.trees) {
    const auto& nodes = iter[static_cast<std::size_t>(k)].nodes;
    std::size_t i = 0;
    while (nodes[i].feature >= 0) {
      i = static_cast<std::size_t>(x[static_cast<std::size_t>(nodes[i].feature)] <= nodes[i].threshold
                                       ? nodes[i].left
                                       : nodes[i].right);
    }
    z += nodes[i].value;
  }
  return z;
}

double train_loss(const GbtModel& m, const LabeledMatrix& d) {
  std::vector<double> probs;
  for (std::size_t i = 0; i < d.rows; ++i) {
    const auto p = m.predict_proba(d.row(i));
    probs.insert(probs.end(), p.begin(), p.end());
  }
  return ce_loss(probs, d.y, m.num_classes);
}

}  // namespace

TEST_SUITE("gbt") {
  TEST_CASE("softmax") {
    const std::vector<double> zero(5, 0.0);
    for (double p : softmax(zero)) CHECK(p == doctest::Approx(0.2));
    const std::vector<double> l2{std::log(2.0), 0.0};
    const auto p = softmax(l2);
    CHECK(p[0] == doctest::Approx(2.0 / 3.0));
    CHECK(p[1] == doctest::Approx(1.0 / 3.0));
    const std::vector<double> big{1000.0, 0.0};
    const auto q = softmax(big);
    CHECK(std::isfinite(q[0]));
    CHECK(q[0] == doctest::Approx(1.0));
    CHECK(q[1] < 1e-300 + 1e-12);
    std::mt19937_64 rng(1);
    std::normal_distribution<double> d(0.0, 10.0);
    for (int t = 0; t < 100; ++t) {
      std::vector<double> z(5);
      for (double& v : z) v = d(rng);
      double s = 0.0;
      for (double v : softmax(z)) s += v;
      CHECK(std::abs(s - 1.0) <= 1e-12);
    }
  }

  TEST_CASE("gradient and hessian") {
    const std::vector<double> p(5, 0.2);
    const auto gh = grad_hess(p, 0);
    CHECK(gh.grad[0] == doctest::Approx(-0.8));
    for (int k = 1; k < 5; ++k) CHECK(gh.grad[static_cast<std::size_t>(k)] == doctest::Approx(0.2));
    const std::vector<double> exact{0.0, 1.0, 0.0};
    for (double g : grad_hess(exact, 1).grad) CHECK(g == 0.0);
    const std::vector<double> half{0.5, 0.5};
    CHECK(grad_hess(half, 0).hess[0] == doctest::Approx(0.25));
    const auto w = grad_hess(p, 2, 3.0);
    CHECK(w.grad[2] == doctest::Approx(-2.4));
    CHECK(w.hess[2] == doctest::Approx(3.0 * 0.16));
  }

  TEST_CASE("gradient matches central finite differences of the loss") {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> d(0.0, 2.0);
    const double eps = 1e-6;
    for (int t = 0; t < 100; ++t) {
      std::vector<double> z(5);
      for (double& v : z) v = d(rng);
      const int y = static_cast<int>(rng() % 5);
      const auto g = grad_hess(softmax(z), y).grad;
      for (std::size_t k = 0; k < 5; ++k) {
        auto zp = z, zm = z;
        zp[k] += eps;
        zm[k] -= eps;
        const double fd = (oracle::ce_of_logits(zp, y) - oracle::ce_of_logits(zm, y)) / (2 * eps);
        CHECK(std::abs(fd - g[k]) <= 1e-5 * std::max(1.0, std::abs(g[k])));
      }
    }
  }

  TEST_CASE("cross entropy") {
    const std::vector<double> perfect{1, 0, 0, 0, 1, 0};
    const std::vector<int> y{0, 1};
    CHECK(ce_loss(perfect, y, 3) <= 2 * 1e-14);
    const std::vector<double> uniform(5, 0.2);
    const std::vector<int> one{3};
    CHECK(ce_loss(uniform, one, 5) == doctest::Approx(std::log(5.0)));
    CHECK(std::log(5.0) == doctest::Approx(1.60944).epsilon(1e-5));
  }

  TEST_CASE("argmax picks the smallest index on ties and ignores shifts") {
    const std::vector<double> v{1.0, 3.0, 3.0};
    CHECK(argmax(v) == 1);
    std::vector<double> s{0.3, -1.0, 0.9, 0.9};
    CHECK(argmax(s) == 2);
    for (double& x : s) x += 100.0;
    CHECK(argmax(s) == 2);
  }

  TEST_CASE("empty model predicts its base score") {
    GbtModel m;
    m.num_classes = 5;
    m.feature_count = 2;
    m.base_score.assign(5, 0.0);
    const std::vector<double> x{1.0, 2.0};
    for (double p : m.predict_proba(x)) CHECK(p == doctest::Approx(0.2));
    const std::vector<double> bad{1.0};
    try {
      (void)m.predict_proba(bad);
      FAIL("expected FeatureCountMismatch");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::FeatureCountMismatch);
    }
  }

  TEST_CASE("separable clusters are learned exactly") {
    const auto d = blobs(2, 60, 0.3, 1);
    TrainConfig cfg;
    cfg.num_classes = 2;
    cfg.n_iterations = 50;
    cfg.eta = 0.1;
    const auto m = fit(d, cfg);
    int correct = 0;
    for (std::size_t i = 0; i < d.rows; ++i) correct += m.predict_label(d.row(i)) == d.y[i] ? 1 : 0;
    CHECK(correct == static_cast<int>(d.rows));
  }

  TEST_CASE("prediction equals brute-force traversal") {
    const auto d = blobs(5, 40, 1.0, 2, 3);
    TrainConfig cfg;
    cfg.n_iterations = 15;
    cfg.eta = 0.2;
    cfg.min_samples_leaf = 5;
    const auto m = fit(d, cfg);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> r(0.0, 3.0);
    for (int t = 0; t < 100; ++t) {
      std::vector<double> x(d.cols);
      for (double& v : x) v = r(rng);
      const auto z = m.predict_logits(x);
      for (int k = 0; k < 5; ++k) CHECK(z[static_cast<std::size_t>(k)] == brute_force_logit(m, x, k));
    }
    for (const auto& iter : m.trees) {
      for (const auto& tree : iter) {
        CHECK(tree.leaf_count() <= cfg.max_leaves);
        for (const auto& n : tree.nodes) {
          if (!n.is_leaf()) CHECK(static_cast<std::size_t>(n.feature) < m.feature_count);
          else CHECK(std::isfinite(n.value));
        }
      }
    }
  }

  TEST_CASE("training loss is non-increasing without row subsampling") {
    const auto d = blobs(5, 30, 1.5, 4, 2);
    TrainConfig cfg;
    cfg.n_iterations = 60;
    cfg.eta = 0.1;
    cfg.data_subsample = 1.0;
    std::vector<double> trace;
    const auto model = fit(d, cfg, [&](int, double loss) { trace.push_back(loss); });
    REQUIRE(trace.size() == 60);
    CHECK(trace.back() == doctest::Approx(train_loss(model, d)).epsilon(1e-9));
    for (std::size_t i = 1; i < trace.size(); ++i) CHECK(trace[i] <= trace[i - 1] + 1e-9);
  }

  TEST_CASE("fit is deterministic and independent of thread count") {
    const auto d = blobs(3, 50, 1.2, 5, 4);
    TrainConfig cfg;
    cfg.num_classes = 3;
    cfg.n_iterations = 20;
    cfg.eta = 0.1;
    cfg.seed = 9;
    const auto a = fit(d, cfg).to_json();
    CHECK(fit(d, cfg).to_json() == a);
    cfg.threads = 3;
    CHECK(fit(d, cfg).to_json() == a);
    cfg.seed = 10;
    CHECK(fit(d, cfg).to_json() != a);
  }

  TEST_CASE("model json round trip") {
    const auto d = blobs(3, 30, 1.0, 6);
    TrainConfig cfg;
    cfg.num_classes = 3;
    cfg.n_iterations = 10;
    cfg.eta = 0.3;
    auto m = fit(d, cfg);
    m.layout_json = "{\"kind\":\"test\"}";
    const auto back = GbtModel::from_json(m.to_json());
    CHECK(back.to_json() == m.to_json());
    for (std::size_t i = 0; i < d.rows; ++i) CHECK(back.predict_logits(d.row(i)) == m.predict_logits(d.row(i)));
    CHECK_THROWS_AS(GbtModel::from_json("{\"format\":\"other\"}"), Error);
  }

  TEST_CASE("fit rejects absent classes and non-finite features") {
    auto d = blobs(2, 30, 1.0, 7);
    TrainConfig cfg;
    cfg.num_classes = 3;
    try {
      (void)fit(d, cfg);
      FAIL("expected DegenerateData");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::DegenerateData);
    }
    cfg.num_classes = 2;
    d.x[5] = NAN;
    try {
      (void)fit(d, cfg);
      FAIL("expected NonFiniteFeature");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NonFiniteFeature);
    }
  }

  TEST_CASE("config validation") {
    TrainConfig c;
    c.eta = 0.0;
    CHECK_THROWS_AS(c.validate(), Error);
    c = TrainConfig{};
    c.data_subsample = 1.5;
    CHECK_THROWS_AS(c.validate(), Error);
    c = TrainConfig{};
    c.num_classes = 1;
    CHECK_THROWS_AS(c.validate(), Error);
    CHECK_NOTHROW(TrainConfig{}.validate());
  }

  TEST_CASE("class weights raise the weighted class recall on overlapping data") {
    const auto train = blobs(3, 150, 2.2, 11);
    const auto test = blobs(3, 300, 2.2, 12);
    TrainConfig cfg;
    cfg.num_classes = 3;
    cfg.n_iterations = 40;
    cfg.eta = 0.1;
    auto recall = [&](const GbtModel& m) {
      int hit = 0, n = 0;
      for (std::size_t i = 0; i < test.rows; ++i) {
        if (test.y[i] != 2) continue;
        ++n;
        hit += m.predict_label(test.row(i)) == 2 ? 1 : 0;
      }
      return static_cast<double>(hit) / n;
    };
    const double base = recall(fit(train, cfg));
    cfg.class_weights = {1.0, 1.0, 3.0};
    CHECK(recall(fit(train, cfg)) > base);
  }
}
