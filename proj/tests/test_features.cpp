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
#include <numbers>
#include <numeric>
#include <random>

#include "floss/error.hpp"
#include "floss/features.hpp"
#include "oracles.hpp"

using namespace floss;

namespace {

std::vector<double> tone(double f, std::size_t n, double fs = 256.0, double amp = 1.0) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = amp * std::sin(2.0 * std::numbers::pi * f * static_cast<double>(i) / fs);
  return x;
}

std::vector<double> white(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0.0, 1.0);
  std::vector<double> x(n);
  for (double& v : x) v = d(rng);
  return x;
}

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

}  // namespace

TEST_SUITE("features") {
  TEST_CASE("acc norm") {
    TriAxialAcc a{{1.0, 3.0, 0.0}, {0.0, 4.0, 0.0}, {0.0, 0.0, 1.0}, {}, {}, {}};
    const auto n = acc_norm(a);
    CHECK(n[0] == 1.0);
    CHECK(n[1] == 5.0);
    CHECK(n[2] == 1.0);
  }

  TEST_CASE("acc norm is invariant to axis permutation and sign") {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> d(0.0, 1.0);
    TriAxialAcc a;
    for (int i = 0; i < 100; ++i) {
      a.ax.push_back(d(rng));
      a.ay.push_back(d(rng));
      a.az.push_back(d(rng));
    }
    TriAxialAcc b;
    b.ax = a.az;
    b.ay = a.ax;
    b.az = a.ay;
    for (double& v : b.ay) v = -v;
    const auto na = acc_norm(a), nb = acc_norm(b);
    for (std::size_t i = 0; i < na.size(); ++i) CHECK(na[i] == doctest::Approx(nb[i]).epsilon(1e-15));
  }

  TEST_CASE("tukey window matches its piecewise definition") {
    const auto w = tukey_window(256, 0.25);
    const auto o = oracle::tukey(256, 0.25);
    for (std::size_t i = 0; i < 256; ++i) CHECK(w[i] == doctest::Approx(o[i]).epsilon(1e-12));
  }

  TEST_CASE("spectrogram shape for a 10 s epoch") {
    const Matrix s = spectrogram(white(2560, 1), SpectrogramConfig{});
    CHECK(s.rows == 11);
    CHECK(s.cols == 129);
    CHECK_THROWS_AS(spectrogram(white(255, 1), SpectrogramConfig{}), Error);
  }

  TEST_CASE("constant signal puts all power in bin 0") {
    SpectrogramConfig rect;
    rect.taper = 0.0;
    const Matrix s = spectrogram(std::vector<double>(2560, 3.0), rect);
    for (std::size_t t = 0; t < s.rows; ++t)
      for (std::size_t k = 1; k < s.cols; ++k) CHECK(s(t, k) < 1e-9 * s(t, 0));
  }

  TEST_CASE("tapered constant signal carries only the window's own spectrum") {
    // With the default taper a DC input leaks exactly c^2 |W(k)|^2 into
    // the low bins; nothing else appears.
    const Matrix s = spectrogram(std::vector<double>(2560, 3.0), SpectrogramConfig{});
    const auto w = oracle::dft_one_sided(oracle::tukey(256, 0.25));
    for (std::size_t t = 0; t < s.rows; ++t)
      for (std::size_t k = 0; k < s.cols; ++k)
        CHECK(s(t, k) == doctest::Approx(9.0 * std::norm(w[k])).epsilon(1e-9).scale(s(t, 0)));
  }

  TEST_CASE("spectrogram frames equal a direct DFT of the tapered frame") {
    const auto x = tone(8.0, 2560);
    const SpectrogramConfig cfg;
    const Matrix s = spectrogram(x, cfg);
    const auto w = oracle::tukey(256, 0.25);
    for (std::size_t t : {std::size_t{0}, std::size_t{5}, std::size_t{10}}) {
      std::vector<double> frame(256);
      for (std::size_t i = 0; i < 256; ++i) frame[i] = x[t * 224 + i] * w[i];
      const auto X = oracle::dft_one_sided(frame);
      std::size_t arg = 0;
      for (std::size_t k = 0; k < X.size(); ++k) {
        CHECK(s(t, k) == doctest::Approx(std::norm(X[k])).epsilon(1e-9).scale(1e-6));
        if (s(t, k) > s(t, arg)) arg = k;
      }
      CHECK(arg == 8);
    }
  }

  TEST_CASE("spectrogram energy scaling and nonnegativity") {
    const auto x = white(2560, 3);
    std::vector<double> y(x);
    const double a = 3.5;
    for (double& v : y) v *= a;
    const Matrix sx = spectrogram(x, SpectrogramConfig{}), sy = spectrogram(y, SpectrogramConfig{});
    double e1 = 0.0, e2 = 0.0, q1 = 0.0, q2 = 0.0;
    for (std::size_t i = 0; i < sx.data.size(); ++i) {
      CHECK(sx.data[i] >= 0.0);
      e1 += sx.data[i];
      e2 += sy.data[i];
      q1 += sx.data[i] * sx.data[i];
      q2 += sy.data[i] * sy.data[i];
    }
    CHECK(e2 == doctest::Approx(a * a * e1).epsilon(1e-10));
    CHECK(q2 == doctest::Approx(std::pow(a, 4) * q1).epsilon(1e-10));
  }

  TEST_CASE("spectrogram features flatten EEG then ACC row by row") {
    const auto eeg = white(2560, 4);
    std::vector<double> an(2560, 1.0);
    const SpectrogramConfig cfg;
    const auto f = spectrogram_features(eeg, std::span<const double>(an), cfg);
    CHECK(f.size() == 2838);
    const Matrix s = spectrogram(eeg, cfg);
    for (std::size_t t = 0; t < s.rows; ++t)
      for (std::size_t k = 0; k < s.cols; ++k) CHECK(f[t * s.cols + k] == s(t, k));
    const auto no_acc = spectrogram_features(eeg, std::nullopt, cfg);
    CHECK(no_acc.size() == 2838);
    for (std::size_t i = 1419; i < 2838; ++i) CHECK(no_acc[i] == 0.0);
  }

  TEST_CASE("frame resampling preserves a constant map and its identity") {
    Matrix m(11, 3);
    for (double& v : m.data) v = 2.0;
    const Matrix r = resample_frames(m, 5);
    CHECK(r.rows == 5);
    for (double v : r.data) CHECK(v == doctest::Approx(2.0));
    const Matrix same = resample_frames(m, 11);
    CHECK(same.data == m.data);
    // Mean over frames is preserved by area weighting.
    Matrix g(4, 1);
    for (std::size_t i = 0; i < 4; ++i) g(i, 0) = static_cast<double>(i);
    const Matrix up = resample_frames(g, 6);
    double mean = 0.0;
    for (double v : up.data) mean += v / 6.0;
    CHECK(mean == doctest::Approx(1.5));
  }

  TEST_CASE("stat features of a constant") {
    const auto f = stat_features(std::vector<double>(2560, 4.0), 256);
    CHECK(f[kMean] == doctest::Approx(4.0));
    CHECK(f[kStd] == 0.0);
    CHECK(f[kZeroCrossings] == 0.0);
    CHECK(f[kHjorthMobility] == 0.0);
    for (std::size_t b = kBandDelta; b <= kBandHigh; ++b) CHECK(f[b] >= 0.0);
  }

  TEST_CASE("stat features of a 10 Hz tone") {
    const auto f = stat_features(tone(10.0, 2560), 256);
    CHECK(std::abs(f[kSpectralCentroid] - 10.0) <= 0.5);
    for (std::size_t b = kBandDelta; b <= kBandHigh; ++b)
      if (b != kBandAlpha) CHECK(f[kBandAlpha] > f[b]);
    CHECK(f[kRms] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-3));
  }

  TEST_CASE("stat features of white noise") {
    const auto f = stat_features(white(2560, 9), 256);
    CHECK(std::abs(f[kMean]) <= 0.1);
    CHECK(f[kVariance] >= 0.85);
    CHECK(f[kVariance] <= 1.15);
    CHECK(std::abs(f[kKurtosis]) < 0.5);  // excess kurtosis of a Gaussian is 0
    CHECK(stat_feature_name(kHjorthComplexity) == "hjorth_complexity");
  }

  TEST_CASE("welch psd: white noise is flat, tone is peaked, zero is zero") {
    const auto x = white(256 * 600, 12);
    const Psd p = welch_psd(x, 256);
    double mean = 0.0;
    for (std::size_t k = 1; k + 1 < p.psd.size(); ++k) mean += p.psd[k];
    mean /= static_cast<double>(p.psd.size() - 2);
    for (std::size_t k = 1; k + 1 < p.psd.size(); ++k) CHECK(std::abs(10.0 * std::log10(p.psd[k] / mean)) <= 3.0);
    // Parseval with density scaling.
    CHECK(sum(p.psd) * p.df() == doctest::Approx(1.0).epsilon(0.05));

    const Psd t = welch_psd(tone(8.0, 2560), 256);
    std::size_t arg = 0;
    for (std::size_t k = 0; k < t.psd.size(); ++k)
      if (t.psd[k] > t.psd[arg]) arg = k;
    CHECK(t.freqs[arg] == doctest::Approx(8.0));

    const Psd z = welch_psd(std::vector<double>(2560, 0.0), 256);
    for (double v : z.psd) CHECK(v == 0.0);
    CHECK_THROWS_AS(welch_psd(std::vector<double>(100, 0.0), 256), Error);
  }

  TEST_CASE("feature layouts") {
    const auto full = usability_layout(256, 10.0, false);
    CHECK(full.size() == 2838 + 48);
    const auto lite = usability_layout(256, 10.0, true);
    CHECK(lite.size() == 2838);
    CHECK(lite.column_names().size() == 2838);
    const auto back = FeatureLayout::from_json(full.to_json());
    CHECK(back == full);
    CHECK(mobility_layout(256, 10.0, true).size() == 18);
    CHECK(mobility_layout(256, 10.0, false).size() == 72);
  }

  TEST_CASE("usability features keep the model's length at other epoch lengths") {
    const auto layout = usability_layout(256, 10.0, false);
    for (double len : {5.0, 10.0, 15.0, 30.0, 60.0}) {
      const auto n = static_cast<std::size_t>(len * 256);
      const auto x = white(n, 3);
      std::vector<double> an(n, 1.0);
      const auto f = usability_features(x, std::span<const double>(an), layout);
      CHECK(f.size() == layout.size());
      for (double v : f) CHECK(std::isfinite(v));
    }
  }

  TEST_CASE("feature csv header matches the layout") {
    const auto layout = mobility_layout(256, 10.0, true);
    const std::vector<std::vector<double>> rows{std::vector<double>(18, 1.0)};
    const std::vector<int> labels{2};
    const auto csv = write_feature_csv(layout, rows, &labels);
    const auto header = csv.substr(0, csv.find('\n'));
    CHECK(std::count(header.begin(), header.end(), ',') == 18);
  }
}
