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

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "floss/signal_io.hpp"

namespace floss {

// Dense row-major matrix; rows are STFT frames, columns frequency bins.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

struct SpectrogramConfig {
  int fs = 256;
  std::size_t segment_len = 256;
  std::size_t hop = 224;
  double taper = 0.25;  // Tukey fraction; 0 is rectangular, 1 is Hann
  bool one_sided = true;

  std::size_t bins() const { return one_sided ? segment_len / 2 + 1 : segment_len; }
  std::size_t frames(std::size_t n) const {
    return n < segment_len ? 0 : (n - segment_len) / hop + 1;
  }
};

// Periodic (DFT-even) windows.
std::vector<double> tukey_window(std::size_t n, double alpha);
std::vector<double> hann_window(std::size_t n);

std::vector<double> acc_norm(const TriAxialAcc& acc);

// Power spectrogram |X(t, f)|^2 of the tapered frames (no detrend, no
// density scaling). Throws SegmentTooShort when x is shorter than a segment.
Matrix spectrogram(std::span<const double> x, const SpectrogramConfig& cfg);

// Area-weighted resampling of the frame axis to `target_rows` frames.
Matrix resample_frames(const Matrix& m, std::size_t target_rows);

// EEG spectrogram then ACC spectrogram, each flattened row by row. Absent ACC
// becomes a zero block of the same size.
std::vector<double> spectrogram_features(std::span<const double> eeg,
                                         std::optional<std::span<const double>> anorm,
                                         const SpectrogramConfig& cfg);

struct Psd {
  std::vector<double> freqs;
  std::vector<double> psd;
  double df() const { return freqs.size() > 1 ? freqs[1] - freqs[0] : 0.0; }
};

// Welch averaged periodogram: Hann segments, constant detrend, one-sided
// density scaling so that sum(psd) * df approximates the variance.
Psd welch_psd(std::span<const double> x, int fs, std::size_t segment_len = 256,
              std::size_t overlap = 128);

struct Band {
  std::string_view name;
  double lo_hz;
  double hi_hz;
};
inline constexpr std::array<Band, 6> kBands{{
    {"delta", 0.5, 4.0},
    {"theta", 4.0, 8.0},
    {"alpha", 8.0, 12.0},
    {"sigma", 12.0, 16.0},
    {"beta", 16.0, 30.0},
    {"high", 30.0, 48.0},
}};

// Power integrated over [lo, hi) of each band.
std::array<double, kBands.size()> band_powers(const Psd& psd);

inline constexpr std::size_t kStatFeatureCount = 24;
using StatFeatureSet = std::array<double, kStatFeatureCount>;

enum StatFeature : std::size_t {
  kMean, kMedian, kStd, kVariance, kMin, kMax, kPeakToPeak, kRms, kSkewness,
  kKurtosis, kZeroCrossings, kMeanAbsDiff, kHjorthActivity, kHjorthMobility,
  kHjorthComplexity, kSpectralCentroid, kSpectralEntropy, kTotalPower,
  kBandDelta, kBandTheta, kBandAlpha, kBandSigma, kBandBeta, kBandHigh,
};

std::string_view stat_feature_name(std::size_t index);

StatFeatureSet stat_features(std::span<const double> x, int fs);

// Index -> meaning descriptor for a flat feature vector.
struct FeatureBlock {
  std::string name;
  std::size_t length = 0;
  std::size_t rows = 0;  // frames, for spectrogram blocks
  std::size_t cols = 0;  // bins, for spectrogram blocks
};

struct FeatureLayout {
  std::string kind;  // "usability" or "mobility"
  std::string mode;  // usability: "full" | "lite"; mobility: "stat" | "welch"
  int fs = 256;
  double epoch_len_s = 10.0;
  SpectrogramConfig spectrogram;
  std::vector<FeatureBlock> blocks;

  std::size_t size() const;
  std::vector<std::string> column_names() const;
  std::string to_json() const;
  static FeatureLayout from_json(std::string_view text);
  bool operator==(const FeatureLayout& other) const;
};

FeatureLayout usability_layout(int fs, double epoch_len_s, bool lite);
FeatureLayout mobility_layout(int fs, double epoch_len_s, bool welch);

// Features of one usability epoch. Epochs whose length differs from the
// layout's are mapped onto its frame count.
std::vector<double> usability_features(std::span<const double> eeg,
                                       std::optional<std::span<const double>> anorm,
                                       const FeatureLayout& layout);

// Features of one mobility epoch from the three ACC axes.
std::vector<double> mobility_features(std::span<const double> ax, std::span<const double> ay,
                                      std::span<const double> az, const FeatureLayout& layout);

// CSV with one header cell per column of the layout and an optional label column.
std::string write_feature_csv(const FeatureLayout& layout,
                              const std::vector<std::vector<double>>& rows,
                              const std::vector<int>* labels = nullptr);

}  // namespace floss
