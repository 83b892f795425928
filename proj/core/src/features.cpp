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

#include "floss/features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "floss/error.hpp"
#include "floss/fft.hpp"

namespace floss {
namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> symmetric_tukey(std::size_t m, double alpha) {
  std::vector<double> w(m, 1.0);
  if (m <= 1 || alpha <= 0.0) return w;
  alpha = std::min(alpha, 1.0);
  for (std::size_t n = 0; n < m; ++n) {
    const double x = static_cast<double>(n) / static_cast<double>(m - 1);
    if (x < alpha / 2.0) {
      w[n] = 0.5 * (1.0 + std::cos(2.0 * kPi / alpha * (x - alpha / 2.0)));
    } else if (x > 1.0 - alpha / 2.0) {
      w[n] = 0.5 * (1.0 + std::cos(2.0 * kPi / alpha * (x - 1.0 + alpha / 2.0)));
    }
  }
  return w;
}

double sum_sq(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

}  // namespace

std::vector<double> tukey_window(std::size_t n, double alpha) {
  auto w = symmetric_tukey(n + 1, alpha);
  w.pop_back();
  return w;
}

std::vector<double> hann_window(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i)
    w[i] = 0.5 - 0.5 * std::cos(2.0 * kPi * static_cast<double>(i) / static_cast<double>(n));
  return w;
}

std::vector<double> acc_norm(const TriAxialAcc& acc) {
  if (acc.ay.size() != acc.ax.size() || acc.az.size() != acc.ax.size())
    throw Error(ErrorCode::LengthMismatchEegAcc, "ACC axes differ in length");
  std::vector<double> out(acc.ax.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = std::sqrt(acc.ax[i] * acc.ax[i] + acc.ay[i] * acc.ay[i] + acc.az[i] * acc.az[i]);
  return out;
}

Matrix spectrogram(std::span<const double> x, const SpectrogramConfig& cfg) {
  if (cfg.segment_len == 0 || cfg.hop == 0 || cfg.hop > cfg.segment_len)
    throw Error(ErrorCode::InvalidArgument, "spectrogram needs 0 < hop <= segment_len");
  if (x.size() < cfg.segment_len)
    throw Error(ErrorCode::SegmentTooShort,
                std::to_string(x.size()) + " < " + std::to_string(cfg.segment_len));
  const auto window = tukey_window(cfg.segment_len, cfg.taper);
  Matrix s(cfg.frames(x.size()), cfg.bins());
  std::vector<double> frame(cfg.segment_len);
  std::vector<double> power(cfg.segment_len / 2 + 1);
  for (std::size_t t = 0; t < s.rows; ++t) {
    const std::size_t offset = t * cfg.hop;
    for (std::size_t i = 0; i < cfg.segment_len; ++i) frame[i] = x[offset + i] * window[i];
    fft::rfft_power(frame, power);
    if (cfg.one_sided) {
      std::copy(power.begin(), power.end(), s.data.begin() + static_cast<std::ptrdiff_t>(t * s.cols));
    } else {
      for (std::size_t k = 0; k < s.cols; ++k)
        s(t, k) = power[k <= cfg.segment_len / 2 ? k : cfg.segment_len - k];
    }
  }
  return s;
}

Matrix resample_frames(const Matrix& m, std::size_t target_rows) {
  if (m.rows == target_rows || m.rows == 0) {
    if (m.rows == 0 && target_rows != 0) return Matrix(target_rows, m.cols);
    return m;
  }
  Matrix out(target_rows, m.cols);
  const double scale = static_cast<double>(m.rows) / static_cast<double>(target_rows);
  for (std::size_t j = 0; j < target_rows; ++j) {
    const double a = static_cast<double>(j) * scale;
    const double b = static_cast<double>(j + 1) * scale;
    double total = 0.0;
    for (auto r = static_cast<std::size_t>(std::floor(a)); r < m.rows && static_cast<double>(r) < b; ++r) {
      const double weight = std::min(b, static_cast<double>(r + 1)) - std::max(a, static_cast<double>(r));
      if (weight <= 0.0) continue;
      total += weight;
      for (std::size_t c = 0; c < m.cols; ++c) out(j, c) += weight * m(r, c);
    }
    if (total > 0.0)
      for (std::size_t c = 0; c < m.cols; ++c) out(j, c) /= total;
  }
  return out;
}

std::vector<double> spectrogram_features(std::span<const double> eeg,
                                         std::optional<std::span<const double>> anorm,
                                         const SpectrogramConfig& cfg) {
  const Matrix e = spectrogram(eeg, cfg);
  std::vector<double> out;
  out.reserve(2 * e.data.size());
  out.insert(out.end(), e.data.begin(), e.data.end());
  if (anorm) {
    if (anorm->size() != eeg.size())
      throw Error(ErrorCode::LengthMismatchEegAcc, "EEG and ACC-norm segments differ in length");
    const Matrix a = spectrogram(*anorm, cfg);
    out.insert(out.end(), a.data.begin(), a.data.end());
  } else {
    out.resize(2 * e.data.size(), 0.0);
  }
  return out;
}

Psd welch_psd(std::span<const double> x, int fs, std::size_t segment_len, std::size_t overlap) {
  if (segment_len == 0 || overlap >= segment_len)
    throw Error(ErrorCode::InvalidArgument, "welch needs overlap < segment_len");
  if (x.size() < segment_len)
    throw Error(ErrorCode::SegmentTooShort,
                std::to_string(x.size()) + " < " + std::to_string(segment_len));
  const auto window = hann_window(segment_len);
  const double scale = 1.0 / (fs * sum_sq(window));
  const std::size_t step = segment_len - overlap;
  const std::size_t n_seg = (x.size() - segment_len) / step + 1;
  const std::size_t n_bins = segment_len / 2 + 1;

  Psd out;
  out.freqs.resize(n_bins);
  out.psd.assign(n_bins, 0.0);
  for (std::size_t k = 0; k < n_bins; ++k)
    out.freqs[k] = static_cast<double>(k) * fs / static_cast<double>(segment_len);

  std::vector<double> frame(segment_len), power(n_bins);
  for (std::size_t s = 0; s < n_seg; ++s) {
    const auto seg = x.subspan(s * step, segment_len);
    const double mean = std::accumulate(seg.begin(), seg.end(), 0.0) / static_cast<double>(segment_len);
    for (std::size_t i = 0; i < segment_len; ++i) frame[i] = (seg[i] - mean) * window[i];
    fft::rfft_power(frame, power);
    for (std::size_t k = 0; k < n_bins; ++k) out.psd[k] += power[k];
  }
  const bool even = segment_len % 2 == 0;
  for (std::size_t k = 0; k < n_bins; ++k) {
    double v = out.psd[k] * scale / static_cast<double>(n_seg);
    if (k != 0 && !(even && k == n_bins - 1)) v *= 2.0;
    out.psd[k] = v;
  }
  return out;
}

std::array<double, kBands.size()> band_powers(const Psd& psd) {
  std::array<double, kBands.size()> out{};
  const double df = psd.df();
  for (std::size_t b = 0; b < kBands.size(); ++b) {
    for (std::size_t k = 0; k < psd.freqs.size(); ++k) {
      if (psd.freqs[k] >= kBands[b].lo_hz && psd.freqs[k] < kBands[b].hi_hz)
        out[b] += psd.psd[k] * df;
    }
  }
  return out;
}

std::string_view stat_feature_name(std::size_t index) {
  static constexpr std::array<std::string_view, kStatFeatureCount> kNames{
      "mean", "median", "std", "variance", "min", "max", "peak_to_peak", "rms",
      "skewness", "kurtosis", "zero_crossings", "mean_abs_diff", "hjorth_activity",
      "hjorth_mobility", "hjorth_complexity", "spectral_centroid", "spectral_entropy",
      "total_power", "band_delta", "band_theta", "band_alpha", "band_sigma",
      "band_beta", "band_high"};
  return index < kNames.size() ? kNames[index] : "?";
}

StatFeatureSet stat_features(std::span<const double> x, int fs) {
  if (x.size() < 2) throw Error(ErrorCode::SegmentTooShort, "stat_features needs >= 2 samples");
  StatFeatureSet f{};
  const double n = static_cast<double>(x.size());

  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : x) {
    const double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;

  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = sorted.size() / 2;
  const double median = sorted.size() % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);

  // Exactly-constant input must report zero spread.
  const bool flat = sorted.front() == sorted.back();
  if (flat) m2 = m3 = m4 = 0.0;

  f[kMean] = mean;
  f[kMedian] = median;
  f[kVariance] = m2;
  f[kStd] = std::sqrt(m2);
  f[kMin] = sorted.front();
  f[kMax] = sorted.back();
  f[kPeakToPeak] = sorted.back() - sorted.front();
  f[kRms] = std::sqrt(sum_sq(x) / n);
  f[kSkewness] = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
  f[kKurtosis] = m2 > 0.0 ? m4 / (m2 * m2) - 3.0 : 0.0;

  double crossings = 0.0, abs_diff = 0.0;
  std::vector<double> dx(x.size() - 1);
  for (std::size_t i = 1; i < x.size(); ++i) {
    if ((x[i - 1] < 0.0) != (x[i] < 0.0)) crossings += 1.0;
    dx[i - 1] = x[i] - x[i - 1];
    abs_diff += std::abs(dx[i - 1]);
  }
  f[kZeroCrossings] = crossings;
  f[kMeanAbsDiff] = abs_diff / static_cast<double>(dx.size());

  auto variance = [](std::span<const double> v) {
    if (v.empty()) return 0.0;
    const double m = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double s = 0.0;
    for (double a : v) s += (a - m) * (a - m);
    return s / static_cast<double>(v.size());
  };
  std::vector<double> ddx(dx.size() > 0 ? dx.size() - 1 : 0);
  for (std::size_t i = 1; i < dx.size(); ++i) ddx[i - 1] = dx[i] - dx[i - 1];
  const double var_dx = flat ? 0.0 : variance(dx);
  const double var_ddx = flat ? 0.0 : variance(ddx);
  const double mobility = m2 > 0.0 ? std::sqrt(var_dx / m2) : 0.0;
  const double mobility_dx = var_dx > 0.0 ? std::sqrt(var_ddx / var_dx) : 0.0;
  f[kHjorthActivity] = m2;
  f[kHjorthMobility] = mobility;
  f[kHjorthComplexity] = mobility > 0.0 ? mobility_dx / mobility : 0.0;

  const std::size_t seg = std::min<std::size_t>(256, x.size());
  const Psd psd = welch_psd(x, fs, seg, seg / 2);
  double total = 0.0, weighted = 0.0;
  for (std::size_t k = 0; k < psd.psd.size(); ++k) {
    total += psd.psd[k];
    weighted += psd.freqs[k] * psd.psd[k];
  }
  double entropy = 0.0;
  if (total > 0.0) {
    for (double p : psd.psd) {
      const double q = p / total;
      if (q > 0.0) entropy -= q * std::log(q);
    }
    if (psd.psd.size() > 1) entropy /= std::log(static_cast<double>(psd.psd.size()));
  }
  f[kSpectralCentroid] = total > 0.0 ? weighted / total : 0.0;
  f[kSpectralEntropy] = entropy;
  f[kTotalPower] = total * psd.df();
  const auto bands = band_powers(psd);
  for (std::size_t b = 0; b < bands.size(); ++b) f[kBandDelta + b] = bands[b];
  return f;
}

std::size_t FeatureLayout::size() const {
  std::size_t n = 0;
  for (const auto& b : blocks) n += b.length;
  return n;
}

std::vector<std::string> FeatureLayout::column_names() const {
  std::vector<std::string> names;
  names.reserve(size());
  for (const auto& b : blocks) {
    const bool stats = b.name.rfind("stats-", 0) == 0;
    const bool welch = b.name.rfind("welch-", 0) == 0;
    for (std::size_t i = 0; i < b.length; ++i) {
      if (b.rows > 0 && b.cols > 0) {
        names.push_back(b.name + "[t" + std::to_string(i / b.cols) + ",f" +
                        std::to_string(i % b.cols) + "]");
      } else if (stats) {
        names.push_back(b.name + "." + std::string(stat_feature_name(i)));
      } else if (welch) {
        names.push_back(b.name + "." + std::string(kBands[i % kBands.size()].name));
      } else {
        names.push_back(b.name + "[" + std::to_string(i) + "]");
      }
    }
  }
  return names;
}

std::string FeatureLayout::to_json() const {
  nlohmann::ordered_json j;
  j["kind"] = kind;
  j["mode"] = mode;
  j["fs"] = fs;
  j["epoch_len_s"] = epoch_len_s;
  j["spectrogram"] = {{"segment_len", spectrogram.segment_len},
                      {"hop", spectrogram.hop},
                      {"taper", spectrogram.taper},
                      {"one_sided", spectrogram.one_sided}};
  auto arr = nlohmann::ordered_json::array();
  for (const auto& b : blocks)
    arr.push_back({{"name", b.name}, {"length", b.length}, {"rows", b.rows}, {"cols", b.cols}});
  j["blocks"] = arr;
  return j.dump();
}

FeatureLayout FeatureLayout::from_json(std::string_view text) {
  FeatureLayout l;
  try {
    const auto j = nlohmann::json::parse(text);
    l.kind = j.at("kind").get<std::string>();
    l.mode = j.at("mode").get<std::string>();
    l.fs = j.at("fs").get<int>();
    l.epoch_len_s = j.at("epoch_len_s").get<double>();
    const auto& s = j.at("spectrogram");
    l.spectrogram.fs = l.fs;
    l.spectrogram.segment_len = s.at("segment_len").get<std::size_t>();
    l.spectrogram.hop = s.at("hop").get<std::size_t>();
    l.spectrogram.taper = s.at("taper").get<double>();
    l.spectrogram.one_sided = s.at("one_sided").get<bool>();
    for (const auto& b : j.at("blocks")) {
      l.blocks.push_back({b.at("name").get<std::string>(), b.at("length").get<std::size_t>(),
                          b.at("rows").get<std::size_t>(), b.at("cols").get<std::size_t>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ModelIncompatible, std::string("feature layout: ") + e.what());
  }
  return l;
}

bool FeatureLayout::operator==(const FeatureLayout& o) const {
  if (kind != o.kind || mode != o.mode || fs != o.fs || epoch_len_s != o.epoch_len_s ||
      blocks.size() != o.blocks.size())
    return false;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (blocks[i].name != o.blocks[i].name || blocks[i].length != o.blocks[i].length)
      return false;
  }
  return true;
}

FeatureLayout usability_layout(int fs, double epoch_len_s, bool lite) {
  FeatureLayout l;
  l.kind = "usability";
  l.mode = lite ? "lite" : "full";
  l.fs = fs;
  l.epoch_len_s = epoch_len_s;
  l.spectrogram.fs = fs;
  // One-second segments with 1/8 overlap; 256/224 at the native 256 Hz.
  l.spectrogram.segment_len = static_cast<std::size_t>(fs);
  l.spectrogram.hop = static_cast<std::size_t>(fs) - static_cast<std::size_t>(fs) / 8;
  const auto n = static_cast<std::size_t>(std::llround(fs * epoch_len_s));
  const std::size_t rows = l.spectrogram.frames(n);
  const std::size_t cols = l.spectrogram.bins();
  l.blocks.push_back({"spectrogram-eeg", rows * cols, rows, cols});
  l.blocks.push_back({"spectrogram-acc", rows * cols, rows, cols});
  if (!lite) {
    l.blocks.push_back({"stats-eeg", kStatFeatureCount, 0, 0});
    l.blocks.push_back({"stats-acc", kStatFeatureCount, 0, 0});
  }
  return l;
}

FeatureLayout mobility_layout(int fs, double epoch_len_s, bool welch) {
  FeatureLayout l;
  l.kind = "mobility";
  l.mode = welch ? "welch" : "stat";
  l.fs = fs;
  l.epoch_len_s = epoch_len_s;
  l.spectrogram.fs = fs;
  for (const char* axis : {"x", "y", "z"}) {
    if (welch) l.blocks.push_back({std::string("welch-acc") + axis, kBands.size(), 0, 0});
    else l.blocks.push_back({std::string("stats-acc") + axis, kStatFeatureCount, 0, 0});
  }
  return l;
}

std::vector<double> usability_features(std::span<const double> eeg,
                                       std::optional<std::span<const double>> anorm,
                                       const FeatureLayout& layout) {
  if (layout.kind != "usability" || layout.blocks.size() < 2)
    throw Error(ErrorCode::ModelIncompatible, "not a usability feature layout");
  if (anorm && anorm->size() != eeg.size())
    throw Error(ErrorCode::LengthMismatchEegAcc, "EEG and ACC-norm segments differ in length");
  const auto& spec_block = layout.blocks[0];
  SpectrogramConfig cfg = layout.spectrogram;
  cfg.fs = layout.fs;

  std::vector<double> out;
  out.reserve(layout.size());
  auto append_spectrogram = [&](std::span<const double> x) {
    const Matrix m = resample_frames(spectrogram(x, cfg), spec_block.rows);
    out.insert(out.end(), m.data.begin(), m.data.end());
  };
  append_spectrogram(eeg);
  if (anorm) append_spectrogram(*anorm);
  else out.resize(out.size() + spec_block.length, 0.0);

  if (layout.mode == "full") {
    const auto se = stat_features(eeg, layout.fs);
    out.insert(out.end(), se.begin(), se.end());
    if (anorm) {
      const auto sa = stat_features(*anorm, layout.fs);
      out.insert(out.end(), sa.begin(), sa.end());
    } else {
      out.resize(out.size() + kStatFeatureCount, 0.0);
    }
  }
  return out;
}

std::vector<double> mobility_features(std::span<const double> ax, std::span<const double> ay,
                                      std::span<const double> az, const FeatureLayout& layout) {
  if (layout.kind != "mobility")
    throw Error(ErrorCode::ModelIncompatible, "not a mobility feature layout");
  std::vector<double> out;
  out.reserve(layout.size());
  for (auto axis : {ax, ay, az}) {
    if (layout.mode == "welch") {
      const std::size_t seg = std::min<std::size_t>(static_cast<std::size_t>(layout.fs), axis.size());
      const auto bp = band_powers(welch_psd(axis, layout.fs, seg, seg / 2));
      out.insert(out.end(), bp.begin(), bp.end());
    } else {
      const auto s = stat_features(axis, layout.fs);
      out.insert(out.end(), s.begin(), s.end());
    }
  }
  return out;
}

std::string write_feature_csv(const FeatureLayout& layout,
                              const std::vector<std::vector<double>>& rows,
                              const std::vector<int>* labels) {
  std::ostringstream out;
  out.precision(17);
  const auto names = layout.column_names();
  for (std::size_t i = 0; i < names.size(); ++i) out << (i ? "," : "") << '"' << names[i] << '"';
  if (labels) out << ",label";
  out << '\n';
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t i = 0; i < rows[r].size(); ++i) out << (i ? "," : "") << rows[r][i];
    if (labels) out << ',' << (*labels)[r];
    out << '\n';
  }
  return out.str();
}

}  // namespace floss
