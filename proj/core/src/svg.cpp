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

#include "floss/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "floss/aggregate.hpp"
#include "floss/epoching.hpp"
#include "floss/error.hpp"
#include "floss/features.hpp"

namespace floss {
namespace {

constexpr double kWidth = 1200.0;
constexpr double kLeft = 110.0;
constexpr double kRight = 20.0;
constexpr double kPlotWidth = kWidth - kLeft - kRight;
constexpr std::size_t kMaxColumns = 300;
constexpr std::size_t kMaxTracePoints = 1500;
constexpr double kHeatmapMaxHz = 32.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s(buf);
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  if (s == "-0") s = "0";
  return s;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string header(double height) {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n"
         "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + num(kWidth) + "\" height=\"" +
         num(height) + "\" viewBox=\"0 0 " + num(kWidth) + " " + num(height) + "\">\n"
         "<rect x=\"0\" y=\"0\" width=\"" + num(kWidth) + "\" height=\"" + num(height) + "\" fill=\"#ffffff\"/>\n";
}

std::string label(double y, const std::string& text) {
  return "<text x=\"" + num(kLeft - 8) + "\" y=\"" + num(y) +
         "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" + escape(text) + "</text>\n";
}

const char* usability_color(int label, int num_classes) {
  static constexpr std::array<const char*, 5> kColors{"#4daf4a", "#999999", "#e41a1c", "#ff7f00", "#984ea3"};
  if (num_classes == 2) return label == 0 ? kColors[0] : "#e41a1c";
  return kColors[static_cast<std::size_t>(std::clamp(label, 0, 4))];
}

const char* mobility_color(MobilityLabel m) {
  switch (m) {
    case MobilityLabel::Idle: return "#bdbdbd";
    case MobilityLabel::Lying: return "#3182bd";
    case MobilityLabel::Stationary: return "#fdae6b";
    case MobilityLabel::Mobile: return "#de2d26";
  }
  return "#000000";
}

// Viridis-like ramp, t in [0, 1].
std::string ramp(double t) {
  static constexpr std::array<std::array<double, 3>, 5> kStops{{
      {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}}};
  t = std::clamp(t, 0.0, 1.0) * (kStops.size() - 1);
  const auto i = std::min<std::size_t>(static_cast<std::size_t>(t), kStops.size() - 2);
  const double f = t - static_cast<double>(i);
  char buf[8];
  int c[3];
  for (int k = 0; k < 3; ++k)
    c[k] = static_cast<int>(std::lround(kStops[i][k] + f * (kStops[i + 1][k] - kStops[i][k])));
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c[0], c[1], c[2]);
  return buf;
}

// Runs of equal values drawn as one rect each; total span = values.size() * step.
template <typename T, typename ColorFn>
std::string strip(const std::vector<T>& values, double x0, double step, double y, double h, ColorFn color) {
  std::string out;
  for (std::size_t i = 0; i < values.size();) {
    std::size_t j = i;
    while (j < values.size() && values[j] == values[i]) ++j;
    out += "<rect x=\"" + num(x0 + static_cast<double>(i) * step) + "\" y=\"" + num(y) + "\" width=\"" +
           num(static_cast<double>(j - i) * step) + "\" height=\"" + num(h) + "\" fill=\"" + color(values[i]) +
           "\"/>\n";
    i = j;
  }
  return out;
}

std::string trace(const std::vector<double>& x, double y, double h) {
  if (x.empty()) return {};
  const std::size_t points = std::min(x.size(), kMaxTracePoints);
  std::vector<double> v(points, 0.0);
  for (std::size_t p = 0; p < points; ++p) {
    const std::size_t lo = p * x.size() / points, hi = std::max(lo + 1, (p + 1) * x.size() / points);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += x[i];
    v[p] = s / static_cast<double>(hi - lo);
  }
  const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
  const double span = *mx - *mn > 1e-12 ? *mx - *mn : 1.0;
  std::string out = "<polyline class=\"acc-norm\" fill=\"none\" stroke=\"#252525\" stroke-width=\"1\" points=\"";
  for (std::size_t p = 0; p < points; ++p) {
    const double px = kLeft + kPlotWidth * (static_cast<double>(p) + 0.5) / static_cast<double>(points);
    const double py = y + h - h * (v[p] - *mn) / span;
    out += (p ? " " : "") + num(px) + "," + num(py);
  }
  return out + "\"/>\n";
}

std::string heatmap(const std::vector<double>& x, int fs, std::size_t used_samples, double y, double h) {
  const std::size_t seg = static_cast<std::size_t>(fs);
  const std::size_t columns = std::min(kMaxColumns, std::max<std::size_t>(1, used_samples / seg));
  const std::size_t max_bin = std::min<std::size_t>(seg / 2, static_cast<std::size_t>(kHeatmapMaxHz));
  std::vector<std::vector<double>> power(columns);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t c = 0; c < columns; ++c) {
    const std::size_t a = c * used_samples / columns, b = (c + 1) * used_samples / columns;
    power[c].assign(max_bin + 1, 0.0);
    if (b - a >= seg) {
      const Psd psd = welch_psd(std::span<const double>(x.data() + a, b - a), fs, seg, seg / 2);
      // 1 Hz bins at segment length fs.
      for (std::size_t k = 0; k <= max_bin && k < psd.psd.size(); ++k) power[c][k] = std::log10(psd.psd[k] + 1e-12);
    }
    for (double p : power[c]) {
      lo = std::min(lo, p);
      hi = std::max(hi, p);
    }
  }
  const double span = hi - lo > 1e-12 ? hi - lo : 1.0;
  const double cw = kPlotWidth / static_cast<double>(columns);
  const double rh = h / static_cast<double>(max_bin + 1);
  std::string out = "<g class=\"spectrogram\">\n";
  for (std::size_t c = 0; c < columns; ++c) {
    for (std::size_t k = 0; k <= max_bin; ++k) {
      out += "<rect x=\"" + num(kLeft + static_cast<double>(c) * cw) + "\" y=\"" +
             num(y + h - static_cast<double>(k + 1) * rh) + "\" width=\"" + num(cw) + "\" height=\"" + num(rh) +
             "\" fill=\"" + ramp((power[c][k] - lo) / span) + "\"/>\n";
    }
  }
  return out + "</g>\n";
}

}  // namespace

std::string usability_graph_svg(const Recording& rec, const UsabilityScores& scores) {
  if (scores.labels.size() != rec.channels.size())
    throw Error(ErrorCode::LengthMismatch, "one usability sequence per channel required");
  const std::size_t w = window_samples(rec.fs, scores.epoch_len_s);
  const std::size_t epochs = scores.epoch_count();
  for (const auto& l : scores.labels)
    if (l.size() != epochs) throw Error(ErrorCode::LengthMismatch, "channels differ in epoch count");
  if (epochs == 0 || epochs * w > rec.sample_count())
    throw Error(ErrorCode::LengthMismatch, "usability epochs do not fit the recording");
  const std::size_t used = epochs * w;

  constexpr double kTop = 30.0, kAcc = 70.0, kSpec = 90.0, kStrip = 16.0, kGap = 14.0;
  const double height = kTop + (rec.acc ? kAcc + kGap : 0.0) +
                        static_cast<double>(rec.channels.size()) * (kSpec + kStrip + 2 * kGap) + 20.0;
  std::string out = header(height);
  out += "<title>Usability graph</title>\n";
  double y = kTop;
  if (rec.acc) {
    auto anorm = acc_norm(*rec.acc);
    anorm.resize(used);
    out += label(y + kAcc / 2, "ACC norm");
    out += trace(anorm, y, kAcc);
    y += kAcc + kGap;
  }
  const double step = kPlotWidth / static_cast<double>(epochs);
  for (std::size_t c = 0; c < rec.channels.size(); ++c) {
    const auto& ch = rec.channels[c];
    out += label(y + kSpec / 2, ch.label);
    out += heatmap(ch.samples, rec.fs, used, y, kSpec);
    y += kSpec + kGap;
    out += "<g class=\"usability-strip\">\n<title>" + escape(ch.label) + "</title>\n";
    out += strip(scores.labels[c], kLeft, step, y, kStrip,
                 [&](int l) { return std::string(usability_color(l, scores.num_classes)); });
    out += "</g>\n";
    out += label(y + kStrip - 4, "usability");
    y += kStrip + kGap;
  }
  return out + "</svg>\n";
}

int hypnogram_row(int stage) {
  switch (stage) {
    case kWake: return 0;
    case kRem: return 1;
    case 1: return 2;
    case 2: return 3;
    case 3: return 4;
    case kUnscorable: return 5;
  }
  throw Error(ErrorCode::UnknownLabelCode, "sleep stage " + std::to_string(stage));
}

std::string hypnogram_svg(const std::vector<int>& scores, double sleep_epoch_s,
                          const std::vector<MobilityLabel>& mobility, double mobility_epoch_s,
                          const std::optional<TibResult>& tib) {
  if (scores.empty()) throw Error(ErrorCode::LengthMismatch, "no sleep epochs to draw");
  const double total_s = static_cast<double>(scores.size()) * sleep_epoch_s;
  if (!mobility.empty()) {
    const double mob_s = static_cast<double>(mobility.size()) * mobility_epoch_s;
    if (std::abs(mob_s - total_s) > sleep_epoch_s)
      throw Error(ErrorCode::LengthMismatch, "mobility and sleep scores cover different durations");
  }
  constexpr double kTop = 30.0, kRow = 24.0, kStrip = 18.0, kGap = 16.0;
  constexpr std::array<const char*, 6> kRowNames{"W", "REM", "N1", "N2", "N3", "un"};
  const double chart_h = kRow * static_cast<double>(kRowNames.size());
  const double height = kTop + chart_h + kGap + kStrip + 40.0;
  const double px_per_s = kPlotWidth / total_s;

  std::string out = header(height);
  out += "<title>Hypnogram</title>\n";
  for (std::size_t r = 0; r < kRowNames.size(); ++r) {
    const double ry = kTop + kRow * (static_cast<double>(r) + 0.5);
    out += label(ry + 4, kRowNames[r]);
    out += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(ry) + "\" x2=\"" + num(kLeft + kPlotWidth) + "\" y2=\"" +
           num(ry) + "\" stroke=\"#e0e0e0\" stroke-width=\"1\"/>\n";
  }
  out += "<polyline class=\"hypnogram\" fill=\"none\" stroke=\"#08306b\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const double ry = kTop + kRow * (hypnogram_row(scores[i]) + 0.5);
    const double x0 = kLeft + static_cast<double>(i) * sleep_epoch_s * px_per_s;
    const double x1 = kLeft + static_cast<double>(i + 1) * sleep_epoch_s * px_per_s;
    out += (i ? " " : "") + num(x0) + "," + num(ry) + " " + num(x1) + "," + num(ry);
  }
  out += "\"/>\n";

  const double sy = kTop + chart_h + kGap;
  if (!mobility.empty()) {
    out += label(sy + kStrip - 5, "mobility");
    out += "<g class=\"mobility-strip\">\n";
    out += strip(mobility, kLeft, mobility_epoch_s * px_per_s, sy, kStrip,
                 [](MobilityLabel m) { return std::string(mobility_color(m)); });
    out += "</g>\n";
  }
  if (tib) {
    auto marker = [&](double t, const char* cls, const char* text) {
      const double x = kLeft + std::clamp(t, 0.0, total_s) * px_per_s;
      return "<line class=\"" + std::string(cls) + "\" x1=\"" + num(x) + "\" y1=\"" + num(kTop) + "\" x2=\"" +
             num(x) + "\" y2=\"" + num(sy + kStrip) + "\" stroke=\"#000000\" stroke-dasharray=\"4,3\"/>\n" +
             "<text x=\"" + num(x) + "\" y=\"" + num(sy + kStrip + 14) +
             "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\">" + text + "</text>\n";
    };
    out += marker(tib->lights_out_s, "lights-out", "Lights Out");
    out += marker(tib->lights_on_s, "lights-on", "Lights On");
  }
  return out + "</svg>\n";
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::FileUnreadable, "cannot write " + path.string());
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!f) throw Error(ErrorCode::FileUnreadable, "write failed: " + path.string());
}

void emit_usability_graph(const Recording& rec, const UsabilityScores& scores, const std::filesystem::path& path) {
  write_text_file(path, usability_graph_svg(rec, scores));
}

void emit_hypnogram(const std::vector<int>& scores, double sleep_epoch_s, const std::vector<MobilityLabel>& mobility,
                    double mobility_epoch_s, const std::optional<TibResult>& tib, const std::filesystem::path& path) {
  write_text_file(path, hypnogram_svg(scores, sleep_epoch_s, mobility, mobility_epoch_s, tib));
}

}  // namespace floss
