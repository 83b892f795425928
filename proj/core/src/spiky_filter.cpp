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

#include "floss/spiky_filter.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "floss/error.hpp"

namespace floss {
namespace {

using cd = std::complex<double>;

void check_below_nyquist(double f, double fs, const char* what) {
  if (!(f > 0.0) || !(f < fs / 2.0)) {
    throw Error(ErrorCode::FrequencyAboveNyquist,
                std::string(what) + " " + std::to_string(f) + " Hz must lie in (0, " + std::to_string(fs / 2.0) + ")");
  }
}

// Monic polynomial with the given roots, highest power first. Roots come in
// conjugate pairs so the imaginary parts cancel.
std::vector<double> poly_from_roots(const std::vector<cd>& roots) {
  std::vector<cd> c{1.0};
  for (const cd& r : roots) {
    std::vector<cd> next(c.size() + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i] += c[i];
      next[i + 1] -= r * c[i];
    }
    c = std::move(next);
  }
  std::vector<double> out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) out[i] = c[i].real();
  return out;
}

double sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

}  // namespace

ButterworthDesign design_butterworth(double fs, double cutoff_hz, int order) {
  if (order < 1) throw Error(ErrorCode::InvalidArgument, "filter order must be >= 1");
  check_below_nyquist(cutoff_hz, fs, "cutoff");
  ButterworthDesign d;
  d.order = order;
  d.cutoff_hz = cutoff_hz;
  d.fs = fs;
  d.normalized_cutoff = cutoff_hz / (fs / 2.0);
  // Prewarp so the digital -3 dB point lands exactly on the cutoff.
  d.omega_c = 2.0 * fs * std::tan(std::numbers::pi * cutoff_hz / fs);
  const double n = order;
  for (int k = 1; k <= order; ++k) {
    const double theta = (2.0 * k + n - 1.0) * std::numbers::pi / (2.0 * n);
    const cd s = d.omega_c * std::exp(cd(0.0, theta));
    d.analog_poles.push_back(s);
    d.digital_poles.push_back((2.0 * fs + s) / (2.0 * fs - s));
  }
  d.a = poly_from_roots(d.digital_poles);
  d.b = poly_from_roots(std::vector<cd>(static_cast<std::size_t>(order), cd(-1.0, 0.0)));
  // Unit DC gain: B(1) == A(1).
  const double g = sum(d.a) / sum(d.b);
  for (double& x : d.b) x *= g;
  return d;
}

NotchSpec design_notch(double fs, double center_hz, double bw_hz) {
  check_below_nyquist(center_hz, fs, "notch center");
  if (!(bw_hz > 0.0) || bw_hz >= fs) throw Error(ErrorCode::InvalidArgument, "notch bandwidth out of range");
  NotchSpec n;
  n.center_hz = center_hz;
  n.omega_o = center_hz / (fs / 2.0);
  n.bw = bw_hz / (fs / 2.0);
  n.r = 1.0 - n.bw / 2.0;
  n.q = n.omega_o / n.bw;
  // omega_o is in units of nyquist, so the digital angle is pi * omega_o.
  const double c = std::cos(std::numbers::pi * n.omega_o);
  n.a = {1.0, -2.0 * n.r * c, n.r * n.r};
  const double g = sum(n.a) / (2.0 - 2.0 * c);
  n.b = {g, -2.0 * c * g, g};
  return n;
}

std::vector<double> convolve(std::span<const double> x, std::span<const double> y) {
  if (x.empty() || y.empty()) return {};
  std::vector<double> out(x.size() + y.size() - 1, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j) out[i + j] += x[i] * y[j];
  return out;
}

FilterCascade design_cascade(double fs, double cutoff_hz, int order, const std::vector<double>& notch_centers,
                             double bw_hz) {
  FilterCascade c;
  c.fs = fs;
  c.lowpass = design_butterworth(fs, cutoff_hz, order);
  c.b = c.lowpass.b;
  c.a = c.lowpass.a;
  for (double f : notch_centers) {
    NotchSpec n = design_notch(fs, f, bw_hz);
    c.b = convolve(c.b, n.b);
    c.a = convolve(c.a, n.a);
    c.notches.push_back(std::move(n));
  }
  return c;
}

std::vector<std::complex<double>> FilterCascade::poles() const {
  std::vector<cd> out = lowpass.digital_poles;
  for (const auto& n : notches) {
    const double w = std::numbers::pi * n.omega_o;
    out.push_back(std::polar(n.r, w));
    out.push_back(std::polar(n.r, -w));
  }
  return out;
}

std::vector<std::complex<double>> freq_response(std::span<const double> b, std::span<const double> a, double fs,
                                                std::span<const double> freqs_hz) {
  std::vector<cd> out;
  out.reserve(freqs_hz.size());
  for (double f : freqs_hz) {
    const cd zinv = std::exp(cd(0.0, -2.0 * std::numbers::pi * f / fs));
    cd num = 0.0, den = 0.0;
    // Horner in z^-1, lowest power last.
    for (auto it = b.rbegin(); it != b.rend(); ++it) num = num * zinv + *it;
    for (auto it = a.rbegin(); it != a.rend(); ++it) den = den * zinv + *it;
    out.push_back(num / den);
  }
  return out;
}

std::vector<std::complex<double>> freq_response(const FilterCascade& cascade, std::span<const double> freqs_hz) {
  return freq_response(cascade.b, cascade.a, cascade.fs, freqs_hz);
}

std::vector<double> lfilter(std::span<const double> b_in, std::span<const double> a_in, std::span<const double> x,
                            std::span<const double> zi) {
  if (a_in.empty() || a_in[0] == 0.0 || b_in.empty())
    throw Error(ErrorCode::InvalidArgument, "filter needs a[0] != 0 and nonempty b");
  const std::size_t m = std::max(a_in.size(), b_in.size());
  std::vector<double> b(m, 0.0), a(m, 0.0);
  for (std::size_t i = 0; i < b_in.size(); ++i) b[i] = b_in[i] / a_in[0];
  for (std::size_t i = 0; i < a_in.size(); ++i) a[i] = a_in[i] / a_in[0];
  std::vector<double> z(m - 1, 0.0);
  if (!zi.empty()) {
    if (zi.size() != z.size()) throw Error(ErrorCode::LengthMismatch, "initial state length");
    std::copy(zi.begin(), zi.end(), z.begin());
  }
  std::vector<double> y(x.size());
  for (std::size_t n = 0; n < x.size(); ++n) {
    const double xn = x[n];
    const double yn = (z.empty() ? 0.0 : z[0]) + b[0] * xn;
    for (std::size_t k = 1; k + 1 < m; ++k) z[k - 1] = z[k] + b[k] * xn - a[k] * yn;
    if (m > 1) z[m - 2] = b[m - 1] * xn - a[m - 1] * yn;
    y[n] = yn;
  }
  return y;
}

std::vector<double> lfilter_zi(std::span<const double> b_in, std::span<const double> a_in) {
  const std::size_t m = std::max(a_in.size(), b_in.size());
  if (m < 2) return {};
  std::vector<double> b(m, 0.0), a(m, 0.0);
  for (std::size_t i = 0; i < b_in.size(); ++i) b[i] = b_in[i] / a_in[0];
  for (std::size_t i = 0; i < a_in.size(); ++i) a[i] = a_in[i] / a_in[0];
  const Eigen::Index n = static_cast<Eigen::Index>(m - 1);
  // (I - A^T) zi = b[1:] - a[1:] * b[0], A the companion matrix of a.
  Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    lhs(i, 0) += a[static_cast<std::size_t>(i) + 1];
    if (i + 1 < n) lhs(i, i + 1) -= 1.0;
    rhs(i) = b[static_cast<std::size_t>(i) + 1] - a[static_cast<std::size_t>(i) + 1] * b[0];
  }
  const Eigen::VectorXd zi = lhs.partialPivLu().solve(rhs);
  return {zi.data(), zi.data() + n};
}

std::vector<double> apply_zero_phase(const FilterCascade& cascade, std::span<const double> x) {
  const std::size_t pad = cascade.pad_length();
  if (x.size() <= pad) {
    throw Error(ErrorCode::SignalTooShort, "signal of " + std::to_string(x.size()) +
                                               " samples needs more than " + std::to_string(pad));
  }
  const std::size_t n = x.size();
  std::vector<double> ext(n + 2 * pad);
  for (std::size_t i = 0; i < pad; ++i) {
    ext[i] = 2.0 * x[0] - x[pad - i];
    ext[pad + n + i] = 2.0 * x[n - 1] - x[n - 2 - i];
  }
  std::copy(x.begin(), x.end(), ext.begin() + static_cast<std::ptrdiff_t>(pad));

  const std::vector<double> zi = lfilter_zi(cascade.b, cascade.a);
  auto scaled = [&](double v) {
    std::vector<double> z(zi);
    for (double& s : z) s *= v;
    return z;
  };
  std::vector<double> y = lfilter(cascade.b, cascade.a, ext, scaled(ext.front()));
  std::reverse(y.begin(), y.end());
  y = lfilter(cascade.b, cascade.a, y, scaled(y.front()));
  std::reverse(y.begin(), y.end());
  return {y.begin() + static_cast<std::ptrdiff_t>(pad), y.begin() + static_cast<std::ptrdiff_t>(pad + n)};
}

std::string response_csv(const FilterCascade& cascade, int points) {
  if (points < 1) throw Error(ErrorCode::InvalidArgument, "response needs at least one point");
  std::vector<double> f(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) f[static_cast<std::size_t>(i)] = cascade.fs / 2.0 * i / points;
  const auto h = freq_response(cascade, f);
  std::ostringstream out;
  out.precision(10);
  out << "freq_hz,magnitude,magnitude_db,phase_rad\n";
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double mag = std::abs(h[i]);
    out << f[i] << ',' << mag << ',' << 20.0 * std::log10(std::max(mag, 1e-300)) << ',' << std::arg(h[i]) << '\n';
  }
  return out.str();
}

}  // namespace floss
