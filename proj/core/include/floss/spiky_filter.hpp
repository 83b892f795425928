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

#include <complex>
#include <span>
#include <string>
#include <vector>

namespace floss {

struct ButterworthDesign {
  int order = 4;
  double cutoff_hz = 30.0;
  double fs = 256.0;
  double normalized_cutoff = 0.0;  // cutoff / nyquist
  double omega_c = 0.0;  // prewarped analog cutoff, rad/s
  std::vector<std::complex<double>> analog_poles;
  std::vector<std::complex<double>> digital_poles;
  std::vector<double> b;  // order + 1 taps
  std::vector<double> a;  // a[0] == 1
};

struct NotchSpec {
  double center_hz = 0.0;
  double omega_o = 0.0;  // center / nyquist, in (0, 1)
  double bw = 0.0;  // bandwidth / nyquist
  double r = 0.0;  // pole radius, 1 - bw/2
  double q = 0.0;  // omega_o / bw
  std::vector<double> b;  // 3 taps, scaled to unit gain at DC
  std::vector<double> a;  // 3 taps
};

struct FilterCascade {
  double fs = 256.0;
  std::vector<double> b;
  std::vector<double> a;
  ButterworthDesign lowpass;
  std::vector<NotchSpec> notches;

  // Poles of every stage; the cascade is stable iff all have modulus < 1.
  std::vector<std::complex<double>> poles() const;
  // Edge padding used by apply_zero_phase.
  std::size_t pad_length() const { return 3 * std::max(a.size(), b.size()); }
};

ButterworthDesign design_butterworth(double fs, double cutoff_hz, int order);
NotchSpec design_notch(double fs, double center_hz, double bw_hz);

// Throws FrequencyAboveNyquist when the cutoff or a notch is not below fs/2.
FilterCascade design_cascade(double fs, double cutoff_hz = 30.0, int order = 4,
                             const std::vector<double>& notch_centers = {8.0, 16.0, 24.0},
                             double bw_hz = 2.0);

std::vector<double> convolve(std::span<const double> x, std::span<const double> y);

std::vector<std::complex<double>> freq_response(std::span<const double> b, std::span<const double> a, double fs,
                                                std::span<const double> freqs_hz);
std::vector<std::complex<double>> freq_response(const FilterCascade& cascade, std::span<const double> freqs_hz);

// Direct form II transposed single pass; `zi` (len max(a,b) - 1) is consumed
// as the initial state when nonempty. Coefficients are normalized by a[0].
std::vector<double> lfilter(std::span<const double> b, std::span<const double> a, std::span<const double> x,
                            std::span<const double> zi = {});

// Initial state that makes a unit-step input produce a steady output.
std::vector<double> lfilter_zi(std::span<const double> b, std::span<const double> a);

// Forward-backward filtering with odd reflection padding; output length
// equals input length. Throws SignalTooShort when x.size() <= pad_length().
std::vector<double> apply_zero_phase(const FilterCascade& cascade, std::span<const double> x);

// `freq_hz,magnitude,magnitude_db,phase_rad` rows on a uniform grid [0, fs/2).
std::string response_csv(const FilterCascade& cascade, int points = 512);

}  // namespace floss
