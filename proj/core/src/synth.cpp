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

#include "floss/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "floss/error.hpp"
#include "floss/random.hpp"

namespace floss::synth {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void scale_to_peak(std::vector<double>& x, double peak) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  if (m == 0.0) return;
  const double s = peak / m;
  for (double& v : x) v *= s;
}

// Sum of sinusoids in [lo, hi] Hz with 1/f amplitudes.
std::vector<double> pink_mixture(std::size_t n, int fs, double lo, double hi, int components, Rng& rng) {
  std::vector<double> x(n, 0.0);
  for (int c = 0; c < components; ++c) {
    const double f = rng.uniform(lo, hi);
    const double a = 1.0 / f;
    const double phase = rng.uniform(0.0, kTwoPi);
    for (std::size_t i = 0; i < n; ++i) x[i] += a * std::sin(kTwoPi * f * static_cast<double>(i) / fs + phase);
  }
  return x;
}

// One period of the M template sampled at phase in [0, 1).
double m_template(double phase) {
  // up, down to a shallow dip, up, down
  static constexpr double kPhase[] = {0.0, 0.25, 0.5, 0.75, 1.0};
  static constexpr double kLevel[] = {0.0, 1.0, 0.3, 1.0, 0.0};
  for (int i = 0; i < 4; ++i) {
    if (phase <= kPhase[i + 1]) {
      const double t = (phase - kPhase[i]) / (kPhase[i + 1] - kPhase[i]);
      return kLevel[i] + t * (kLevel[i + 1] - kLevel[i]);
    }
  }
  return 0.0;
}

std::vector<double> resting_norm(std::size_t n, Rng& rng) {
  std::vector<double> a(n);
  for (double& v : a) v = 1.0 + 0.005 * rng.normal();
  return a;
}

std::vector<double> moving_norm(std::size_t n, int fs, Rng& rng) {
  std::vector<double> a(n);
  const double f = rng.uniform(1.6, 2.2);
  const double phase = rng.uniform(0.0, kTwoPi);
  for (std::size_t i = 0; i < n; ++i)
    a[i] = std::max(0.02, 1.0 + 0.3 * std::sin(kTwoPi * f * static_cast<double>(i) / fs + phase) +
                              0.15 * rng.normal());
  return a;
}

}  // namespace

std::vector<double> gen_artifact_signal(ClassLabel label, std::size_t n, int fs, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> x;
  switch (label) {
    case ClassLabel::Usable: {
      x = pink_mixture(n, fs, 0.3, 30.0, 40, rng);
      scale_to_peak(x, rng.uniform(30.0, 95.0));
      break;
    }
    case ClassLabel::NoData: {
      x.assign(n, rng.uniform(-50.0, 50.0));
      break;
    }
    case ClassLabel::HighNoise: {
      x.resize(n);
      for (double& v : x) v = rng.normal();
      auto drift = pink_mixture(n, fs, 0.1, 2.0, 6, rng);
      scale_to_peak(drift, rng.uniform(1.0, 4.0));
      for (std::size_t i = 0; i < n; ++i) x[i] += drift[i];
      scale_to_peak(x, rng.uniform(400.0, 1500.0));
      break;
    }
    case ClassLabel::Spiky: {
      x = pink_mixture(n, fs, 0.5, 30.0, 20, rng);
      scale_to_peak(x, rng.uniform(5.0, 15.0));
      const double amps[] = {rng.uniform(15.0, 30.0), rng.uniform(8.0, 20.0), rng.uniform(4.0, 12.0)};
      for (int h = 0; h < 3; ++h) {
        const double f = 8.0 * (h + 1);
        const double phase = rng.uniform(0.0, kTwoPi);
        for (std::size_t i = 0; i < n; ++i)
          x[i] += amps[h] * std::sin(kTwoPi * f * static_cast<double>(i) / fs + phase);
      }
      break;
    }
    case ClassLabel::MShaped: {
      x = pink_mixture(n, fs, 0.5, 30.0, 20, rng);
      scale_to_peak(x, rng.uniform(3.0, 8.0));
      const double period = rng.uniform(4.0, 5.0);
      const double amp = rng.uniform(60.0, 160.0);
      const double offset = rng.uniform(0.0, period);
      for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / fs + offset;
        const double phase = t / period - std::floor(t / period);
        x[i] += amp * (m_template(phase) - 0.5);
      }
      break;
    }
  }
  return x;
}

EpochSample gen_artifact_epoch(const SynthSpec& spec) {
  const double n_real = spec.fs * spec.window_len_s;
  if (spec.fs <= 0 || std::abs(n_real - std::round(n_real)) > 1e-9 || n_real < 1.0)
    throw Error(ErrorCode::EpochMultipleViolation, "fs * window_len_s must be a positive integer");
  const auto n = static_cast<std::size_t>(std::llround(n_real));
  EpochSample s;
  s.label = spec.label;
  s.eeg = gen_artifact_signal(spec.label, n, spec.fs, derive_seed(spec.seed, 1));
  Rng acc_rng(derive_seed(spec.seed, 2));
  s.anorm = spec.movement ? moving_norm(n, spec.fs, acc_rng) : resting_norm(n, acc_rng);
  return s;
}

MobilitySequence gen_mobility_sequence(const std::vector<MobilitySegment>& segments, int fs,
                                       double epoch_len_s, std::uint64_t seed) {
  const double n_real = fs * epoch_len_s;
  if (fs <= 0 || std::abs(n_real - std::round(n_real)) > 1e-9 || n_real < 1.0)
    throw Error(ErrorCode::EpochMultipleViolation, "fs * epoch_len_s must be a positive integer");
  const auto w = static_cast<std::size_t>(std::llround(n_real));
  Rng rng(seed);
  MobilitySequence seq;
  auto& acc = seq.acc;

  for (const auto& seg : segments) {
    if (seg.count < 1) throw Error(ErrorCode::InvalidArgument, "segment counts must be >= 1");
    // Orientation held for the whole segment.
    double theta = rng.uniform(0.0, kTwoPi);
    const double tilt_x = rng.uniform(-0.1, 0.1), tilt_z = rng.uniform(-0.1, 0.1);
    const double idle[3] = {rng.uniform(-0.1, 0.1), rng.uniform(-0.1, 0.1), 1.0};
    for (int e = 0; e < seg.count; ++e) {
      seq.labels.push_back(seg.label);
      const double from = theta;
      if (seg.label == MobilityLabel::Lying && rng.uniform() < 0.05) theta += rng.uniform(-1.5, 1.5);
      const double sway_phase = rng.uniform(0.0, kTwoPi);
      const double step_f = rng.uniform(1.6, 2.2);
      for (std::size_t i = 0; i < w; ++i) {
        const double t = static_cast<double>(i) / fs;
        double x = 0.0, y = 0.0, z = 0.0;
        switch (seg.label) {
          case MobilityLabel::Idle:
            x = idle[0];
            y = idle[1];
            z = idle[2];
            break;
          case MobilityLabel::Lying: {
            // Turn over during the first two seconds when re-orienting.
            const double a = t < 2.0 ? from + (theta - from) * t / 2.0 : theta;
            x = std::cos(a) + 0.002 * rng.normal();
            y = tilt_x + 0.002 * rng.normal();
            z = std::sin(a) + 0.002 * rng.normal();
            break;
          }
          case MobilityLabel::Stationary:
            x = tilt_x + 0.02 * std::sin(kTwoPi * 0.3 * t + sway_phase) + 0.01 * rng.normal();
            y = -1.0 + 0.01 * rng.normal();
            z = tilt_z + 0.01 * rng.normal();
            break;
          case MobilityLabel::Mobile:
            x = tilt_x + 0.15 * std::sin(kTwoPi * step_f / 2.0 * t + sway_phase) + 0.15 * rng.normal();
            y = -1.0 + 0.3 * std::sin(kTwoPi * step_f * t) + 0.15 * rng.normal();
            z = tilt_z + 0.15 * rng.normal();
            break;
        }
        acc.ax.push_back(x);
        acc.ay.push_back(y);
        acc.az.push_back(z);
      }
    }
  }
  return seq;
}

namespace {

// Plausible NREM/REM cycling while in bed; W outside of it.
std::vector<int> gen_hypnogram(std::size_t n_epochs, std::size_t bed_start, std::size_t bed_end, Rng& rng) {
  std::vector<int> s(n_epochs, 0);
  const std::size_t onset = std::min(bed_end, bed_start + 4 + static_cast<std::size_t>(rng.index(8)));
  const std::size_t wake_up = bed_end > onset + 4 ? bed_end - 2 - static_cast<std::size_t>(rng.index(3)) : bed_end;
  // Stage cycle: N1 N2 N3 N2 REM, each with a random dwell.
  static constexpr int kCycle[] = {1, 2, 3, 2, 4};
  std::size_t i = onset, c = 0;
  while (i < wake_up) {
    const int stage = kCycle[c % 5];
    std::size_t dwell = 2 + static_cast<std::size_t>(rng.index(stage == 1 ? 3 : 12));
    for (; dwell > 0 && i < wake_up; --dwell, ++i) s[i] = rng.uniform() < 0.03 ? 0 : stage;
    ++c;
  }
  return s;
}

}  // namespace

Night gen_night(const NightSpec& spec) {
  if (spec.sleep_epoch_s <= 0.0 || spec.usability_epoch_s <= 0.0)
    throw Error(ErrorCode::InvalidArgument, "epoch lengths must be positive");
  const auto w = static_cast<std::size_t>(std::llround(spec.fs * spec.usability_epoch_s));
  const auto n_epochs = static_cast<std::size_t>(spec.duration_s / spec.usability_epoch_s);
  const std::size_t n = n_epochs * w;
  Rng rng(spec.seed);
  Night night;
  auto& rec = night.recording;
  rec.fs = spec.fs;
  rec.start_time = "2024-01-01T23:00:00";
  rec.device_id = "synthetic " + spec.night_id;

  // Walk in, sit, lie down for the night, get up.
  auto part = [&](double f) { return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(f * n_epochs))); };
  const std::size_t mobile_a = part(0.03), stationary = part(0.04), mobile_b = part(0.03);
  const std::size_t lying = n_epochs > mobile_a + stationary + mobile_b ? n_epochs - mobile_a - stationary - mobile_b : 1;
  std::vector<MobilitySegment> plan{{MobilityLabel::Mobile, static_cast<int>(mobile_a)},
                                    {MobilityLabel::Stationary, static_cast<int>(stationary)},
                                    {MobilityLabel::Lying, static_cast<int>(lying)},
                                    {MobilityLabel::Mobile, static_cast<int>(mobile_b)}};
  auto mob = gen_mobility_sequence(plan, spec.fs, spec.usability_epoch_s, derive_seed(spec.seed, 7));
  mob.labels.resize(n_epochs);
  mob.acc.ax.resize(n);
  mob.acc.ay.resize(n);
  mob.acc.az.resize(n);
  night.mobility = mob.labels;
  if (spec.with_acc) rec.acc = std::move(mob.acc);

  for (std::size_t c = 0; c < spec.channels.size(); ++c) {
    ChannelSignal ch;
    ch.label = spec.channels[c];
    ch.samples.reserve(n);
    std::vector<ClassLabel> labels(n_epochs, ClassLabel::Usable);
    for (std::size_t e = 0; e < n_epochs; ++e)
      if (night.mobility[e] == MobilityLabel::Mobile) labels[e] = ClassLabel::HighNoise;
    // Artifact runs of 1-6 epochs until the requested fraction is reached.
    const auto target = static_cast<std::size_t>(spec.artifact_fraction * static_cast<double>(n_epochs));
    std::size_t placed = 0, guard = 0;
    while (placed < target && guard++ < 10 * n_epochs + 10) {
      const auto cls = static_cast<ClassLabel>(1 + rng.index(4));
      const std::size_t len = 1 + static_cast<std::size_t>(rng.index(6));
      const std::size_t start = static_cast<std::size_t>(rng.index(n_epochs));
      for (std::size_t e = start; e < std::min(n_epochs, start + len); ++e) {
        if (labels[e] == ClassLabel::Usable) ++placed;
        labels[e] = cls;
      }
    }
    for (std::size_t e = 0; e < n_epochs; ++e) {
      const auto x = gen_artifact_signal(labels[e], w, spec.fs,
                                         derive_seed(spec.seed, 1000 + c * n_epochs + e));
      ch.samples.insert(ch.samples.end(), x.begin(), x.end());
    }
    // Coalesce runs into annotation spans; some use compound codes.
    for (std::size_t e = 0; e < n_epochs;) {
      std::size_t end = e + 1;
      while (end < n_epochs && labels[end] == labels[e]) ++end;
      if (labels[e] != ClassLabel::Usable) {
        int code = static_cast<int>(labels[e]);
        if (rng.uniform() < 0.2) {
          static constexpr int kCompound[] = {0, 1, 23, 13, 43};
          code = kCompound[code];
        }
        night.annotations.push_back({ch.label, static_cast<double>(e) * spec.usability_epoch_s,
                                     static_cast<double>(end) * spec.usability_epoch_s, code});
      }
      e = end;
    }
    rec.channels.push_back(std::move(ch));
  }

  const auto per_sleep = static_cast<std::size_t>(std::llround(spec.sleep_epoch_s / spec.usability_epoch_s));
  const std::size_t n_sleep = per_sleep ? n_epochs / per_sleep : 0;
  const std::size_t bed_start = (mobile_a + stationary) / std::max<std::size_t>(1, per_sleep) + 1;
  const std::size_t bed_end = std::min(n_sleep, (mobile_a + stationary + lying) / std::max<std::size_t>(1, per_sleep));
  Rng hyp_rng(derive_seed(spec.seed, 11));
  night.sleep_scores = gen_hypnogram(n_sleep, bed_start, bed_end, hyp_rng);
  return night;
}

std::vector<EpochSample> gen_artifact_dataset(int subjects, int per_class, int fs,
                                              double window_len_s, std::uint64_t seed) {
  std::vector<EpochSample> out;
  out.reserve(static_cast<std::size_t>(subjects * per_class * kNumArtifactClasses));
  for (int s = 0; s < subjects; ++s) {
    char id[16];
    std::snprintf(id, sizeof id, "S%02d", s + 1);
    for (int c = 0; c < kNumArtifactClasses; ++c) {
      for (int j = 0; j < per_class; ++j) {
        const std::uint64_t stream =
            static_cast<std::uint64_t>(s) * 1000000u + static_cast<std::uint64_t>(c) * 10000u +
            static_cast<std::uint64_t>(j);
        SynthSpec spec;
        spec.fs = fs;
        spec.window_len_s = window_len_s;
        spec.seed = derive_seed(seed, stream);
        spec.label = static_cast<ClassLabel>(c);
        spec.movement = spec.label == ClassLabel::HighNoise && (j % 2 == 1);
        EpochSample e = gen_artifact_epoch(spec);
        e.subject_id = id;
        e.channel = "EEG";
        e.epoch_index = j;
        out.push_back(std::move(e));
      }
    }
  }
  return out;
}

}  // namespace floss::synth
