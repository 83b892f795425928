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

#include <algorithm>
#include <cmath>

#include "floss/features.hpp"
#include "floss/synth.hpp"
#include "oracles.hpp"

using namespace floss;

namespace {

EpochSample epoch(ClassLabel label, std::uint64_t seed, bool movement = false) {
  synth::SynthSpec s;
  s.label = label;
  s.seed = seed;
  s.movement = movement;
  return synth::gen_artifact_epoch(s);
}

double peak(const std::vector<double>& x) {
  double p = 0.0;
  for (double v : x) p = std::max(p, std::abs(v));
  return p;
}

double stddev(const std::vector<double>& x) {
  double m = 0.0, s = 0.0;
  for (double v : x) m += v;
  m /= static_cast<double>(x.size());
  for (double v : x) s += (v - m) * (v - m);
  return std::sqrt(s / static_cast<double>(x.size()));
}

// Zero variance, checked exactly rather than through a rounded mean.
bool is_constant(const std::vector<double>& x) {
  return std::all_of(x.begin(), x.end(), [&](double v) { return v == x.front(); });
}

}  // namespace

TEST_SUITE("synth") {
  TEST_CASE("class amplitude envelopes") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      const auto u = epoch(ClassLabel::Usable, seed);
      CHECK(u.eeg.size() == 2560);
      CHECK(peak(u.eeg) <= 100.0);
      const auto nd = epoch(ClassLabel::NoData, seed);
      CHECK(is_constant(nd.eeg));
      CHECK(std::abs(nd.eeg[0]) <= 50.0);
      CHECK(peak(epoch(ClassLabel::HighNoise, seed).eeg) >= 400.0);
      CHECK(peak(epoch(ClassLabel::MShaped, seed).eeg) <= 100.0);
    }
  }

  TEST_CASE("spiky epoch concentrates power at 8 Hz") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto s = epoch(ClassLabel::Spiky, seed);
      const Matrix spec = spectrogram(s.eeg, SpectrogramConfig{});
      double at8 = 0.0, ref = 0.0;
      for (std::size_t t = 0; t < spec.rows; ++t) {
        at8 += spec(t, 8);
        for (std::size_t k = 10; k <= 14; ++k) ref += spec(t, k) / 5.0;
      }
      CHECK(at8 >= 10.0 * ref);
    }
  }

  TEST_CASE("M-shaped period from autocorrelation") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      synth::SynthSpec spec;
      spec.label = ClassLabel::MShaped;
      spec.seed = seed;
      spec.window_len_s = 20.0;  // room for several periods
      const auto m = synth::gen_artifact_epoch(spec);
      const auto r = oracle::autocorr(m.eeg, 256 * 6);
      // Highest autocorrelation beyond the zero-lag lobe.
      std::size_t best = 256 * 3;
      for (std::size_t lag = 256 * 3; lag <= 256 * 6; ++lag)
        if (r[lag] > r[best]) best = lag;
      const double period = static_cast<double>(best) / 256.0;
      CHECK(period >= 4.0);
      CHECK(period <= 5.0);
    }
  }

  TEST_CASE("resting ACC norm is near 1 g") {
    const auto u = epoch(ClassLabel::Usable, 1);
    REQUIRE(u.anorm.has_value());
    for (double v : *u.anorm) CHECK(std::abs(v - 1.0) < 0.05);
    const auto moving = epoch(ClassLabel::HighNoise, 1, true);
    CHECK(stddev(*moving.anorm) > 10.0 * stddev(*u.anorm));
  }

  TEST_CASE("generation is deterministic") {
    CHECK(epoch(ClassLabel::Usable, 42).eeg == epoch(ClassLabel::Usable, 42).eeg);
    CHECK(epoch(ClassLabel::Usable, 42).eeg != epoch(ClassLabel::Usable, 43).eeg);
    const auto a = synth::gen_artifact_dataset(2, 3, 256, 10.0, 5);
    const auto b = synth::gen_artifact_dataset(2, 3, 256, 10.0, 5);
    REQUIRE(a.size() == 30);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].eeg == b[i].eeg);
    CHECK(a.front().subject_id == "S01");
    CHECK(a.back().subject_id == "S02");
  }

  TEST_CASE("mobility sequences") {
    const auto lying = synth::gen_mobility_sequence({{MobilityLabel::Lying, 6}}, 256, 10.0, 1);
    CHECK(lying.acc.size() == 256 * 60);
    CHECK(std::all_of(lying.labels.begin(), lying.labels.end(),
                      [](MobilityLabel m) { return m == MobilityLabel::Lying; }));
    const auto ln = acc_norm(lying.acc);
    for (double v : ln) CHECK(std::abs(v - 1.0) < 0.05);

    const auto mobile = synth::gen_mobility_sequence({{MobilityLabel::Mobile, 3}}, 256, 10.0, 1);
    const auto mn = acc_norm(mobile.acc);
    for (std::size_t b = 0; b < 3; ++b) {
      const std::vector<double> mb(mn.begin() + static_cast<long>(b * 2560), mn.begin() + static_cast<long>((b + 1) * 2560));
      const std::vector<double> lb(ln.begin() + static_cast<long>(b * 2560), ln.begin() + static_cast<long>((b + 1) * 2560));
      CHECK(stddev(mb) >= 10.0 * stddev(lb));
    }

    const auto idle = synth::gen_mobility_sequence({{MobilityLabel::Idle, 2}}, 256, 10.0, 1);
    CHECK(is_constant(idle.acc.ax));
    CHECK(is_constant(idle.acc.ay));
    CHECK(is_constant(idle.acc.az));

    const auto mixed = synth::gen_mobility_sequence(
        {{MobilityLabel::Idle, 2}, {MobilityLabel::Lying, 20}, {MobilityLabel::Mobile, 2}}, 256, 10.0, 1);
    CHECK(mixed.labels.size() == 24);
  }

  TEST_CASE("synthetic night is self-consistent") {
    synth::NightSpec spec;
    spec.duration_s = 900.0;
    spec.seed = 3;
    const auto night = synth::gen_night(spec);
    CHECK(night.recording.sample_count() == 900 * 256);
    CHECK(night.recording.channels.size() == 2);
    CHECK(night.sleep_scores.size() == 30);
    CHECK(night.mobility.size() == 90);
    for (int s : night.sleep_scores) CHECK((s >= 0 && s <= 4));
    for (const auto& a : night.annotations) {
      CHECK(a.start_s >= 0.0);
      CHECK(a.end_s <= 900.0);
      CHECK(a.start_s < a.end_s);
    }
  }
}
