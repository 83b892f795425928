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
#include <string>
#include <utility>
#include <vector>

#include "floss/epoching.hpp"
#include "floss/mobility_tib.hpp"
#include "floss/signal_io.hpp"

namespace floss::synth {

struct SynthSpec {
  int fs = 256;
  double window_len_s = 10.0;
  std::uint64_t seed = 0;
  ClassLabel label = ClassLabel::Usable;
  // Replaces the resting ACC norm with a moving-subject trace.
  bool movement = false;
};

// One synthetic epoch of the requested artifact class, with an ACC-norm trace.
//   Usable    0.5-30 Hz mixture of sinusoids with 1/f amplitudes, peak <= 100 µV
//   NoData    constant, |c| <= 50 µV
//   HighNoise broadband noise, peak >= 400 µV
//   Spiky     8/16/24 Hz components (<= 30 µV each) over a low background
//   MShaped   periodic M template, period in [4, 5] s, peak <= 100 µV
EpochSample gen_artifact_epoch(const SynthSpec& spec);

// Raw synthetic EEG helpers shared with the night generator.
std::vector<double> gen_artifact_signal(ClassLabel label, std::size_t n, int fs, std::uint64_t seed);

struct MobilitySegment {
  MobilityLabel label;
  int count = 1;  // number of epochs
};

struct MobilitySequence {
  TriAxialAcc acc;
  std::vector<MobilityLabel> labels;
};

// ACC for consecutive epochs of the given classes:
//   Idle       exactly constant axes
//   Lying      gravity in the horizontal plane, tiny jitter, rare turns
//   Stationary upright orientation with jitter and slow sway
//   Mobile     gait-like bobbing and large noise on every axis
MobilitySequence gen_mobility_sequence(const std::vector<MobilitySegment>& segments, int fs,
                                       double epoch_len_s, std::uint64_t seed);

// A full synthetic night with artifact annotations, sleep scores and
// mobility ground truth.
struct NightSpec {
  std::string night_id = "night";
  int fs = 256;
  double duration_s = 3600.0;
  double usability_epoch_s = 10.0;
  double sleep_epoch_s = 30.0;
  std::vector<std::string> channels{"EEG L", "EEG R"};
  bool with_acc = true;
  // Fraction of usability epochs carrying an artifact.
  double artifact_fraction = 0.15;
  std::uint64_t seed = 0;
};

struct Night {
  Recording recording;
  std::vector<AnnotationSpan> annotations;
  std::vector<int> sleep_scores;  // one per sleep epoch, {0..4}
  std::vector<MobilityLabel> mobility;
};

Night gen_night(const NightSpec& spec);

// Labeled epochs for `subjects` synthetic subjects with `per_class` epochs of
// each artifact class per subject. Subject ids are "S01", "S02", ...
std::vector<EpochSample> gen_artifact_dataset(int subjects, int per_class, int fs,
                                              double window_len_s, std::uint64_t seed);

}  // namespace floss::synth
