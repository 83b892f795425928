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
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace floss {

// Physical/digital calibration of one EDF signal.
struct EdfScaling {
  double phys_min = -1976.0;
  double phys_max = 1975.93;
  int dig_min = -32768;
  int dig_max = 32767;

  double to_physical(int digital) const {
    return phys_min + (digital - dig_min) * (phys_max - phys_min) /
                          static_cast<double>(dig_max - dig_min);
  }
  // Rounds to the nearest code and clamps to [dig_min, dig_max].
  int to_digital(double physical) const;
};

struct ChannelSignal {
  std::string label;
  std::vector<double> samples;  // µV
  // Set when the channel came from an EDF file; reused on write so that the
  // digital payload survives a round trip unchanged.
  std::optional<EdfScaling> scaling;
};

struct TriAxialAcc {
  std::vector<double> ax, ay, az;  // g
  std::optional<EdfScaling> scaling_x, scaling_y, scaling_z;

  std::size_t size() const { return ax.size(); }
};

struct Recording {
  std::vector<ChannelSignal> channels;
  std::optional<TriAxialAcc> acc;
  int fs = 256;
  std::string start_time = "2000-01-01T00:00:00";
  std::string device_id;

  // Sample count shared by every signal (0 for an empty recording).
  std::size_t sample_count() const;
  double duration_s() const {
    return fs > 0 ? static_cast<double>(sample_count()) / fs : 0.0;
  }
  const ChannelSignal* find_channel(std::string_view label) const;
};

// Throws floss::Error if channel/ACC lengths differ, fs <= 0, or any sample
// is non-finite.
void validate(const Recording& rec);

std::vector<std::uint8_t> write_edf(const Recording& rec);
Recording read_edf(std::span<const std::uint8_t> bytes);

Recording read_edf_file(const std::filesystem::path& path);
void write_edf_file(const std::filesystem::path& path, const Recording& rec);

// CSV fallback: header `t_s,<ch1>,...,accX,accY,accZ`.
std::string write_csv(const Recording& rec);
Recording read_csv(std::string_view text);

// Dispatches on extension (.edf or .csv).
Recording read_recording(const std::filesystem::path& path);

// Default scaling for a signal: the native EEG range when the data fits it,
// otherwise a symmetric range just wide enough for the data.
EdfScaling default_scaling(std::span<const double> samples, bool is_eeg);

}  // namespace floss
