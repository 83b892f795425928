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

#include <optional>
#include <string>
#include <vector>

#include "floss/mobility_tib.hpp"

namespace floss {

// Durations in decimal minutes, percentages in [0, 100]. Fields that need a
// sleep period are empty when no sleep epoch exists.
struct SleepStats {
  double lights_out_sec = 0.0;
  double lights_on_sec = 0.0;
  double scorable_pct = 0.0;
  double tib_min = 0.0;
  std::optional<double> spt_min;
  double tst_min = 0.0;
  double n1_min = 0.0, n2_min = 0.0, n3_min = 0.0, rem_min = 0.0, nrem_min = 0.0;
  std::optional<double> n1_pct, n2_pct, n3_pct, rem_pct, nrem_pct;
  std::optional<double> waso_min;
  std::optional<double> sol_min;
  std::optional<double> n1_latency_min, n2_latency_min, n3_latency_min, rem_latency_min;
  std::optional<double> psw_min;
  double se_pct = 0.0;
  std::optional<double> sme_pct;
  bool no_sleep_detected = false;

  // Object keyed by the conventional metric names (TIB_min, SE_%, ...);
  // empty fields are null.
  std::string to_json() const;
};

// `scores` holds -1 (unscorable) or stages 0..4. Without `tib`, Lights Out is
// the recording start and TIB spans every epoch; with it, the sleep period is
// searched only among epochs overlapping [lights_out, lights_on].
// The sleep period runs from the first to the last N1/N2/N3/REM epoch;
// unscorable epochs never bound it but count as elapsed time inside it.
// Throws EmptyRecording on an empty sequence.
SleepStats compute_stats(const std::vector<int>& scores, double epoch_len_s,
                         const std::optional<TibResult>& tib = std::nullopt);

}  // namespace floss
