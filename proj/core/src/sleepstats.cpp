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

#include "floss/sleepstats.hpp"

#include <algorithm>
#include <json.hpp>

#include "floss/aggregate.hpp"
#include "floss/error.hpp"

namespace floss {
namespace {

bool is_sleep(int s) { return s >= 1 && s <= 4; }

}  // namespace

SleepStats compute_stats(const std::vector<int>& scores, double epoch_len_s, const std::optional<TibResult>& tib) {
  if (scores.empty()) throw Error(ErrorCode::EmptyRecording, "no sleep epochs to summarize");
  if (!(epoch_len_s > 0.0)) throw Error(ErrorCode::InvalidArgument, "epoch length must be positive");
  for (int s : scores)
    if (s < kUnscorable || s > kRem) throw Error(ErrorCode::UnknownLabelCode, "sleep stage " + std::to_string(s));

  const std::size_t n = scores.size();
  const double L = epoch_len_s;
  const double to_min = L / 60.0;
  SleepStats st;
  st.lights_out_sec = tib ? tib->lights_out_s : 0.0;
  st.lights_on_sec = tib ? tib->lights_on_s : static_cast<double>(n) * L;
  st.tib_min = tib ? tib->tib_min : static_cast<double>(n) * to_min;

  const auto scorable = static_cast<std::size_t>(std::count_if(scores.begin(), scores.end(),
                                                               [](int s) { return s != kUnscorable; }));
  st.scorable_pct = 100.0 * static_cast<double>(scorable) / static_cast<double>(n);

  auto in_bed = [&](std::size_t i) {
    const double start = static_cast<double>(i) * L;
    return start + L > st.lights_out_sec && start < st.lights_on_sec;
  };
  std::optional<std::size_t> first, last;
  for (std::size_t i = 0; i < n; ++i) {
    if (!in_bed(i) || !is_sleep(scores[i])) continue;
    if (!first) first = i;
    last = i;
  }
  if (!first) {
    st.no_sleep_detected = true;
    return st;
  }

  std::size_t stage[5] = {0, 0, 0, 0, 0};
  std::size_t wake_inside = 0;
  std::optional<std::size_t> first_of[5];
  for (std::size_t i = *first; i <= *last; ++i) {
    const int s = scores[i];
    if (s == kUnscorable) continue;
    ++stage[s];
    if (!first_of[s]) first_of[s] = i;
    if (s == kWake) ++wake_inside;
  }
  const std::size_t tst = stage[1] + stage[2] + stage[3] + stage[4];
  st.spt_min = static_cast<double>(*last - *first + 1) * to_min;
  st.tst_min = static_cast<double>(tst) * to_min;
  st.n1_min = static_cast<double>(stage[1]) * to_min;
  st.n2_min = static_cast<double>(stage[2]) * to_min;
  st.n3_min = static_cast<double>(stage[3]) * to_min;
  st.rem_min = static_cast<double>(stage[4]) * to_min;
  st.nrem_min = st.n1_min + st.n2_min + st.n3_min;
  auto pct = [&](std::size_t count) { return 100.0 * static_cast<double>(count) / static_cast<double>(tst); };
  st.n1_pct = pct(stage[1]);
  st.n2_pct = pct(stage[2]);
  st.n3_pct = pct(stage[3]);
  st.rem_pct = pct(stage[4]);
  st.nrem_pct = pct(stage[1] + stage[2] + stage[3]);
  st.waso_min = static_cast<double>(wake_inside) * to_min;

  auto latency = [&](std::size_t i) {
    return std::max(0.0, static_cast<double>(i) * L - st.lights_out_sec) / 60.0;
  };
  st.sol_min = latency(*first);
  if (first_of[1]) st.n1_latency_min = latency(*first_of[1]);
  if (first_of[2]) st.n2_latency_min = latency(*first_of[2]);
  if (first_of[3]) st.n3_latency_min = latency(*first_of[3]);
  if (first_of[4]) st.rem_latency_min = latency(*first_of[4]);

  std::size_t psw = 0;
  for (std::size_t i = *last + 1; i < n && static_cast<double>(i) * L < st.lights_on_sec; ++i)
    if (scores[i] == kWake) ++psw;
  st.psw_min = static_cast<double>(psw) * to_min;

  st.se_pct = st.tib_min > 0.0 ? 100.0 * st.tst_min / st.tib_min : 0.0;
  st.sme_pct = 100.0 * st.tst_min / *st.spt_min;
  return st;
}

std::string SleepStats::to_json() const {
  nlohmann::ordered_json j;
  auto opt = [](const std::optional<double>& v) { return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(); };
  j["Lights_out_sec"] = lights_out_sec;
  j["Lights_on_sec"] = lights_on_sec;
  j["Scorable_%"] = scorable_pct;
  j["TIB_min"] = tib_min;
  j["SPT_min"] = opt(spt_min);
  j["TST_min"] = tst_min;
  j["N1_min"] = n1_min;
  j["N1_%"] = opt(n1_pct);
  j["N2_min"] = n2_min;
  j["N2_%"] = opt(n2_pct);
  j["N3_min"] = n3_min;
  j["N3_%"] = opt(n3_pct);
  j["REM_min"] = rem_min;
  j["REM_%"] = opt(rem_pct);
  j["NREM_min"] = nrem_min;
  j["NREM_%"] = opt(nrem_pct);
  j["WASO_min"] = opt(waso_min);
  j["SOL_min"] = opt(sol_min);
  j["N1_latency_min"] = opt(n1_latency_min);
  j["N2_latency_min"] = opt(n2_latency_min);
  j["N3_latency_min"] = opt(n3_latency_min);
  j["REM_latency_min"] = opt(rem_latency_min);
  j["PSW_min"] = opt(psw_min);
  j["SE_%"] = se_pct;
  j["SME_%"] = opt(sme_pct);
  j["NoSleepDetected"] = no_sleep_detected;
  return j.dump(2);
}

}  // namespace floss
