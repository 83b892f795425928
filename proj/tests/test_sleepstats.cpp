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

#include <random>

#include "floss/error.hpp"
#include "floss/sleepstats.hpp"

using namespace floss;

namespace {
constexpr int W = 0, N1 = 1, N2 = 2, N3 = 3, R = 4, U = -1;
}

TEST_SUITE("sleepstats") {
  TEST_CASE("hand-counted night") {
    const auto s = compute_stats({W, W, N1, N2, U, N2, W, N2, R, W}, 30);
    CHECK(s.scorable_pct == doctest::Approx(90));
    CHECK(s.tib_min == doctest::Approx(5.0));
    REQUIRE(s.spt_min);
    CHECK(*s.spt_min == doctest::Approx(3.5));
    CHECK(s.tst_min == doctest::Approx(2.5));
    CHECK(*s.waso_min == doctest::Approx(0.5));
    CHECK(*s.sol_min == doctest::Approx(1.0));
    CHECK(*s.rem_latency_min == doctest::Approx(4.0));
    CHECK(*s.n1_latency_min == doctest::Approx(1.0));
    CHECK(*s.n2_latency_min == doctest::Approx(1.5));
    CHECK_FALSE(s.n3_latency_min);
    CHECK(*s.psw_min == doctest::Approx(0.5));
    CHECK(*s.sme_pct == doctest::Approx(100 * 2.5 / 3.5));
    CHECK(s.se_pct == doctest::Approx(50));
    CHECK(s.n2_min == doctest::Approx(1.5));
    CHECK(*s.n2_pct == doctest::Approx(60));
    CHECK(s.nrem_min == doctest::Approx(2.0));
    CHECK_FALSE(s.no_sleep_detected);
  }

  TEST_CASE("scorable percentage") {
    CHECK(compute_stats({U, W, N1, N2, N2, N2, N3, R, W, U}, 30).scorable_pct == doctest::Approx(80));
  }

  TEST_CASE("all wake") {
    const auto s = compute_stats(std::vector<int>(20, W), 30);
    CHECK(s.no_sleep_detected);
    CHECK(s.tst_min == 0);
    CHECK(s.se_pct == 0);
    CHECK_FALSE(s.spt_min);
    CHECK_FALSE(s.sol_min);
    CHECK_FALSE(s.waso_min);
    CHECK_FALSE(s.sme_pct);
    const std::string j = s.to_json();
    CHECK(j.find("\"SPT_min\": null") != std::string::npos);
    CHECK(j.find("\"NoSleepDetected\": true") != std::string::npos);
  }

  TEST_CASE("lights bounds from mobility") {
    TibResult tib{60, 240, (240 - 60 + 1) / 60.0};
    // 30 s epochs; epochs 0 and 1 lie before lights out, sleep in 9 is after lights on.
    const auto s = compute_stats({N2, N2, W, N1, N2, N2, W, W, W, N2}, 30, tib);
    CHECK(s.tib_min == doctest::Approx(tib.tib_min));
    CHECK(s.lights_out_sec == 60);
    CHECK(*s.sol_min == doctest::Approx(0.5));
    CHECK(*s.spt_min == doctest::Approx(1.5));
    CHECK(s.tst_min == doctest::Approx(1.5));
    CHECK(*s.psw_min == doctest::Approx(1.0));
    CHECK(s.se_pct == doctest::Approx(100 * 1.5 / tib.tib_min));
  }

  TEST_CASE("errors") {
    try {
      (void)compute_stats({}, 30);
      FAIL("expected EmptyRecording");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::EmptyRecording);
    }
    try {
      (void)compute_stats({0, 7}, 30);
      FAIL("expected UnknownLabelCode");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::UnknownLabelCode);
    }
  }

  TEST_CASE("identities on random nights") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 1000; ++trial) {
      const std::size_t n = 1 + rng() % 300;
      const bool with_unscorable = trial % 2 == 0;
      std::vector<int> s(n);
      for (int& v : s) v = static_cast<int>(rng() % (with_unscorable ? 6 : 5)) - (with_unscorable ? 1 : 0);
      const auto st = compute_stats(s, 30);
      CHECK(st.tst_min == doctest::Approx(st.n1_min + st.n2_min + st.n3_min + st.rem_min));
      CHECK(st.se_pct == doctest::Approx(100 * st.tst_min / st.tib_min));
      if (st.no_sleep_detected) continue;
      CHECK(*st.n1_pct + *st.n2_pct + *st.n3_pct + *st.rem_pct == doctest::Approx(100).epsilon(1e-4));
      CHECK(*st.sme_pct == doctest::Approx(100 * st.tst_min / *st.spt_min));
      const bool any_unscorable = std::find(s.begin(), s.end(), U) != s.end();
      if (!any_unscorable) CHECK(*st.spt_min == doctest::Approx(st.tst_min + *st.waso_min));
      CHECK(st.tst_min <= *st.spt_min + 1e-9);
      CHECK(*st.spt_min <= st.tib_min + 1e-9);
    }
  }

  TEST_CASE("json keys") {
    const std::string j = compute_stats({W, N1, N2, R}, 30).to_json();
    for (const char* k : {"Lights_out_sec", "TIB_min", "SPT_min", "TST_min", "WASO_min", "SOL_min", "SE_%", "SME_%"})
      CHECK(j.find(std::string("\"") + k + "\"") != std::string::npos);
  }
}
