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

#include "floss/aggregate.hpp"
#include "floss/error.hpp"

using namespace floss;

namespace {

// Golden two-channel aggregation example, 18 usability epochs
// (nonzero entries shown as 1 after binarization; raw artifact codes used
// here to exercise binarize).
const std::vector<int> kUL{0, 2, 0, 3, 1, 0, 4, 0, 2, 2, 3, 1, 4, 2, 3, 2, 0, 0};
const std::vector<int> kUR{0, 0, 0, 0, 2, 0, 1, 0, 3, 4, 2, 2, 1, 3, 0, 4, 2, 1};
const std::vector<int> kUagg{0, 0, 0, 0, 1, 0, 1, 0, 1, 1, 1, 1, 1, 1, 0, 1, 0, 0};
const std::vector<int> kUsf{0, 0, 1, 1, 1, 0};
const std::vector<int> kSs{0, 1, 2, 3, 4, 4};
const std::vector<int> kSar{0, 1, -1, -1, -1, 4};

}  // namespace

TEST_SUITE("aggregate") {
  TEST_CASE("binarize") {
    CHECK(binarize({0, 3, 0, 4}) == std::vector<int>{0, 1, 0, 1});
    CHECK(binarize({0, 0}) == std::vector<int>{0, 0});
    CHECK(binarize({4, 4}) == std::vector<int>{1, 1});
    CHECK_THROWS_AS(binarize({5}), Error);
  }

  TEST_CASE("channel majority is strict") {
    CHECK(channel_majority({{1}, {0}}) == std::vector<int>{0});
    CHECK(channel_majority({{1}, {1}}) == std::vector<int>{1});
    CHECK(channel_majority({{1}, {1}, {0}}) == std::vector<int>{1});
    CHECK(channel_majority({{1}, {0}, {0}}) == std::vector<int>{0});
    try {
      (void)channel_majority({{1, 0}, {1}});
      FAIL("expected LengthMismatch");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::LengthMismatch);
    }
  }

  TEST_CASE("downsampling majority") {
    CHECK(downsample_majority(kUagg, 3) == kUsf);
    CHECK(downsample_majority({1, 1, 1, 1}, 2) == std::vector<int>{1, 1});
    CHECK(downsample_majority({1, 0}, 2) == std::vector<int>{0});
    CHECK(downsample_majority({1, 1, 1, 1, 1}, 2) == std::vector<int>{1, 1});
  }

  TEST_CASE("artifact rejection") {
    CHECK(reject_artifacts(kSs, kUsf) == kSar);
    CHECK(reject_artifacts(kSs, std::vector<int>(6, 0)) == kSs);
    CHECK(reject_artifacts(kSs, std::vector<int>(6, 1)) == std::vector<int>(6, -1));
    // One-epoch slack is truncated, more is an error.
    CHECK(reject_artifacts({0, 1, 2}, {0, 1}) == std::vector<int>{0, -1});
    CHECK(reject_artifacts({0, 1}, {0, 0, 1}) == std::vector<int>{0, 1});
    CHECK_THROWS_AS(reject_artifacts({0, 1, 2, 3}, {0, 1}), Error);
  }

  TEST_CASE("full pipeline reproduces every golden row") {
    const auto t = aggregate({kUL, kUR}, kSs, 3);
    CHECK(t.binarized[0] == binarize(kUL));
    CHECK(t.aggregated == kUagg);
    CHECK(t.downsampled == kUsf);
    CHECK(t.artifact_rejected == kSar);
  }

  TEST_CASE("flipping a usable mark to unusable never helps") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 300; ++trial) {
      const std::size_t channels = 1 + rng() % 3, n = 3 * (1 + rng() % 6);
      std::vector<std::vector<int>> b(channels, std::vector<int>(n));
      for (auto& ch : b)
        for (int& v : ch) v = static_cast<int>(rng() % 2);
      const auto before = downsample_majority(channel_majority(b), 3);
      auto flipped = b;
      const std::size_t c = rng() % channels, i = rng() % n;
      flipped[c][i] = 1;
      const auto after = downsample_majority(channel_majority(flipped), 3);
      for (std::size_t k = 0; k < before.size(); ++k) CHECK(after[k] >= before[k]);
    }
  }

  TEST_CASE("sleep score normalization") {
    CHECK(normalize_sleep_scores({0, 5, 4, -1}) == std::vector<int>{0, 4, 4, -1});
    try {
      (void)normalize_sleep_scores({6});
      FAIL("expected UnknownLabelCode");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::UnknownLabelCode);
    }
  }

  TEST_CASE("scaling factor") {
    CHECK(scaling_factor(30, 10) == 3);
    CHECK(scaling_factor(30, 5) == 6);
    CHECK(scaling_factor(10, 10) == 1);
    try {
      (void)scaling_factor(30, 20);
      FAIL("expected EpochMultipleViolation");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::EpochMultipleViolation);
    }
    CHECK_THROWS_AS(scaling_factor(5, 10), Error);
  }

  TEST_CASE("score text and csv") {
    CHECK(write_scores_text(kSar) == "0\n1\n-1\n-1\n-1\n4\n");
    CHECK(read_scores_text("0\n1\r\n\n-1\n4") == std::vector<int>{0, 1, -1, 4});
    CHECK_THROWS_AS(read_scores_text("0\nW\n"), Error);
    CHECK(write_scores_timed_csv({0, -1}, 30) == "epoch_index,start_s,stage\n0,0,0\n1,30,-1\n");
    CHECK(stage_name(-1) == "un");
    CHECK(stage_name(4) == "REM");
  }
}
