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

#include <cmath>
#include <cstring>
#include <filesystem>
#include <random>

#include "floss/error.hpp"
#include "floss/signal_io.hpp"

using namespace floss;

namespace {

Recording random_recording(std::mt19937_64& rng, int channels, int seconds, bool acc) {
  std::normal_distribution<double> eeg(0.0, 40.0), g(0.0, 0.05);
  Recording r;
  r.fs = 256;
  const std::size_t n = static_cast<std::size_t>(r.fs * seconds);
  for (int c = 0; c < channels; ++c) {
    ChannelSignal ch;
    ch.label = "EEG " + std::to_string(c);
    for (std::size_t i = 0; i < n; ++i) ch.samples.push_back(eeg(rng));
    r.channels.push_back(std::move(ch));
  }
  if (acc) {
    TriAxialAcc a;
    for (std::size_t i = 0; i < n; ++i) {
      a.ax.push_back(g(rng));
      a.ay.push_back(g(rng));
      a.az.push_back(1.0 + g(rng));
    }
    r.acc = std::move(a);
  }
  return r;
}

std::string field(const std::vector<std::uint8_t>& bytes, std::size_t off, std::size_t len) {
  return std::string(bytes.begin() + static_cast<long>(off), bytes.begin() + static_cast<long>(off + len));
}

int16_t sample_at(const std::vector<std::uint8_t>& bytes, std::size_t header, std::size_t i) {
  const std::size_t o = header + 2 * i;
  return static_cast<int16_t>(static_cast<std::uint16_t>(bytes[o] | (bytes[o + 1] << 8)));
}

}  // namespace

TEST_SUITE("signal_io") {
  TEST_CASE("empty recording is a bare 256-byte header") {
    Recording r;
    r.channels.clear();
    const auto bytes = write_edf(r);
    CHECK(bytes.size() == 256);
    CHECK(std::stoi(field(bytes, 184, 8)) == 256);
    CHECK(std::stoi(field(bytes, 252, 4)) == 0);
    const Recording back = read_edf(bytes);
    CHECK(back.channels.empty());
    CHECK_FALSE(back.acc.has_value());
  }

  TEST_CASE("affine digital to physical map at the native range") {
    const EdfScaling s;
    // Hand-evaluated: -1976 + (0 - (-32768)) * (1975.93 - (-1976)) / (32767 - (-32768)).
    const double expected = -1976.0 + 32768.0 * 3951.93 / 65535.0;
    CHECK(s.to_physical(0) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(s.to_physical(0) == doctest::Approx(-0.0048487068).epsilon(1e-6));
    CHECK(s.to_physical(-32768) == doctest::Approx(-1976.0));
    CHECK(s.to_physical(32767) == doctest::Approx(1975.93));
  }

  TEST_CASE("affine map is strictly increasing") {
    const EdfScaling s;
    for (int d = -32768; d < 32767; d += 97) CHECK(s.to_physical(d) < s.to_physical(d + 1));
  }

  TEST_CASE("constant zero channel encodes as one repeated digital code") {
    Recording r;
    r.channels.push_back({"EEG L", std::vector<double>(2560, 0.0), std::nullopt});
    const auto bytes = write_edf(r);
    const std::size_t header = 256 + 256;
    REQUIRE(bytes.size() == header + 2560 * 2);
    const int code = EdfScaling{}.to_digital(0.0);
    for (std::size_t i = 0; i < 2560; ++i) REQUIRE(sample_at(bytes, header, i) == code);
  }

  TEST_CASE("header size is 256 * (signals + 1)") {
    std::mt19937_64 rng(3);
    const auto r = random_recording(rng, 2, 2, true);
    const auto bytes = write_edf(r);
    CHECK(std::stoi(field(bytes, 184, 8)) == 256 * 6);
    CHECK(std::stoi(field(bytes, 252, 4)) == 5);
  }

  TEST_CASE("round trip keeps labels, lengths and digital payload") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 10; ++trial) {
      const auto r = random_recording(rng, 1 + trial % 3, 1 + trial % 4, trial % 2 == 0);
      const auto bytes = write_edf(r);
      const Recording back = read_edf(bytes);
      REQUIRE(back.channels.size() == r.channels.size());
      for (std::size_t c = 0; c < r.channels.size(); ++c) {
        CHECK(back.channels[c].label == r.channels[c].label);
        REQUIRE(back.channels[c].samples.size() == r.channels[c].samples.size());
        // Physical values within one quantization step.
        const auto& sc = *back.channels[c].scaling;
        const double q = (sc.phys_max - sc.phys_min) / (sc.dig_max - sc.dig_min);
        for (std::size_t i = 0; i < r.channels[c].samples.size(); ++i)
          REQUIRE(std::abs(back.channels[c].samples[i] - r.channels[c].samples[i]) <= q);
      }
      CHECK(back.acc.has_value() == r.acc.has_value());
      CHECK(write_edf(back) == bytes);
    }
  }

  TEST_CASE("truncated payload is reported") {
    std::mt19937_64 rng(5);
    auto bytes = write_edf(random_recording(rng, 1, 2, false));
    bytes.resize(bytes.size() - 10);
    // n_records is declared, so a short payload is truncation.
    try {
      (void)read_edf(bytes);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::TruncatedFile);
    }
  }

  TEST_CASE("header shorter than 256 bytes is truncation") {
    std::vector<std::uint8_t> bytes(100, ' ');
    CHECK_THROWS_AS(read_edf(bytes), Error);
  }

  TEST_CASE("unparsable numeric header field") {
    std::mt19937_64 rng(5);
    auto bytes = write_edf(random_recording(rng, 1, 1, false));
    std::memcpy(bytes.data() + 252, "zz  ", 4);
    try {
      (void)read_edf(bytes);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::HeaderFieldUnparsable);
    }
  }

  TEST_CASE("degenerate digital range") {
    std::mt19937_64 rng(5);
    auto bytes = write_edf(random_recording(rng, 1, 1, false));
    // Signal 0: dig_min at 256 + 16+80+8+8+8 = 376, dig_max at 384.
    const std::string same = "0       ";
    std::memcpy(bytes.data() + 376, same.data(), 8);
    std::memcpy(bytes.data() + 384, same.data(), 8);
    try {
      (void)read_edf(bytes);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::DigitalRangeDegenerate);
    }
  }

  TEST_CASE("mixed sampling rates are rejected") {
    std::mt19937_64 rng(5);
    auto bytes = write_edf(random_recording(rng, 2, 1, false));
    // samples-per-record of signal 1: block starts at 256 + 2*(16+80+8+8+8+8+8+80) = 688.
    const std::string spr = "128     ";
    std::memcpy(bytes.data() + 688 + 8, spr.data(), 8);
    CHECK_THROWS_AS(read_edf(bytes), Error);
  }

  TEST_CASE("validate rejects non-finite samples and ragged lengths") {
    Recording r;
    r.channels.push_back({"EEG", {1.0, NAN}, std::nullopt});
    try {
      validate(r);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NonFiniteSamples);
    }
    r.channels[0].samples = {1.0, 2.0};
    r.acc = TriAxialAcc{{1.0}, {1.0}, {1.0}, {}, {}, {}};
    try {
      validate(r);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::LengthMismatchEegAcc);
    }
  }

  TEST_CASE("csv fallback round trip") {
    std::mt19937_64 rng(8);
    const auto r = random_recording(rng, 2, 1, true);
    const Recording back = read_csv(write_csv(r));
    REQUIRE(back.channels.size() == 2);
    REQUIRE(back.acc.has_value());
    CHECK(back.fs == 256);
    for (std::size_t i = 0; i < r.channels[0].samples.size(); ++i) {
      REQUIRE(back.channels[1].samples[i] == doctest::Approx(r.channels[1].samples[i]).epsilon(1e-9));
      REQUIRE(back.acc->az[i] == doctest::Approx(r.acc->az[i]).epsilon(1e-9));
    }
  }

  TEST_CASE("file round trip through read_recording") {
    std::mt19937_64 rng(9);
    const auto r = random_recording(rng, 1, 2, true);
    const auto dir = std::filesystem::temp_directory_path() / "floss_signal_io_test";
    std::filesystem::create_directories(dir);
    write_edf_file(dir / "a.edf", r);
    const Recording back = read_recording(dir / "a.edf");
    CHECK(back.sample_count() == r.sample_count());
    CHECK_THROWS_AS(read_recording(dir / "missing.edf"), Error);
    std::filesystem::remove_all(dir);
  }
}
