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

#include <stdexcept>
#include <string>
#include <string_view>

namespace floss {

// The first thirteen codes form the night-level taxonomy used by the batch
// pipeline. The remaining ones are raised by library operations and are
// mapped onto the taxonomy by `night_error()`.
enum class ErrorCode {
  FileUnreadable,
  HeaderFieldUnparsable,
  TruncatedFile,
  SamplingRateMismatch,
  ChannelMissing,
  AccMissingWhenRequired,
  LengthMismatchEegAcc,
  ScoreLengthMismatch,
  EmptyRecording,
  NonFiniteSamples,
  EpochMultipleViolation,
  ModelIncompatible,
  NoLyingPeriod,

  DigitalRangeDegenerate,
  AmplitudeOutOfDeclaredRange,
  UnknownLabelCode,
  EmptyPartition,
  SegmentTooShort,
  DegenerateData,
  NonFiniteFeature,
  FeatureCountMismatch,
  LengthMismatch,
  FrequencyAboveNyquist,
  SignalTooShort,
  InvalidArgument,
};

inline constexpr int kNightErrorCount = 13;

std::string_view to_string(ErrorCode code);

// Collapses any code onto the thirteen-member night taxonomy.
ErrorCode night_error(ErrorCode code);

bool is_night_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace floss
