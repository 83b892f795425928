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

#include "floss/error.hpp"

namespace floss {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::FileUnreadable: return "FileUnreadable";
    case ErrorCode::HeaderFieldUnparsable: return "HeaderFieldUnparsable";
    case ErrorCode::TruncatedFile: return "TruncatedFile";
    case ErrorCode::SamplingRateMismatch: return "SamplingRateMismatch";
    case ErrorCode::ChannelMissing: return "ChannelMissing";
    case ErrorCode::AccMissingWhenRequired: return "AccMissingWhenRequired";
    case ErrorCode::LengthMismatchEegAcc: return "LengthMismatchEegAcc";
    case ErrorCode::ScoreLengthMismatch: return "ScoreLengthMismatch";
    case ErrorCode::EmptyRecording: return "EmptyRecording";
    case ErrorCode::NonFiniteSamples: return "NonFiniteSamples";
    case ErrorCode::EpochMultipleViolation: return "EpochMultipleViolation";
    case ErrorCode::ModelIncompatible: return "ModelIncompatible";
    case ErrorCode::NoLyingPeriod: return "NoLyingPeriod";
    case ErrorCode::DigitalRangeDegenerate: return "DigitalRangeDegenerate";
    case ErrorCode::AmplitudeOutOfDeclaredRange: return "AmplitudeOutOfDeclaredRange";
    case ErrorCode::UnknownLabelCode: return "UnknownLabelCode";
    case ErrorCode::EmptyPartition: return "EmptyPartition";
    case ErrorCode::SegmentTooShort: return "SegmentTooShort";
    case ErrorCode::DegenerateData: return "DegenerateData";
    case ErrorCode::NonFiniteFeature: return "NonFiniteFeature";
    case ErrorCode::FeatureCountMismatch: return "FeatureCountMismatch";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::FrequencyAboveNyquist: return "FrequencyAboveNyquist";
    case ErrorCode::SignalTooShort: return "SignalTooShort";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

bool is_night_error(ErrorCode code) {
  return static_cast<int>(code) < kNightErrorCount;
}

ErrorCode night_error(ErrorCode code) {
  if (is_night_error(code)) return code;
  switch (code) {
    case ErrorCode::DigitalRangeDegenerate:
    case ErrorCode::AmplitudeOutOfDeclaredRange:
    case ErrorCode::UnknownLabelCode:
      return ErrorCode::HeaderFieldUnparsable;
    case ErrorCode::FrequencyAboveNyquist:
      return ErrorCode::SamplingRateMismatch;
    case ErrorCode::FeatureCountMismatch:
    case ErrorCode::DegenerateData:
      return ErrorCode::ModelIncompatible;
    case ErrorCode::NonFiniteFeature:
      return ErrorCode::NonFiniteSamples;
    case ErrorCode::LengthMismatch:
      return ErrorCode::ScoreLengthMismatch;
    case ErrorCode::SegmentTooShort:
    case ErrorCode::SignalTooShort:
      return ErrorCode::EmptyRecording;
    default:
      return ErrorCode::EpochMultipleViolation;
  }
}

}  // namespace floss
