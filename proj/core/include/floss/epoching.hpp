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
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "floss/signal_io.hpp"

namespace floss {

enum class ClassLabel : int {
  Usable = 0,
  NoData = 1,
  HighNoise = 2,
  Spiky = 3,
  MShaped = 4,
};

inline constexpr int kNumArtifactClasses = 5;

std::string_view class_name(ClassLabel label);

// Raw annotation span, after optional merging of the compound codes.
struct AnnotationSpan {
  std::string channel;
  double start_s = 0.0;
  double end_s = 0.0;
  int raw_label = 0;
};

struct EpochSample {
  std::vector<double> eeg;                   // µV
  std::optional<std::vector<double>> anorm;  // g
  std::optional<ClassLabel> label;
  std::string subject_id;
  std::string channel;
  int epoch_index = 0;
};

struct DatasetSplit {
  std::vector<EpochSample> train;
  std::vector<EpochSample> test;
  std::vector<std::string> warnings;
};

// Maps the raw annotation codes {0..6, 13, 23, 43} onto the five classes.
ClassLabel merge_compound_labels(int raw);

// Rank used to break exact duration ties; lower rank wins.
int tie_break_rank(ClassLabel label);

// Majority class over [epoch_start_s, epoch_start_s + epoch_len_s). Spans are
// expected to carry merged codes (0..4). Uncovered time counts as Usable.
// Durations are compared on a microsecond grid so ties are exact.
ClassLabel assign_epoch_label(const std::vector<AnnotationSpan>& spans,
                              double epoch_start_s, double epoch_len_s);

// Keeps every artifact sample and undersamples Usable to the artifact total.
std::vector<EpochSample> balance_rus(const std::vector<EpochSample>& samples,
                                     std::uint64_t seed);

DatasetSplit subject_split(const std::vector<EpochSample>& samples,
                           const std::set<std::string>& test_subjects);

std::map<ClassLabel, std::size_t> class_counts(const std::vector<EpochSample>& samples);

// `channel,start_s,end_s,label` with a header row. Compound codes are merged
// on read; unknown codes raise UnknownLabelCode.
std::vector<AnnotationSpan> read_annotations_csv(std::string_view text);
std::string write_annotations_csv(const std::vector<AnnotationSpan>& spans);

struct SplitManifest {
  std::vector<std::string> train_subjects;
  std::vector<std::string> test_subjects;
};
std::string write_split_manifest(const SplitManifest& manifest);
SplitManifest read_split_manifest(std::string_view json);

// Cuts every EEG channel into consecutive windows of `window_len_s`; trailing
// partial windows are dropped. Labels come from the spans of the matching
// channel when `spans` is given.
std::vector<EpochSample> make_epochs(const Recording& rec, const std::string& subject_id,
                                     double window_len_s,
                                     const std::vector<AnnotationSpan>* spans = nullptr);

// Number of samples per window; throws EpochMultipleViolation when
// window_len_s * fs is not integral.
std::size_t window_samples(int fs, double window_len_s);

}  // namespace floss
