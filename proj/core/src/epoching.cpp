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

#include "floss/epoching.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include <json.hpp>

#include "floss/error.hpp"
#include "floss/random.hpp"
#include "floss/features.hpp"

namespace floss {

std::string_view class_name(ClassLabel label) {
  switch (label) {
    case ClassLabel::Usable: return "Usable";
    case ClassLabel::NoData: return "NoData";
    case ClassLabel::HighNoise: return "HighNoise";
    case ClassLabel::Spiky: return "Spiky";
    case ClassLabel::MShaped: return "MShaped";
  }
  return "?";
}

ClassLabel merge_compound_labels(int raw) {
  switch (raw) {
    case 0: return ClassLabel::Usable;
    case 1: return ClassLabel::NoData;
    case 2:
    case 5:
    case 6:
    case 23: return ClassLabel::HighNoise;
    case 3:
    case 13: return ClassLabel::Spiky;
    case 4:
    case 43: return ClassLabel::MShaped;
    default:
      throw Error(ErrorCode::UnknownLabelCode, std::to_string(raw));
  }
}

int tie_break_rank(ClassLabel label) {
  // Usable > HighNoise > MShaped > Spiky > NoData
  switch (label) {
    case ClassLabel::Usable: return 0;
    case ClassLabel::HighNoise: return 1;
    case ClassLabel::MShaped: return 2;
    case ClassLabel::Spiky: return 3;
    case ClassLabel::NoData: return 4;
  }
  return 5;
}

namespace {

std::int64_t to_micros(double seconds) {
  return static_cast<std::int64_t>(std::llround(seconds * 1e6));
}

}  // namespace

ClassLabel assign_epoch_label(const std::vector<AnnotationSpan>& spans,
                              double epoch_start_s, double epoch_len_s) {
  const std::int64_t lo = to_micros(epoch_start_s);
  const std::int64_t hi = to_micros(epoch_start_s + epoch_len_s);

  // Elementary intervals between all boundaries; each gets the label of the
  // highest-precedence span covering it so overlapping spans never double
  // count time.
  std::vector<std::int64_t> cuts{lo, hi};
  for (const auto& s : spans) {
    cuts.push_back(std::clamp(to_micros(s.start_s), lo, hi));
    cuts.push_back(std::clamp(to_micros(s.end_s), lo, hi));
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::array<std::int64_t, kNumArtifactClasses> duration{};
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const std::int64_t a = cuts[i], b = cuts[i + 1];
    std::optional<ClassLabel> best;
    for (const auto& s : spans) {
      if (to_micros(s.start_s) <= a && to_micros(s.end_s) >= b) {
        const ClassLabel l = merge_compound_labels(s.raw_label);
        if (!best || tie_break_rank(l) < tie_break_rank(*best)) best = l;
      }
    }
    duration[static_cast<std::size_t>(best.value_or(ClassLabel::Usable))] += b - a;
  }

  ClassLabel winner = ClassLabel::Usable;
  for (int c = 0; c < kNumArtifactClasses; ++c) {
    const auto label = static_cast<ClassLabel>(c);
    const auto d = duration[static_cast<std::size_t>(c)];
    const auto w = duration[static_cast<std::size_t>(winner)];
    if (d > w || (d == w && tie_break_rank(label) < tie_break_rank(winner))) winner = label;
  }
  return winner;
}

std::map<ClassLabel, std::size_t> class_counts(const std::vector<EpochSample>& samples) {
  std::map<ClassLabel, std::size_t> counts;
  for (const auto& s : samples)
    if (s.label) ++counts[*s.label];
  return counts;
}

std::vector<EpochSample> balance_rus(const std::vector<EpochSample>& samples,
                                     std::uint64_t seed) {
  std::vector<std::size_t> usable, others;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!samples[i].label)
      throw Error(ErrorCode::InvalidArgument, "balance_rus needs labeled samples");
    (*samples[i].label == ClassLabel::Usable ? usable : others).push_back(i);
  }
  if (usable.size() > others.size()) {
    Rng rng(seed);
    // Partial Fisher-Yates: first `others.size()` entries form the draw.
    for (std::size_t i = 0; i < others.size(); ++i)
      std::swap(usable[i], usable[i + rng.index(usable.size() - i)]);
    usable.resize(others.size());
  }
  std::vector<std::size_t> keep;
  keep.reserve(usable.size() + others.size());
  keep.insert(keep.end(), usable.begin(), usable.end());
  keep.insert(keep.end(), others.begin(), others.end());
  std::sort(keep.begin(), keep.end());

  std::vector<EpochSample> out;
  out.reserve(keep.size());
  for (std::size_t i : keep) out.push_back(samples[i]);
  return out;
}

DatasetSplit subject_split(const std::vector<EpochSample>& samples,
                           const std::set<std::string>& test_subjects) {
  DatasetSplit split;
  std::set<std::string> seen;
  for (const auto& s : samples) {
    seen.insert(s.subject_id);
    (test_subjects.count(s.subject_id) ? split.test : split.train).push_back(s);
  }
  for (const auto& t : test_subjects) {
    if (!seen.count(t)) split.warnings.push_back("test subject '" + t + "' has no samples");
  }
  if (split.train.empty() || split.test.empty()) {
    throw Error(ErrorCode::EmptyPartition,
                split.train.empty() ? "training partition is empty" : "test partition is empty");
  }
  return split;
}

std::vector<AnnotationSpan> read_annotations_csv(std::string_view text) {
  std::vector<AnnotationSpan> spans;
  std::istringstream in{std::string(text)};
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header) {
      header = false;
      if (line.rfind("channel", 0) == 0) continue;
    }
    std::istringstream row(line);
    AnnotationSpan s;
    std::string start, end, label;
    if (!std::getline(row, s.channel, ',') || !std::getline(row, start, ',') ||
        !std::getline(row, end, ',') || !std::getline(row, label, ',')) {
      throw Error(ErrorCode::HeaderFieldUnparsable, "annotation row '" + line + "'");
    }
    try {
      s.start_s = std::stod(start);
      s.end_s = std::stod(end);
      s.raw_label = std::stoi(label);
    } catch (const std::exception&) {
      throw Error(ErrorCode::HeaderFieldUnparsable, "annotation row '" + line + "'");
    }
    if (!(s.start_s >= 0.0) || !(s.end_s > s.start_s))
      throw Error(ErrorCode::InvalidArgument, "annotation span must satisfy 0 <= start < end");
    s.raw_label = static_cast<int>(merge_compound_labels(s.raw_label));
    spans.push_back(std::move(s));
  }
  return spans;
}

std::string write_annotations_csv(const std::vector<AnnotationSpan>& spans) {
  std::ostringstream out;
  out << "channel,start_s,end_s,label\n";
  for (const auto& s : spans)
    out << s.channel << ',' << s.start_s << ',' << s.end_s << ',' << s.raw_label << '\n';
  return out.str();
}

std::string write_split_manifest(const SplitManifest& manifest) {
  nlohmann::json j;
  j["train"] = manifest.train_subjects;
  j["test"] = manifest.test_subjects;
  return j.dump(2) + "\n";
}

SplitManifest read_split_manifest(std::string_view json) {
  SplitManifest m;
  try {
    const auto j = nlohmann::json::parse(json);
    m.train_subjects = j.value("train", std::vector<std::string>{});
    m.test_subjects = j.at("test").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::HeaderFieldUnparsable, std::string("split manifest: ") + e.what());
  }
  return m;
}

std::size_t window_samples(int fs, double window_len_s) {
  const double n = fs * window_len_s;
  if (!(window_len_s > 0.0) || std::abs(n - std::round(n)) > 1e-9 || n < 1.0) {
    throw Error(ErrorCode::EpochMultipleViolation,
                "window of " + std::to_string(window_len_s) + " s is not a whole number of samples");
  }
  return static_cast<std::size_t>(std::llround(n));
}

std::vector<EpochSample> make_epochs(const Recording& rec, const std::string& subject_id,
                                     double window_len_s,
                                     const std::vector<AnnotationSpan>* spans) {
  const std::size_t w = window_samples(rec.fs, window_len_s);
  const std::size_t n_epochs = rec.sample_count() / w;
  std::vector<double> anorm;
  if (rec.acc) anorm = acc_norm(*rec.acc);

  std::vector<EpochSample> out;
  out.reserve(n_epochs * rec.channels.size());
  for (const auto& ch : rec.channels) {
    std::vector<AnnotationSpan> own;
    if (spans) {
      for (const auto& s : *spans)
        if (s.channel == ch.label) own.push_back(s);
    }
    for (std::size_t e = 0; e < n_epochs; ++e) {
      EpochSample s;
      s.subject_id = subject_id;
      s.channel = ch.label;
      s.epoch_index = static_cast<int>(e);
      s.eeg.assign(ch.samples.begin() + static_cast<std::ptrdiff_t>(e * w),
                   ch.samples.begin() + static_cast<std::ptrdiff_t>((e + 1) * w));
      if (rec.acc) {
        s.anorm.emplace(anorm.begin() + static_cast<std::ptrdiff_t>(e * w),
                        anorm.begin() + static_cast<std::ptrdiff_t>((e + 1) * w));
      }
      if (spans) s.label = assign_epoch_label(own, static_cast<double>(e) * window_len_s, window_len_s);
      out.push_back(std::move(s));
    }
  }
  return out;
}

}  // namespace floss
