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

#include "floss/aggregate.hpp"

#include <cmath>
#include <sstream>

#include "floss/error.hpp"

namespace floss {

std::string_view stage_name(int code) {
  switch (code) {
    case -1: return "un";
    case 0: return "W";
    case 1: return "N1";
    case 2: return "N2";
    case 3: return "N3";
    case 4: return "REM";
  }
  return "?";
}

std::vector<int> binarize(const std::vector<int>& usability) {
  std::vector<int> out(usability.size());
  for (std::size_t i = 0; i < usability.size(); ++i) {
    if (usability[i] < 0 || usability[i] > 4)
      throw Error(ErrorCode::InvalidArgument, "usability label out of range: " + std::to_string(usability[i]));
    out[i] = usability[i] == 0 ? 0 : 1;
  }
  return out;
}

std::vector<int> channel_majority(const std::vector<std::vector<int>>& binarized) {
  if (binarized.empty()) return {};
  const std::size_t n = binarized.front().size();
  for (const auto& b : binarized)
    if (b.size() != n) throw Error(ErrorCode::LengthMismatch, "channels differ in epoch count");
  std::vector<int> out(n, 0);
  const auto channels = binarized.size();
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t unusable = 0;
    for (const auto& b : binarized) unusable += b[i] ? 1 : 0;
    // sum / n > 0.5 without floating point
    out[i] = 2 * unusable > channels ? 1 : 0;
  }
  return out;
}

std::vector<int> downsample_majority(const std::vector<int>& aggregated, int scaling_factor) {
  if (scaling_factor < 1) throw Error(ErrorCode::InvalidArgument, "scaling factor must be >= 1");
  const auto sf = static_cast<std::size_t>(scaling_factor);
  std::vector<int> out(aggregated.size() / sf);
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::size_t sum = 0;
    for (std::size_t j = i * sf; j < (i + 1) * sf; ++j) sum += aggregated[j] ? 1 : 0;
    out[i] = 2 * sum > sf ? 1 : 0;
  }
  return out;
}

std::vector<int> reject_artifacts(const std::vector<int>& sleep_scores, const std::vector<int>& unusable) {
  const std::size_t a = sleep_scores.size(), b = unusable.size();
  if ((a > b ? a - b : b - a) > 1) {
    throw Error(ErrorCode::LengthMismatch, "sleep scores (" + std::to_string(a) + ") and usability (" +
                                               std::to_string(b) + ") differ by more than one epoch");
  }
  const std::size_t n = std::min(a, b);
  std::vector<int> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = unusable[i] ? kUnscorable : sleep_scores[i];
  return out;
}

std::vector<int> normalize_sleep_scores(const std::vector<int>& scores) {
  std::vector<int> out(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const int s = scores[i];
    if (s == 5) out[i] = kRem;
    else if (s >= kUnscorable && s <= kRem) out[i] = s;
    else throw Error(ErrorCode::UnknownLabelCode, "sleep stage " + std::to_string(s));
  }
  return out;
}

int scaling_factor(double sleep_epoch_s, double usability_epoch_s) {
  const double ratio = sleep_epoch_s / usability_epoch_s;
  if (!(usability_epoch_s > 0.0) || ratio < 1.0 || std::abs(ratio - std::round(ratio)) > 1e-9) {
    throw Error(ErrorCode::EpochMultipleViolation,
                "sleep epoch must be a whole multiple of the usability epoch");
  }
  return static_cast<int>(std::lround(ratio));
}

AggregationTrace aggregate(const std::vector<std::vector<int>>& usability, const std::vector<int>& sleep_scores,
                           int sf) {
  AggregationTrace t;
  for (const auto& u : usability) t.binarized.push_back(binarize(u));
  t.aggregated = channel_majority(t.binarized);
  t.downsampled = downsample_majority(t.aggregated, sf);
  t.artifact_rejected = reject_artifacts(normalize_sleep_scores(sleep_scores), t.downsampled);
  return t;
}

std::string write_scores_text(const std::vector<int>& scores) {
  std::string out;
  for (int s : scores) out += std::to_string(s) + "\n";
  return out;
}

std::vector<int> read_scores_text(std::string_view text) {
  std::vector<int> out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      std::size_t used = 0;
      const int v = std::stoi(line, &used);
      if (used != line.size()) throw std::invalid_argument(line);
      out.push_back(v);
    } catch (const std::exception&) {
      throw Error(ErrorCode::HeaderFieldUnparsable, "score line '" + line + "'");
    }
  }
  return out;
}

std::string write_scores_timed_csv(const std::vector<int>& scores, double epoch_len_s) {
  std::ostringstream out;
  out << "epoch_index,start_s,stage\n";
  for (std::size_t i = 0; i < scores.size(); ++i)
    out << i << ',' << static_cast<double>(i) * epoch_len_s << ',' << scores[i] << '\n';
  return out.str();
}

}  // namespace floss
