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

#include "floss/report.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "floss/aggregate.hpp"
#include "floss/epoching.hpp"
#include "floss/gbt.hpp"
#include "floss/mobility_tib.hpp"
#include "floss/parallel.hpp"
#include "floss/random.hpp"
#include "floss/signal_io.hpp"
#include "floss/sleepstats.hpp"
#include "floss/spiky_filter.hpp"
#include "floss/svg.hpp"
#include "floss/synth.hpp"
#include "floss/usability.hpp"

namespace fs = std::filesystem;

namespace floss {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileUnreadable, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used == v.size()) return d;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::InvalidArgument, "config '" + key + "': not a number: " + v);
}

long long to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long long i = std::stoll(v, &used);
    if (used == v.size()) return i;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::InvalidArgument, "config '" + key + "': not an integer: " + v);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw Error(ErrorCode::InvalidArgument, "config '" + key + "': not a boolean: " + v);
}

struct Models {
  gbt::GbtModel usability;
  std::optional<gbt::GbtModel> mobility;
};

gbt::GbtModel load_model(const fs::path& path) {
  return gbt::GbtModel::from_json(read_file(path));
}

using Outputs = std::vector<std::pair<std::string, std::string>>;  // file name, content

Outputs process_night(const fs::path& path, const PipelineConfig& cfg, const Models& models, int workers,
                      std::vector<std::string>& warnings) {
  Recording rec = read_recording(path);
  validate(rec);
  if (rec.channels.empty()) throw Error(ErrorCode::ChannelMissing, "no EEG channels in " + path.filename().string());
  if (rec.sample_count() == 0) throw Error(ErrorCode::EmptyRecording, path.filename().string());
  if (models.mobility && !rec.acc)
    throw Error(ErrorCode::AccMissingWhenRequired, "mobility model given but recording has no ACC");

  const int sf = scaling_factor(cfg.sleep_epoch_len_s, cfg.epoch_len_s);
  std::optional<std::vector<int>> sleep_scores;
  const fs::path sidecar = scores_sidecar(path);
  if (fs::exists(sidecar)) sleep_scores = normalize_sleep_scores(read_scores_text(read_file(sidecar)));

  if (cfg.despike) {
    const FilterCascade cascade = design_cascade(rec.fs);
    for (auto& ch : rec.channels) ch.samples = apply_zero_phase(cascade, ch.samples);
  }

  Outputs out;
  const UsabilityScores scores = score_recording(rec, models.usability, cfg.epoch_len_s, workers);
  for (const auto& w : scores.warnings) warnings.push_back(w);
  out.emplace_back("usability.csv", write_scores_csv(scores));
  out.emplace_back("usability.svg", usability_graph_svg(rec, scores));

  std::vector<MobilityLabel> mobility;
  std::optional<TibResult> tib;
  double mobility_epoch_s = cfg.epoch_len_s;
  if (models.mobility) {
    mobility = classify_mobility(*rec.acc, rec.fs, *models.mobility);
    mobility_epoch_s = FeatureLayout::from_json(models.mobility->layout_json).epoch_len_s;
    out.emplace_back("mobility.csv", write_mobility_csv(mobility, mobility_epoch_s));
    tib = detect_tib(mobility, cfg.tib_run_epochs, mobility_epoch_s);
  }

  if (sleep_scores) {
    std::vector<std::vector<int>> usability = scores.labels;
    AggregationTrace trace;
    try {
      trace = aggregate(usability, *sleep_scores, sf);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::LengthMismatch) throw Error(ErrorCode::ScoreLengthMismatch, e.what());
      throw;
    }
    const auto& s_ar = trace.artifact_rejected;
    out.emplace_back("artifact_rejected.txt", write_scores_text(s_ar));
    out.emplace_back("artifact_rejected.csv", write_scores_timed_csv(s_ar, cfg.sleep_epoch_len_s));
    out.emplace_back("stats.json", compute_stats(s_ar, cfg.sleep_epoch_len_s, tib).to_json() + "\n");
    out.emplace_back("hypnogram.svg", hypnogram_svg(s_ar, cfg.sleep_epoch_len_s, mobility, mobility_epoch_s, tib));
  } else {
    warnings.push_back("no sleep scores found at " + sidecar.filename().string() + "; aggregation skipped");
  }
  return out;
}

}  // namespace

void PipelineConfig::validate() const {
  if (input_dir.empty()) throw Error(ErrorCode::InvalidArgument, "no input directory");
  if (out_dir.empty()) throw Error(ErrorCode::InvalidArgument, "no output directory");
  if (model_path.empty()) throw Error(ErrorCode::InvalidArgument, "no usability model");
  if (!(epoch_len_s > 0.0)) throw Error(ErrorCode::InvalidArgument, "epoch-len must be positive");
  if (!(sleep_epoch_len_s > 0.0)) throw Error(ErrorCode::InvalidArgument, "sleep-epoch-len must be positive");
  if (tib_run_epochs < 1) throw Error(ErrorCode::InvalidArgument, "tib-run-epochs must be >= 1");
  if (workers < 1) throw Error(ErrorCode::InvalidArgument, "workers must be >= 1");
}

std::map<std::string, std::string> parse_config_text(std::string_view text) {
  std::map<std::string, std::string> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::InvalidArgument, "config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(t.substr(0, eq));
    std::replace(key.begin(), key.end(), '_', '-');
    out[key] = trim(t.substr(eq + 1));
  }
  return out;
}

PipelineConfig apply_config(const std::map<std::string, std::string>& entries, PipelineConfig cfg) {
  for (const auto& [key, v] : entries) {
    if (key == "input") cfg.input_dir = v;
    else if (key == "out") cfg.out_dir = v;
    else if (key == "model") cfg.model_path = v;
    else if (key == "mobility-model") cfg.mobility_model_path = v.empty() ? std::nullopt : std::optional<fs::path>(v);
    else if (key == "epoch-len") cfg.epoch_len_s = to_double(key, v);
    else if (key == "sleep-epoch-len") cfg.sleep_epoch_len_s = to_double(key, v);
    else if (key == "variant") cfg.variant = v;
    else if (key == "despike") cfg.despike = to_bool(key, v);
    else if (key == "tib-run-epochs") cfg.tib_run_epochs = static_cast<int>(to_int(key, v));
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(to_int(key, v));
    else if (key == "workers") cfg.workers = static_cast<int>(to_int(key, v));
    else throw Error(ErrorCode::InvalidArgument, "unknown config key '" + key + "'");
  }
  return cfg;
}

fs::path scores_sidecar(const fs::path& recording) {
  fs::path p = recording;
  p.replace_extension(".scores.txt");
  return p;
}

std::vector<fs::path> discover_nights(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error(ErrorCode::InvalidArgument, "not a directory: " + dir.string());
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const fs::path& p = entry.path();
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    const std::string stem = p.stem().string();
    if (ext == ".edf" || (ext == ".csv" && stem.find('.') == std::string::npos)) out.push_back(p);
  }
  std::sort(out.begin(), out.end(), [](const fs::path& a, const fs::path& b) {
    return a.stem().string() != b.stem().string() ? a.stem().string() < b.stem().string()
                                                  : a.filename().string() < b.filename().string();
  });
  return out;
}

std::vector<NightReport> run_pipeline(const PipelineConfig& cfg) {
  cfg.validate();
  Models models{load_model(cfg.model_path), std::nullopt};
  if (cfg.variant && models.usability.variant != *cfg.variant) {
    throw Error(ErrorCode::InvalidArgument, "model variant '" + models.usability.variant +
                                                "' does not match requested '" + *cfg.variant + "'");
  }
  if (cfg.mobility_model_path) models.mobility = load_model(*cfg.mobility_model_path);

  const auto nights = discover_nights(cfg.input_dir);
  fs::create_directories(cfg.out_dir);
  std::vector<NightReport> reports(nights.size());
  const int inner = nights.size() == 1 ? cfg.workers : 1;

  parallel_for(nights.size(), cfg.workers, [&](std::size_t i) {
    NightReport& r = reports[i];
    r.night_id = nights[i].stem().string();
    const fs::path dir = cfg.out_dir / r.night_id;
    std::error_code ec;
    fs::remove_all(dir, ec);
    try {
      const Outputs outs = process_night(nights[i], cfg, models, inner, r.warnings);
      fs::create_directories(dir);
      try {
        for (const auto& [name, content] : outs) {
          write_text_file(dir / name, content);
          r.outputs.push_back(name);
        }
      } catch (...) {
        fs::remove_all(dir, ec);
        r.outputs.clear();
        throw;
      }
      r.ok = true;
    } catch (const Error& e) {
      r.ok = false;
      r.error_code = night_error(e.code());
      r.error_message = e.what();
    } catch (const std::exception& e) {
      r.ok = false;
      r.error_code = ErrorCode::FileUnreadable;
      r.error_message = e.what();
    }
  });
  write_text_file(cfg.out_dir / "report.json", reports_to_json(reports) + "\n");
  return reports;
}

std::string reports_to_json(const std::vector<NightReport>& reports) {
  nlohmann::ordered_json j;
  std::size_t ok = 0;
  for (const auto& r : reports) ok += r.ok ? 1 : 0;
  j["nights"] = reports.size();
  j["ok"] = ok;
  j["skipped"] = reports.size() - ok;
  auto list = nlohmann::ordered_json::array();
  auto skipped = nlohmann::ordered_json::array();
  for (const auto& r : reports) {
    nlohmann::ordered_json n;
    n["night_id"] = r.night_id;
    n["status"] = r.ok ? "ok" : "skipped";
    if (r.error_code) {
      n["error_code"] = std::string(to_string(*r.error_code));
      n["error"] = r.error_message;
      skipped.push_back({{"night_id", r.night_id}, {"error_code", std::string(to_string(*r.error_code))},
                         {"error", r.error_message}});
    }
    n["outputs"] = r.outputs;
    n["warnings"] = r.warnings;
    list.push_back(std::move(n));
  }
  j["reports"] = std::move(list);
  j["unprocessed"] = std::move(skipped);
  return j.dump(2);
}

std::vector<fs::path> write_synthetic_nights(const fs::path& dir, int count, double duration_s, std::uint64_t seed) {
  fs::create_directories(dir);
  std::vector<fs::path> out;
  for (int i = 0; i < count; ++i) {
    synth::NightSpec spec;
    char id[32];
    std::snprintf(id, sizeof id, "night%02d", i + 1);
    spec.night_id = id;
    spec.duration_s = duration_s;
    spec.seed = derive_seed(seed, static_cast<std::uint64_t>(i));
    const synth::Night night = synth::gen_night(spec);
    const fs::path edf = dir / (spec.night_id + ".edf");
    write_edf_file(edf, night.recording);
    write_text_file(scores_sidecar(edf), write_scores_text(night.sleep_scores));
    write_text_file(dir / (spec.night_id + ".annotations.csv"), write_annotations_csv(night.annotations));
    write_text_file(dir / (spec.night_id + ".mobility.csv"), write_mobility_csv(night.mobility, spec.usability_epoch_s));
    out.push_back(edf);
  }
  return out;
}

}  // namespace floss
