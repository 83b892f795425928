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

// floss command line: usability checks, TIB, despiking, sleep statistics,
// model training, synthetic data and batch reports.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "floss/aggregate.hpp"
#include "floss/epoching.hpp"
#include "floss/error.hpp"
#include "floss/gbt.hpp"
#include "floss/mobility_tib.hpp"
#include "floss/report.hpp"
#include "floss/signal_io.hpp"
#include "floss/sleepstats.hpp"
#include "floss/spiky_filter.hpp"
#include "floss/svg.hpp"
#include "floss/synth.hpp"
#include "floss/training.hpp"
#include "floss/usability.hpp"

namespace fs = std::filesystem;
using namespace floss;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileUnreadable, "cannot open " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

gbt::GbtModel load_model(const std::string& p, const char* flag) {
  if (p.empty()) throw Error(ErrorCode::InvalidArgument, std::string(flag) + " is required");
  return gbt::GbtModel::from_json(slurp(p));
}

struct CommonOptions {
  std::string input;
  std::string out;
  std::string model;
  std::string mobility_model;
  double epoch_len = 10.0;
  double sleep_epoch_len = 30.0;
  std::string variant = "default";
  bool despike = false;
  int tib_run_epochs = 12;
  std::uint64_t seed = 0;
  int workers = 1;
};

int cmd_check(const CommonOptions& o) {
  Recording rec = read_recording(o.input);
  if (o.despike) {
    const auto cascade = design_cascade(rec.fs);
    for (auto& ch : rec.channels) ch.samples = apply_zero_phase(cascade, ch.samples);
  }
  const auto model = load_model(o.model, "--model");
  const auto scores = score_recording(rec, model, o.epoch_len, o.workers);
  for (const auto& w : scores.warnings) std::cerr << "warning: " << w << '\n';
  const fs::path out = o.out.empty() ? fs::path(".") : fs::path(o.out);
  fs::create_directories(out);
  write_text_file(out / "usability.csv", write_scores_csv(scores));
  emit_usability_graph(rec, scores, out / "usability.svg");
  for (std::size_t c = 0; c < scores.channels.size(); ++c) {
    std::size_t usable = 0;
    for (int l : scores.labels[c]) usable += l == 0 ? 1 : 0;
    std::printf("%s: %zu/%zu epochs usable\n", scores.channels[c].c_str(), usable, scores.labels[c].size());
  }
  return 0;
}

int cmd_tib(const CommonOptions& o) {
  const Recording rec = read_recording(o.input);
  if (!rec.acc) throw Error(ErrorCode::AccMissingWhenRequired, o.input + " has no ACC signals");
  const auto model = load_model(o.mobility_model, "--mobility-model");
  const auto labels = classify_mobility(*rec.acc, rec.fs, model);
  const double L = FeatureLayout::from_json(model.layout_json).epoch_len_s;
  if (!o.out.empty()) {
    fs::create_directories(o.out);
    write_text_file(fs::path(o.out) / "mobility.csv", write_mobility_csv(labels, L));
  }
  const TibResult tib = detect_tib(labels, o.tib_run_epochs, L);
  std::printf("{\"Lights_out_sec\": %.6g, \"Lights_on_sec\": %.6g, \"TIB_min\": %.6g}\n", tib.lights_out_s,
              tib.lights_on_s, tib.tib_min);
  return 0;
}

int cmd_despike(const CommonOptions& o) {
  Recording rec = read_recording(o.input);
  const auto cascade = design_cascade(rec.fs);
  for (auto& ch : rec.channels) ch.samples = apply_zero_phase(cascade, ch.samples);
  const fs::path out = o.out.empty() ? fs::path(o.input).replace_extension(".despiked.edf") : fs::path(o.out);
  // Refit the scaling: filtering can move the peak.
  for (auto& ch : rec.channels) ch.scaling.reset();
  write_edf_file(out, rec);
  fs::path response = out;
  response.replace_extension(".response.csv");
  write_text_file(response, response_csv(cascade));
  std::printf("wrote %s and %s\n", out.string().c_str(), response.string().c_str());
  return 0;
}

int cmd_stats(const CommonOptions& o, std::optional<double> lights_out, std::optional<double> lights_on) {
  const auto scores = normalize_sleep_scores(read_scores_text(slurp(o.input)));
  std::optional<TibResult> tib;
  if (lights_out || lights_on) {
    if (!lights_out || !lights_on)
      throw Error(ErrorCode::InvalidArgument, "--lights-out and --lights-on go together");
    tib = TibResult{*lights_out, *lights_on, (*lights_on - *lights_out + 1.0) / 60.0};
  }
  const std::string json = compute_stats(scores, o.sleep_epoch_len, tib).to_json() + "\n";
  if (o.out.empty()) std::cout << json;
  else write_text_file(o.out, json);
  return 0;
}

struct TrainOptions {
  std::string kind = "usability";
  std::string split;
  int subjects = 10;
  int per_class = 50;
  int test_subjects = 2;
  int iterations = 100;
  double eta = 0.01;
  bool welch = false;
};

std::vector<EpochSample> load_labeled_epochs(const fs::path& dir, double epoch_len, int& fs_out) {
  std::vector<EpochSample> out;
  fs_out = 0;
  for (const auto& rec_path : discover_nights(dir)) {
    fs::path ann = rec_path;
    ann.replace_extension(".annotations.csv");
    if (!fs::exists(ann)) continue;
    const Recording rec = read_recording(rec_path);
    if (fs_out != 0 && rec.fs != fs_out)
      throw Error(ErrorCode::SamplingRateMismatch, rec_path.string() + " differs in sampling rate");
    fs_out = rec.fs;
    const auto spans = read_annotations_csv(slurp(ann));
    auto epochs = make_epochs(rec, rec_path.stem().string(), epoch_len, &spans);
    for (auto& e : epochs) out.push_back(std::move(e));
  }
  if (out.empty()) throw Error(ErrorCode::EmptyPartition, "no annotated recordings in " + dir.string());
  return out;
}

int cmd_train(const CommonOptions& o, const TrainOptions& t) {
  if (o.out.empty()) throw Error(ErrorCode::InvalidArgument, "--out is required");
  gbt::TrainConfig cfg;
  cfg.eta = t.eta;
  cfg.n_iterations = t.iterations;
  cfg.seed = o.seed;
  cfg.threads = o.workers;
  constexpr int kFs = 256;

  if (t.kind == "mobility") {
    const auto corpus = synth_mobility_corpus(t.subjects, t.per_class, kFs, o.epoch_len, o.seed);
    const auto model = train_mobility(corpus, t.welch, cfg, kFs, o.epoch_len);
    write_text_file(o.out, model.to_json());
    std::printf("mobility model (%s) written to %s\n", model.variant.c_str(), o.out.c_str());
    return 0;
  }
  if (t.kind != "usability") throw Error(ErrorCode::InvalidArgument, "--kind must be usability or mobility");

  const Variant variant = parse_variant(o.variant);
  std::vector<EpochSample> samples;
  std::set<std::string> test_ids;
  int fs = kFs;
  if (o.input.empty()) {
    samples = synth::gen_artifact_dataset(t.subjects, t.per_class, kFs, o.epoch_len, o.seed);
    for (int s = t.subjects - t.test_subjects; s < t.subjects; ++s) {
      char id[16];
      std::snprintf(id, sizeof id, "S%02d", s + 1);
      test_ids.insert(id);
    }
  } else {
    samples = load_labeled_epochs(o.input, o.epoch_len, fs);
    if (!t.split.empty()) {
      const auto manifest = read_split_manifest(slurp(t.split));
      test_ids.insert(manifest.test_subjects.begin(), manifest.test_subjects.end());
    }
  }
  DatasetSplit split;
  if (test_ids.empty()) split.train = std::move(samples);
  else split = subject_split(samples, test_ids);
  for (const auto& w : split.warnings) std::cerr << "warning: " << w << '\n';

  const auto train = balance_rus(split.train, o.seed);
  const auto model = train_usability(train, variant, cfg, fs, o.epoch_len, o.workers);
  write_text_file(o.out, model.to_json());
  std::printf("usability model (%s) trained on %zu epochs, written to %s\n", variant.name.c_str(), train.size(),
              o.out.c_str());
  if (!split.test.empty()) {
    const auto layout = usability_layout(fs, o.epoch_len, variant.lite);
    const auto test = usability_matrix(split.test, layout, variant.binary, o.workers);
    const auto eval = evaluate(test.y, predict_all(model, test, o.workers), model.num_classes);
    std::cout << eval.to_json() << '\n';
  }
  return 0;
}

int cmd_synth(const CommonOptions& o, int nights, double duration) {
  if (o.out.empty()) throw Error(ErrorCode::InvalidArgument, "--out is required");
  const auto paths = write_synthetic_nights(o.out, nights, duration, o.seed);
  for (const auto& p : paths) std::printf("%s\n", p.string().c_str());
  return 0;
}

int cmd_report(const std::string& config_path, const CLI::App& sub, const CommonOptions& o) {
  PipelineConfig cfg;
  if (!config_path.empty()) cfg = apply_config(parse_config_text(slurp(config_path)));
  std::map<std::string, std::string> flags;
  auto given = [&](const char* name) { return sub.count(name) > 0; };
  if (given("--input")) flags["input"] = o.input;
  if (given("--out")) flags["out"] = o.out;
  if (given("--model")) flags["model"] = o.model;
  if (given("--mobility-model")) flags["mobility-model"] = o.mobility_model;
  if (given("--epoch-len")) flags["epoch-len"] = std::to_string(o.epoch_len);
  if (given("--sleep-epoch-len")) flags["sleep-epoch-len"] = std::to_string(o.sleep_epoch_len);
  if (given("--variant")) flags["variant"] = o.variant;
  if (given("--despike")) flags["despike"] = o.despike ? "true" : "false";
  if (given("--tib-run-epochs")) flags["tib-run-epochs"] = std::to_string(o.tib_run_epochs);
  if (given("--seed")) flags["seed"] = std::to_string(o.seed);
  if (given("--workers")) flags["workers"] = std::to_string(o.workers);
  cfg = apply_config(flags, cfg);

  const auto reports = run_pipeline(cfg);
  std::size_t ok = 0;
  for (const auto& r : reports) ok += r.ok ? 1 : 0;
  std::printf("%zu nights: %zu ok, %zu skipped\n", reports.size(), ok, reports.size() - ok);
  for (const auto& r : reports)
    if (!r.ok) std::printf("  %s: %s\n", r.night_id.c_str(), std::string(to_string(*r.error_code)).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"floss: artifact-aware sleep EEG refinement"};
  app.require_subcommand(1);
  CommonOptions o;

  auto add_common = [&](CLI::App* s) {
    s->add_option("--input", o.input, "Input file or directory");
    s->add_option("--out", o.out, "Output file or directory");
    s->add_option("--model", o.model, "Usability model JSON");
    s->add_option("--mobility-model", o.mobility_model, "Mobility model JSON");
    s->add_option("--epoch-len", o.epoch_len, "Usability epoch length in seconds")->check(CLI::PositiveNumber);
    s->add_option("--sleep-epoch-len", o.sleep_epoch_len, "Sleep epoch length in seconds")
        ->check(CLI::PositiveNumber);
    s->add_option("--variant", o.variant, "Usability model variant")
        ->check(CLI::IsMember({"default", "lite", "binary", "weighted-m", "lite-binary", "lite-weighted-m"}));
    s->add_flag("--despike", o.despike, "Remove spiky noise before scoring");
    s->add_option("--tib-run-epochs", o.tib_run_epochs, "Consecutive Lying epochs that open or close TIB")
        ->check(CLI::PositiveNumber);
    s->add_option("--seed", o.seed, "Random seed");
    s->add_option("--workers", o.workers, "Worker threads")->check(CLI::PositiveNumber);
  };

  auto* check = app.add_subcommand("check", "Score usability of one recording");
  add_common(check);
  auto* tib = app.add_subcommand("tib", "Classify mobility and detect time in bed");
  add_common(tib);
  auto* despike = app.add_subcommand("despike", "Filter spiky noise and write a new EDF");
  add_common(despike);
  auto* stats = app.add_subcommand("stats", "Sleep statistics from a score file");
  add_common(stats);
  std::optional<double> lights_out, lights_on;
  stats->add_option("--lights-out", lights_out, "Lights Out in seconds");
  stats->add_option("--lights-on", lights_on, "Lights On in seconds");
  auto* train = app.add_subcommand("train", "Train a usability or mobility model");
  add_common(train);
  TrainOptions t;
  train->add_option("--kind", t.kind, "usability or mobility")->check(CLI::IsMember({"usability", "mobility"}));
  train->add_option("--split", t.split, "Split manifest JSON for annotated input");
  train->add_option("--subjects", t.subjects, "Synthetic subjects (or mobility sequences)");
  train->add_option("--per-class", t.per_class, "Synthetic epochs per class and subject");
  train->add_option("--test-subjects", t.test_subjects, "Synthetic subjects held out for evaluation");
  train->add_option("--iterations", t.iterations, "Boosting iterations");
  train->add_option("--eta", t.eta, "Learning rate");
  train->add_flag("--welch", t.welch, "Mobility: Welch band-power features");
  auto* synth_cmd = app.add_subcommand("synth", "Write synthetic nights");
  add_common(synth_cmd);
  int nights = 3;
  double duration = 3600.0;
  synth_cmd->add_option("--nights", nights, "Number of nights");
  synth_cmd->add_option("--duration", duration, "Seconds per night");
  auto* report = app.add_subcommand("report", "Process a directory of nights");
  add_common(report);
  std::string config_path;
  report->add_option("--config", config_path, "key = value configuration file");

  CLI11_PARSE(app, argc, argv);
  try {
    if (check->parsed()) return cmd_check(o);
    if (tib->parsed()) return cmd_tib(o);
    if (despike->parsed()) return cmd_despike(o);
    if (stats->parsed()) return cmd_stats(o, lights_out, lights_on);
    if (train->parsed()) return cmd_train(o, t);
    if (synth_cmd->parsed()) return cmd_synth(o, nights, duration);
    if (report->parsed()) return cmd_report(config_path, *report, o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
