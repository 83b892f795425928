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

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include <json.hpp>

#include "floss/aggregate.hpp"
#include "floss/error.hpp"
#include "floss/report.hpp"
#include "floss/svg.hpp"
#include "floss/synth.hpp"
#include "floss/training.hpp"

using namespace floss;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

// Fresh scratch directory per test case.
fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("floss_report_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

// Small lite usability model and a stat mobility model saved once.
const fs::path& models_dir() {
  static const fs::path dir = [] {
    const fs::path d = scratch("models");
    gbt::TrainConfig cfg;
    cfg.n_iterations = 20;
    cfg.eta = 0.1;
    const auto samples = synth::gen_artifact_dataset(3, 15, 256, 10.0, 8);
    write_text_file(d / "usability.json", train_usability(samples, parse_variant("lite"), cfg, 256, 10.0).to_json());
    cfg.num_classes = kNumMobilityClasses;
    write_text_file(d / "mobility.json",
                    train_mobility(synth_mobility_corpus(4, 10, 256, 10.0, 3), false, cfg, 256, 10.0).to_json());
    return d;
  }();
  return dir;
}

PipelineConfig config_for(const fs::path& in, const fs::path& out) {
  PipelineConfig cfg;
  cfg.input_dir = in;
  cfg.out_dir = out;
  cfg.model_path = models_dir() / "usability.json";
  cfg.mobility_model_path = models_dir() / "mobility.json";
  cfg.tib_run_epochs = 6;
  return cfg;
}

// Stages visited by the hypnogram polyline, recovered from the y coordinates.
std::vector<int> stages_from_hypnogram(const std::string& svg) {
  const std::regex poly("class=\"hypnogram\"[^>]*points=\"([^\"]*)\"");
  std::smatch m;
  REQUIRE(std::regex_search(svg, m, poly));
  std::istringstream pts(m[1].str());
  std::vector<double> ys;
  std::string p;
  while (pts >> p) ys.push_back(std::stod(p.substr(p.find(',') + 1)));
  const int by_row[] = {0, 4, 1, 2, 3, -1};
  std::vector<int> out;
  for (std::size_t i = 0; i < ys.size(); i += 2) {
    CHECK(ys[i] == ys[i + 1]);
    const int row = static_cast<int>((ys[i] - 30.0) / 24.0);
    out.push_back(by_row[row]);
  }
  return out;
}

}  // namespace

TEST_SUITE("report") {
  TEST_CASE("config text") {
    const auto kv = parse_config_text("# night batch\ninput = /data/in\nout=/data/out\nepoch_len = 5\n\nvariant=lite # trailing\n");
    CHECK(kv.at("input") == "/data/in");
    CHECK(kv.at("epoch-len") == "5");
    CHECK(kv.at("variant") == "lite");
    const auto cfg = apply_config(kv);
    CHECK(cfg.epoch_len_s == 5.0);
    CHECK(cfg.out_dir == fs::path("/data/out"));
    CHECK(*cfg.variant == "lite");
    CHECK_THROWS_AS(apply_config({{"colour", "red"}}), Error);
    CHECK_THROWS_AS(apply_config({{"epoch-len", "abc"}}), Error);
    PipelineConfig bad;
    bad.epoch_len_s = -1;
    CHECK_THROWS_AS(bad.validate(), Error);
  }

  TEST_CASE("discovery skips sidecars") {
    const auto d = scratch("discover");
    for (const char* n : {"b.edf", "a.csv", "a.annotations.csv", "a.scores.txt", "notes.md"}) write_text_file(d / n, "x");
    const auto found = discover_nights(d);
    REQUIRE(found.size() == 2);
    CHECK(found[0].filename() == "a.csv");
    CHECK(found[1].filename() == "b.edf");
    CHECK(scores_sidecar(d / "b.edf").filename() == "b.scores.txt");
  }

  TEST_CASE("a truncated night is skipped and the rest are processed") {
    const auto in = scratch("trunc_in"), out = scratch("trunc_out");
    const auto nights = write_synthetic_nights(in, 3, 900, 42);
    REQUIRE(nights.size() == 3);
    fs::resize_file(nights[1], fs::file_size(nights[1]) / 2);
    const auto reports = run_pipeline(config_for(in, out));
    REQUIRE(reports.size() == 3);
    CHECK(reports[0].ok);
    CHECK(reports[2].ok);
    CHECK_FALSE(reports[1].ok);
    CHECK(reports[1].error_code == ErrorCode::TruncatedFile);
    CHECK_FALSE(fs::exists(out / reports[1].night_id));
    for (const char* f : {"usability.csv", "usability.svg", "mobility.csv", "artifact_rejected.txt",
                          "artifact_rejected.csv", "stats.json", "hypnogram.svg"})
      CHECK(fs::exists(out / reports[0].night_id / f));
    const auto j = nlohmann::json::parse(slurp(out / "report.json"));
    CHECK(j["nights"] == 3);
    CHECK(j["ok"] == 2);
    CHECK(j["skipped"] == 1);
    CHECK(j["reports"][1]["error_code"] == "TruncatedFile");
    const auto stats = nlohmann::json::parse(slurp(out / reports[0].night_id / "stats.json"));
    CHECK(stats.contains("TIB_min"));
    CHECK(stats["Lights_out_sec"].get<double>() > 0.0);
  }

  TEST_CASE("empty input directory") {
    const auto in = scratch("empty_in"), out = scratch("empty_out");
    CHECK(run_pipeline(config_for(in, out)).empty());
    const auto j = nlohmann::json::parse(slurp(out / "report.json"));
    CHECK(j["nights"] == 0);
  }

  TEST_CASE("missing model is a configuration error") {
    const auto in = scratch("nomodel_in"), out = scratch("nomodel_out");
    auto cfg = config_for(in, out);
    cfg.model_path = in / "nope.json";
    CHECK_THROWS_AS(run_pipeline(cfg), Error);
    cfg = config_for(in, out);
    cfg.variant = "binary";
    CHECK_THROWS_AS(run_pipeline(cfg), Error);
  }

  TEST_CASE("repeated runs are byte identical") {
    const auto in = scratch("det_in"), a = scratch("det_a"), b = scratch("det_b");
    write_synthetic_nights(in, 2, 600, 7);
    auto cfg = config_for(in, a);
    cfg.workers = 2;
    run_pipeline(cfg);
    cfg.out_dir = b;
    cfg.workers = 1;
    run_pipeline(cfg);
    std::size_t compared = 0;
    for (const auto& e : fs::recursive_directory_iterator(a)) {
      if (!e.is_regular_file()) continue;
      const auto rel = fs::relative(e.path(), a);
      REQUIRE(fs::exists(b / rel));
      CHECK(slurp(e.path()) == slurp(b / rel));
      ++compared;
    }
    CHECK(compared >= 15);
  }

  TEST_CASE("usability graph has one strip per channel") {
    const auto night = synth::gen_night({.night_id = "n", .duration_s = 120, .seed = 1});
    UsabilityScores s;
    for (const auto& ch : night.recording.channels) {
      s.channels.push_back(ch.label);
      s.labels.push_back(std::vector<int>(12, 0));
    }
    const std::string svg = usability_graph_svg(night.recording, s);
    CHECK(svg.rfind("<?xml", 0) == 0);
    std::size_t strips = 0;
    for (std::size_t p = 0; (p = svg.find("class=\"usability-strip\"", p)) != std::string::npos; ++p) ++strips;
    CHECK(strips == night.recording.channels.size());
    CHECK(svg.find("class=\"acc-norm\"") != std::string::npos);
    // All usable: each strip is a single green run.
    const std::regex strip_re("<g class=\"usability-strip\">([\\s\\S]*?)</g>");
    for (auto it = std::sregex_iterator(svg.begin(), svg.end(), strip_re); it != std::sregex_iterator(); ++it) {
      const std::string body = (*it)[1].str();
      std::size_t rects = 0;
      for (std::size_t p = 0; (p = body.find("<rect", p)) != std::string::npos; ++p) ++rects;
      CHECK(rects == 1);
      CHECK(body.find("#4daf4a") != std::string::npos);
    }
    s.labels[0].pop_back();
    CHECK_THROWS_AS(usability_graph_svg(night.recording, s), Error);
  }

  TEST_CASE("hypnogram follows the rejected scores") {
    const std::vector<int> s_ar{0, 1, -1, -1, -1, 4};
    const std::string svg = hypnogram_svg(s_ar, 30, {}, 10, std::nullopt);
    CHECK(stages_from_hypnogram(svg) == s_ar);
    CHECK(svg.find("mobility-strip") == std::string::npos);
    const std::vector<MobilityLabel> mob(18, MobilityLabel::Lying);
    const std::string with = hypnogram_svg(s_ar, 30, mob, 10, TibResult{10, 180, 171 / 60.0});
    CHECK(with.find("class=\"mobility-strip\"") != std::string::npos);
    CHECK(with.find("class=\"lights-out\"") != std::string::npos);
    CHECK(with.find("class=\"lights-on\"") != std::string::npos);
    CHECK_THROWS_AS(hypnogram_svg(s_ar, 30, std::vector<MobilityLabel>(30, MobilityLabel::Lying), 10, std::nullopt),
                    Error);
  }
}
