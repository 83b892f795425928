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

#include <benchmark/benchmark.h>

#include <cmath>

#include "floss/features.hpp"
#include "floss/gbt.hpp"
#include "floss/spiky_filter.hpp"
#include "floss/synth.hpp"
#include "floss/training.hpp"
#include "floss/usability.hpp"

namespace {

using namespace floss;

void BM_Spectrogram(benchmark::State& state) {
  const auto x = synth::gen_artifact_signal(ClassLabel::Usable, 2560, 256, 1);
  const SpectrogramConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(spectrogram(x, cfg));
}
BENCHMARK(BM_Spectrogram);

void BM_UsabilityFeatures(benchmark::State& state) {
  const auto x = synth::gen_artifact_signal(ClassLabel::Usable, 2560, 256, 1);
  const std::vector<double> anorm(2560, 1.0);
  const auto layout = usability_layout(256, 10.0, state.range(0) != 0);
  for (auto _ : state) benchmark::DoNotOptimize(usability_features(x, std::span<const double>(anorm), layout));
}
BENCHMARK(BM_UsabilityFeatures)->Arg(0)->Arg(1);

void BM_ZeroPhaseFilter(benchmark::State& state) {
  const auto c = design_cascade(256);
  const auto x = synth::gen_artifact_signal(ClassLabel::Spiky, static_cast<std::size_t>(state.range(0)), 256, 2);
  for (auto _ : state) benchmark::DoNotOptimize(apply_zero_phase(c, x));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ZeroPhaseFilter)->Arg(256 * 60)->Arg(256 * 3600);

void BM_Fit(benchmark::State& state) {
  const auto samples = synth::gen_artifact_dataset(2, 20, 256, 10.0, 3);
  const auto m = usability_matrix(samples, usability_layout(256, 10.0, true), false, 1);
  gbt::TrainConfig cfg;
  cfg.n_iterations = static_cast<int>(state.range(0));
  cfg.eta = 0.1;
  for (auto _ : state) benchmark::DoNotOptimize(gbt::fit(m, cfg));
}
BENCHMARK(BM_Fit)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_ScoreHour(benchmark::State& state) {
  gbt::TrainConfig cfg;
  cfg.n_iterations = 50;
  cfg.eta = 0.1;
  const auto model = train_usability(synth::gen_artifact_dataset(2, 20, 256, 10.0, 4), parse_variant("lite"), cfg, 256, 10.0);
  synth::NightSpec spec;
  spec.duration_s = 3600;
  const auto night = synth::gen_night(spec);
  for (auto _ : state) benchmark::DoNotOptimize(score_recording(night.recording, model));
}
BENCHMARK(BM_ScoreHour)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
