/*
 * Copyright 2026 The drops authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <benchmark/benchmark.h>

#include "drops/learner.hpp"
#include "drops/synth.hpp"

namespace {

void BM_LearnIterations(benchmark::State& state) {
  const std::size_t m = 10;
  const auto priors = drops::GaussianMixtureSpec::geometric_priors(m, 100.0);
  const auto spec =
      drops::GaussianMixtureSpec::simplex_corners(m, 2.0, 1.0, priors, 42);
  const auto validation = drops::make_prediction_dataset(spec, 10000);
  auto cfg = drops::LearnerConfig::with_schedule_defaults(
      1.0, drops::DivergenceSpec::kl_uniform(m), validation.empirical_priors(),
      validation.num_samples(), static_cast<int>(state.range(0)));
  cfg.scorer_mode = drops::ScorerMode::best_validation;
  for (auto _ : state) {
    const auto result = drops::learn(validation, validation.empirical_priors(), cfg);
    benchmark::DoNotOptimize(result.adjustment.multipliers.front());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LearnIterations)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_PerClassLoss(benchmark::State& state) {
  const std::size_t m = 10;
  const auto priors = drops::GaussianMixtureSpec::geometric_priors(m, 100.0);
  const auto spec =
      drops::GaussianMixtureSpec::simplex_corners(m, 2.0, 1.0, priors, 43);
  const auto validation =
      drops::make_prediction_dataset(spec, static_cast<std::size_t>(state.range(0)));
  const auto adj =
      drops::PosthocAdjustment::identity(validation.empirical_priors());
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        drops::per_class_loss(validation, adj, drops::LossKind::zero_one).front());
  }
}
BENCHMARK(BM_PerClassLoss)->Arg(1000)->Arg(10000)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
