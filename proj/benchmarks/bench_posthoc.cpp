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

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "drops/posthoc.hpp"

namespace {

struct Fixture {
  std::vector<double> logits;
  drops::PosthocAdjustment adj;

  explicit Fixture(std::size_t m)
      : logits(m),
        adj(drops::PosthocAdjustment::identity(
            drops::ClassPriors(std::vector<double>(m, 1.0 / m)))) {
    std::mt19937_64 rng(7);
    for (double& v : logits) {
      v = 10.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5);
    }
    std::vector<double> weights(m);
    for (double& v : weights) v = static_cast<double>(rng() >> 11) * 0x1.0p-53 + 0.1;
    double sum = 0.0;
    for (double v : weights) sum += v;
    for (double& v : weights) v /= sum;
    adj = drops::PosthocAdjustment::from_weights(
        drops::SimplexWeights(weights),
        drops::ClassPriors(std::vector<double>(m, 1.0 / m)), 0.5,
        drops::Divergence::kl);
  }
};

void BM_Softmax(benchmark::State& state) {
  const Fixture f(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(drops::softmax(f.logits).values().front());
  }
}
BENCHMARK(BM_Softmax)->Arg(10)->Arg(100)->Arg(1000);

void BM_PredictLogits(benchmark::State& state) {
  const Fixture f(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(drops::predict(f.logits, f.adj, drops::InputKind::logits));
  }
}
BENCHMARK(BM_PredictLogits)->Arg(10)->Arg(100)->Arg(1000);

void BM_AdjustedScores(benchmark::State& state) {
  const Fixture f(static_cast<std::size_t>(state.range(0)));
  const auto probs = drops::softmax(f.logits);
  for (auto _ : state) {
    benchmark::DoNotOptimize(drops::adjusted_scores(probs, f.adj).values().front());
  }
}
BENCHMARK(BM_AdjustedScores)->Arg(10)->Arg(100)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
