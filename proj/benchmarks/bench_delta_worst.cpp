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

#include "drops/robust_metric.hpp"

namespace {

std::vector<double> random_accuracies(std::size_t m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> acc(m);
  for (double& v : acc) v = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return acc;
}

void BM_DeltaWorstKl(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const drops::AccuracyVector acc(random_accuracies(m, 1));
  const drops::DeltaBall ball{drops::DivergenceSpec::kl_uniform(m), 0.5};
  for (auto _ : state) {
    benchmark::DoNotOptimize(drops::delta_worst(acc, ball).value);
  }
}
BENCHMARK(BM_DeltaWorstKl)->Arg(2)->Arg(10)->Arg(100)->Arg(1000);

void BM_DeltaWorstReverseKl(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const drops::AccuracyVector acc(random_accuracies(m, 2));
  const drops::DeltaBall ball{drops::DivergenceSpec::reverse_kl_uniform(m), 0.5};
  for (auto _ : state) {
    benchmark::DoNotOptimize(drops::delta_worst(acc, ball).value);
  }
}
BENCHMARK(BM_DeltaWorstReverseKl)->Arg(2)->Arg(10)->Arg(100)->Arg(1000);

void BM_GridOracle(benchmark::State& state) {
  const drops::AccuracyVector acc(random_accuracies(3, 3));
  const drops::DeltaBall ball{drops::DivergenceSpec::kl_uniform(3), 0.5};
  const double step = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(drops::delta_worst_grid_oracle(acc, ball, step));
  }
}
BENCHMARK(BM_GridOracle)->Arg(100)->Arg(1000);

void BM_RobustCurve(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const drops::AccuracyVector acc(random_accuracies(m, 4));
  std::vector<double> deltas;
  for (int i = 0; i <= 40; ++i) deltas.push_back(0.05 * i);
  const auto spec = drops::DivergenceSpec::kl_uniform(m);
  for (auto _ : state) {
    benchmark::DoNotOptimize(drops::robust_curve(acc, spec, deltas).points.size());
  }
}
BENCHMARK(BM_RobustCurve)->Arg(10)->Arg(100);

}  // namespace

BENCHMARK_MAIN();
