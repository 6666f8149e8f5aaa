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

#pragma once

#include <span>
#include <vector>

#include "drops/dataset.hpp"
#include "drops/divergence.hpp"
#include "drops/posthoc.hpp"
#include "drops/simplex.hpp"

namespace drops {

// Per-class (or per-group) accuracies, each in [0, 1].
class AccuracyVector {
 public:
  explicit AccuracyVector(std::vector<double> acc);
  std::size_t size() const { return acc_.size(); }
  double operator[](std::size_t i) const { return acc_[i]; }
  const std::vector<double>& values() const { return acc_; }
  std::span<const double> span() const { return {acc_.data(), acc_.size()}; }

 private:
  std::vector<double> acc_;
};

// Divergence ball {g in simplex : D(g, target) <= delta}.
struct DeltaBall {
  DivergenceSpec spec;
  double delta = 0.0;
};

struct WeightedExtremeResult {
  double value = 0.0;
  SimplexWeights optimizer;
};

/**
 * Exact minimum of sum_i g_i * values_i over the divergence ball, together
 * with an attaining g.
 *
 * The solver works on the dual path of the constrained problem:
 *
 *   kl:         g_i(mu) ∝ r_i exp(-values_i / mu), mu >= 0 found by
 *               bisection on the monotone residual D(g(mu), r) - delta.
 *               When delta >= log(1/r_{i*}) for i* the lowest-index argmin
 *               of values, the vertex e_{i*} is feasible and the exact
 *               minimum min_i values_i is returned directly.
 *   reverse_kl: stationarity g_i = mu r_i / (values_i + nu); an inner
 *               bisection picks nu > -min_i values_i so that sum g_i = 1
 *               and an outer bisection picks mu so that D(g, r) = delta.
 *
 * delta = 0 returns the target-weighted mean exactly; an all-equal values
 * vector short-circuits to (common value, target). Bisections stop at
 * |D - delta| <= 1e-10 or 200 iterations; the returned g always satisfies
 * D(g, r) <= delta + 1e-8.
 *
 * `values` may be any finite reals (losses as well as accuracies).
 */
WeightedExtremeResult constrained_weighted_min(std::span<const double> values,
                                               const DeltaBall& ball);

// Maximum counterpart: negate, minimize, negate back.
WeightedExtremeResult constrained_weighted_max(std::span<const double> values,
                                               const DeltaBall& ball);

struct DeltaWorstResult {
  double value = 0.0;
  SimplexWeights minimizer;
};

// Minimum g-weighted accuracy over the ball: interpolates the target-weighted
// mean (delta = 0) and the worst single class (delta -> infinity).
DeltaWorstResult delta_worst(const AccuracyVector& acc, const DeltaBall& ball);

/**
 * Brute-force verification oracle: enumerates the simplex lattice
 * {k/K : sum k = K} with K = round(1/step), keeps lattice points inside the
 * ball and returns the minimum weighted sum over them. Error is bounded by
 * (max - min values) * m * step. Limited to m <= 4 and step in [1e-4, 1e-1];
 * throws NumericError when no lattice point is feasible.
 */
double delta_worst_grid_oracle(const AccuracyVector& acc, const DeltaBall& ball,
                               double step);

struct RobustCurve {
  struct Point {
    double delta;
    double value;
    SimplexWeights minimizer;
  };
  std::vector<Point> points;
};

// One delta_worst solve per delta; deltas must be sorted ascending and
// nonnegative. The resulting values are nonincreasing.
RobustCurve robust_curve(const AccuracyVector& acc, const DivergenceSpec& spec,
                         std::span<const double> deltas);

// Fraction of correctly (post-shift) predicted samples per class. Every class
// must appear in the dataset; pass nullptr for the unadjusted classifier.
AccuracyVector per_class_accuracy(const PredictionDataset& dataset,
                                  const PosthocAdjustment* adjustment = nullptr);

}  // namespace drops
