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

#include "drops/robust_metric.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "drops/errors.hpp"

namespace drops {

namespace {

constexpr double kResidualTolerance = 1e-10;
constexpr int kMaxBisectIterations = 200;
constexpr double kInfinity = std::numeric_limits<double>::infinity();

void check_ball(std::span<const double> values, const DeltaBall& ball) {
  if (values.size() != ball.spec.target.size()) {
    throw std::invalid_argument("delta_worst: values/target dimension mismatch");
  }
  if (values.size() < 2) {
    throw std::invalid_argument("delta_worst: need at least two classes");
  }
  if (!(ball.delta >= 0.0)) {
    throw std::invalid_argument("delta_worst: delta must be nonnegative");
  }
  if (!ball.spec.target.full_support()) {
    throw std::invalid_argument("delta_worst: target must have full support");
  }
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("delta_worst: non-finite entry");
    }
  }
}

bool all_equal(std::span<const double> values) {
  for (double v : values) {
    if (v != values.front()) return false;
  }
  return true;
}

std::size_t argmin_lowest(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] < values[best]) best = i;
  }
  return best;
}

struct PathPoint {
  std::vector<double> g;
  double divergence = 0.0;
  double objective = 0.0;
};

// Dual path for the kl ball: g_i(mu) ∝ r_i exp(-v_i / mu), evaluated with a
// max-subtracted log-sum-exp so tiny mu degenerates cleanly onto the argmin
// support instead of underflowing.
PathPoint kl_path_point(std::span<const double> values, const SimplexWeights& r,
                        double mu) {
  const std::size_t m = values.size();
  std::vector<double> s(m);
  double smax = -kInfinity;
  for (std::size_t i = 0; i < m; ++i) {
    s[i] = std::log(r[i]) - values[i] / mu;
    smax = std::max(smax, s[i]);
  }
  double z = 0.0;
  for (std::size_t i = 0; i < m; ++i) z += std::exp(s[i] - smax);
  const double logz = smax + std::log(z);

  PathPoint p;
  p.g.resize(m);
  double gsum = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    p.g[i] = std::exp(s[i] - logz);
    gsum += p.g[i];
  }
  for (std::size_t i = 0; i < m; ++i) {
    p.g[i] /= gsum;
    p.objective += p.g[i] * values[i];
    if (p.g[i] > 0.0) p.divergence += p.g[i] * std::log(p.g[i] / r[i]);
  }
  p.divergence = std::max(p.divergence, 0.0);
  return p;
}

WeightedExtremeResult solve_kl(std::span<const double> values,
                               const SimplexWeights& r, double delta) {
  const std::size_t m = values.size();

  // Vertex rule: once the ball contains the one-hot point of the worst
  // class, the minimum is that class's value exactly.
  const std::size_t worst = argmin_lowest(values);
  if (delta >= std::log(1.0 / r[worst])) {
    std::vector<double> vertex(m, 0.0);
    vertex[worst] = 1.0;
    return {values[worst], SimplexWeights(std::move(vertex))};
  }

  double lo = 1e-12;
  double hi = 1e6;
  PathPoint at_lo = kl_path_point(values, r, lo);
  if (at_lo.divergence <= delta) {
    // Ties in the minimum value: the whole dual path stays inside the ball
    // (its divergence tops out at log(1/sum of argmin-target mass)), so the
    // constraint is inactive and the path limit already attains min values.
    return {at_lo.objective, SimplexWeights::from_unnormalized(std::move(at_lo.g))};
  }
  PathPoint at_hi = kl_path_point(values, r, hi);
  int expansions = 0;
  while (at_hi.divergence > delta && expansions++ < 60) {
    hi *= 10.0;
    at_hi = kl_path_point(values, r, hi);
  }

  PathPoint feasible = at_hi;  // divergence <= delta side of the bracket
  PathPoint current = feasible;
  for (int iter = 0; iter < kMaxBisectIterations; ++iter) {
    const double mid = std::sqrt(lo * hi);
    current = kl_path_point(values, r, mid);
    if (std::abs(current.divergence - delta) <= kResidualTolerance) break;
    if (current.divergence > delta) {
      lo = mid;
    } else {
      hi = mid;
      feasible = current;
    }
  }
  if (current.divergence > delta + 1e-8) current = feasible;
  return {current.objective, SimplexWeights::from_unnormalized(std::move(current.g))};
}

// Reverse-kl stationarity: g_i = mu r_i / (v_i + nu). Everything is handled
// in the shifted variable s = nu + min(v), so every denominator
// (v_i - min v) + s stays strictly positive.
struct ReverseKlPath {
  std::span<const double> values;
  const SimplexWeights& r;
  double vmin;
  std::vector<double> dv;  // values - vmin

  explicit ReverseKlPath(std::span<const double> v, const SimplexWeights& target)
      : values(v), r(target), vmin(*std::min_element(v.begin(), v.end())) {
    dv.resize(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) dv[i] = v[i] - vmin;
  }

  double mass(double mu, double s) const {
    double total = 0.0;
    for (std::size_t i = 0; i < dv.size(); ++i) total += mu * r[i] / (dv[i] + s);
    return total;
  }

  // Normalizing shift: s with sum_i mu r_i / (dv_i + s) = 1.
  double solve_s(double mu) const {
    double lo = 1e-12;
    double hi = 1e6;
    int guard = 0;
    while (mass(mu, lo) < 1.0 && guard++ < 320) lo /= 10.0;
    guard = 0;
    while (mass(mu, hi) > 1.0 && guard++ < 320) hi *= 10.0;
    double mid = std::sqrt(lo * hi);
    for (int iter = 0; iter < kMaxBisectIterations; ++iter) {
      mid = std::sqrt(lo * hi);
      const double total = mass(mu, mid);
      if (std::abs(total - 1.0) <= 1e-13) break;
      if (total > 1.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return mid;
  }

  PathPoint point(double mu) const {
    const double s = solve_s(mu);
    PathPoint p;
    p.g.resize(dv.size());
    double gsum = 0.0;
    for (std::size_t i = 0; i < dv.size(); ++i) {
      p.g[i] = mu * r[i] / (dv[i] + s);
      gsum += p.g[i];
    }
    for (std::size_t i = 0; i < dv.size(); ++i) {
      p.g[i] /= gsum;
      p.objective += p.g[i] * values[i];
      p.divergence += r[i] * std::log(r[i] / p.g[i]);
    }
    p.divergence = std::max(p.divergence, 0.0);
    return p;
  }
};

WeightedExtremeResult solve_reverse_kl(std::span<const double> values,
                                       const SimplexWeights& r, double delta) {
  ReverseKlPath path(values, r);

  double lo = 1e-12;
  double hi = 1e6;
  PathPoint at_lo = path.point(lo);
  int expansions = 0;
  while (at_lo.divergence < delta && expansions++ < 280) {
    lo /= 10.0;
    at_lo = path.point(lo);
  }
  if (at_lo.divergence <= delta) {
    // delta is beyond anything reachable with finite precision; the point is
    // already feasible and within rounding of the infimum.
    return {at_lo.objective, SimplexWeights::from_unnormalized(std::move(at_lo.g))};
  }
  PathPoint at_hi = path.point(hi);
  expansions = 0;
  while (at_hi.divergence > delta && expansions++ < 60) {
    hi *= 10.0;
    at_hi = path.point(hi);
  }

  PathPoint feasible = at_hi;
  PathPoint current = feasible;
  for (int iter = 0; iter < kMaxBisectIterations; ++iter) {
    const double mid = std::sqrt(lo * hi);
    current = path.point(mid);
    if (std::abs(current.divergence - delta) <= kResidualTolerance) break;
    if (current.divergence > delta) {
      lo = mid;
    } else {
      hi = mid;
      feasible = current;
    }
  }
  if (current.divergence > delta + 1e-8) current = feasible;
  return {current.objective, SimplexWeights::from_unnormalized(std::move(current.g))};
}

}  // namespace

AccuracyVector::AccuracyVector(std::vector<double> acc) : acc_(std::move(acc)) {
  if (acc_.empty()) throw std::invalid_argument("AccuracyVector: empty");
  for (double v : acc_) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      throw std::invalid_argument("AccuracyVector: entries must lie in [0, 1]");
    }
  }
}

WeightedExtremeResult constrained_weighted_min(std::span<const double> values,
                                               const DeltaBall& ball) {
  check_ball(values, ball);
  const SimplexWeights& r = ball.spec.target;

  if (all_equal(values)) return {values.front(), r};
  if (ball.delta == 0.0) return {dot(values, r.span()), r};

  return ball.spec.kind == Divergence::kl ? solve_kl(values, r, ball.delta)
                                          : solve_reverse_kl(values, r, ball.delta);
}

WeightedExtremeResult constrained_weighted_max(std::span<const double> values,
                                               const DeltaBall& ball) {
  std::vector<double> negated(values.begin(), values.end());
  for (double& v : negated) v = -v;
  WeightedExtremeResult res = constrained_weighted_min(negated, ball);
  res.value = -res.value;
  return res;
}

DeltaWorstResult delta_worst(const AccuracyVector& acc, const DeltaBall& ball) {
  WeightedExtremeResult res = constrained_weighted_min(acc.span(), ball);
  return {res.value, std::move(res.optimizer)};
}

double delta_worst_grid_oracle(const AccuracyVector& acc, const DeltaBall& ball,
                               double step) {
  check_ball(acc.span(), ball);
  const std::size_t m = acc.size();
  if (m > 4) {
    throw std::invalid_argument("delta_worst_grid_oracle: m > 4 is combinatorially infeasible");
  }
  if (!(step >= 1e-4 && step <= 1e-1)) {
    throw std::invalid_argument("delta_worst_grid_oracle: step outside [1e-4, 1e-1]");
  }

  const long long resolution = std::llround(1.0 / step);
  const double inv_k = 1.0 / static_cast<double>(resolution);
  const SimplexWeights& r = ball.spec.target;
  const bool is_kl = ball.spec.kind == Divergence::kl;

  // log(k) table so the inner loop stays free of transcendentals.
  std::vector<double> log_count(static_cast<std::size_t>(resolution) + 1, 0.0);
  for (long long k = 1; k <= resolution; ++k) {
    log_count[static_cast<std::size_t>(k)] = std::log(static_cast<double>(k));
  }
  const double log_resolution = std::log(static_cast<double>(resolution));
  std::vector<double> log_target(m);
  for (std::size_t i = 0; i < m; ++i) log_target[i] = std::log(r[i]);

  double best = kInfinity;
  const double feasibility_slack = ball.delta + 1e-12;
  std::vector<long long> counts(m, 0);

  auto evaluate = [&]() {
    double div = 0.0;
    if (is_kl) {
      for (std::size_t i = 0; i < m; ++i) {
        if (counts[i] == 0) continue;
        const double gi = static_cast<double>(counts[i]) * inv_k;
        div += gi * (log_count[static_cast<std::size_t>(counts[i])] -
                     log_resolution - log_target[i]);
      }
    } else {
      for (std::size_t i = 0; i < m; ++i) {
        if (counts[i] == 0) {
          div = kInfinity;
          break;
        }
        div += r[i] * (log_target[i] - (log_count[static_cast<std::size_t>(counts[i])] -
                                        log_resolution));
      }
    }
    if (div <= feasibility_slack) {
      double objective = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        objective += static_cast<double>(counts[i]) * inv_k * acc[i];
      }
      best = std::min(best, objective);
    }
  };

  // Walk all compositions of `resolution` into m nonnegative parts.
  if (m == 2) {
    for (long long k0 = 0; k0 <= resolution; ++k0) {
      counts[0] = k0;
      counts[1] = resolution - k0;
      evaluate();
    }
  } else if (m == 3) {
    for (long long k0 = 0; k0 <= resolution; ++k0) {
      counts[0] = k0;
      for (long long k1 = 0; k1 <= resolution - k0; ++k1) {
        counts[1] = k1;
        counts[2] = resolution - k0 - k1;
        evaluate();
      }
    }
  } else {
    for (long long k0 = 0; k0 <= resolution; ++k0) {
      counts[0] = k0;
      for (long long k1 = 0; k1 <= resolution - k0; ++k1) {
        counts[1] = k1;
        for (long long k2 = 0; k2 <= resolution - k0 - k1; ++k2) {
          counts[2] = k2;
          counts[3] = resolution - k0 - k1 - k2;
          evaluate();
        }
      }
    }
  }

  if (best == kInfinity) {
    throw NumericError("delta_worst_grid_oracle: no feasible lattice point at this step");
  }
  return best;
}

RobustCurve robust_curve(const AccuracyVector& acc, const DivergenceSpec& spec,
                         std::span<const double> deltas) {
  if (deltas.empty()) {
    throw std::invalid_argument("robust_curve: empty delta grid");
  }
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (!(deltas[i] >= 0.0)) {
      throw std::invalid_argument("robust_curve: deltas must be nonnegative");
    }
    if (i > 0 && !(deltas[i] > deltas[i - 1])) {
      throw std::invalid_argument("robust_curve: deltas must be strictly increasing");
    }
  }
  RobustCurve curve;
  curve.points.reserve(deltas.size());
  for (double d : deltas) {
    DeltaWorstResult res = delta_worst(acc, {spec, d});
    curve.points.push_back({d, res.value, std::move(res.minimizer)});
  }
  return curve;
}

AccuracyVector per_class_accuracy(const PredictionDataset& dataset,
                                  const PosthocAdjustment* adjustment) {
  const std::size_t m = dataset.num_classes();
  if (adjustment && adjustment->size() != m) {
    throw std::invalid_argument("per_class_accuracy: adjustment dimension mismatch");
  }
  std::vector<long long> correct(m, 0);
  for (std::size_t i = 0; i < dataset.num_samples(); ++i) {
    const std::size_t pred =
        adjustment ? predict(dataset.row(i), *adjustment, dataset.input_kind())
                   : predict_unadjusted(dataset.row(i));
    if (pred == static_cast<std::size_t>(dataset.label(i))) {
      ++correct[pred];
    }
  }
  std::vector<double> acc(m);
  for (std::size_t i = 0; i < m; ++i) {
    const std::int64_t count = dataset.class_counts()[i];
    if (count == 0) {
      throw ValidationError("per_class_accuracy: class " + std::to_string(i) +
                            " has no samples");
    }
    acc[i] = static_cast<double>(correct[i]) / static_cast<double>(count);
  }
  return AccuracyVector(std::move(acc));
}

}  // namespace drops
