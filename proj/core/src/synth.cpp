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

#include "drops/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace drops {

namespace {

double next_uniform(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

double next_normal(std::mt19937_64& gen) {
  const double u1 = next_uniform(gen);
  const double u2 = next_uniform(gen);
  return std::sqrt(-2.0 * std::log1p(-u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

std::int32_t draw_label(std::mt19937_64& gen, const SimplexWeights& priors) {
  const double u = next_uniform(gen);
  double cumulative = 0.0;
  for (std::size_t y = 0; y + 1 < priors.size(); ++y) {
    cumulative += priors[y];
    if (u < cumulative) return static_cast<std::int32_t>(y);
  }
  return static_cast<std::int32_t>(priors.size() - 1);
}

}  // namespace

GaussianMixtureSpec GaussianMixtureSpec::simplex_corners(std::size_t num_classes,
                                                         double separation,
                                                         double sigma,
                                                         SimplexWeights priors,
                                                         std::uint64_t seed) {
  std::vector<double> means(num_classes * num_classes, 0.0);
  for (std::size_t y = 0; y < num_classes; ++y) {
    means[y * num_classes + y] = separation;
  }
  GaussianMixtureSpec spec{num_classes, num_classes, std::move(means), sigma,
                           std::move(priors), seed};
  spec.validate();
  return spec;
}

SimplexWeights GaussianMixtureSpec::geometric_priors(std::size_t num_classes,
                                                      double rho) {
  if (num_classes < 2 || !(rho >= 1.0)) {
    throw std::invalid_argument("geometric_priors: need m >= 2 and rho >= 1");
  }
  std::vector<double> p(num_classes);
  double sum = 0.0;
  for (std::size_t i = 0; i < num_classes; ++i) {
    p[i] = std::pow(rho, -static_cast<double>(i) /
                             static_cast<double>(num_classes - 1));
    sum += p[i];
  }
  for (double& v : p) v /= sum;
  return SimplexWeights(std::move(p));
}

void GaussianMixtureSpec::validate() const {
  if (num_classes < 2) throw std::invalid_argument("mixture: need at least two classes");
  if (dim == 0) throw std::invalid_argument("mixture: dim == 0");
  if (means.size() != num_classes * dim) {
    throw std::invalid_argument("mixture: means matrix must be num_classes x dim");
  }
  if (!(sigma > 0.0)) throw std::invalid_argument("mixture: sigma must be positive");
  if (priors.size() != num_classes) {
    throw std::invalid_argument("mixture: priors dimension mismatch");
  }
  for (std::size_t a = 0; a < num_classes; ++a) {
    for (std::size_t b = a + 1; b < num_classes; ++b) {
      if (std::equal(mean(a).begin(), mean(a).end(), mean(b).begin())) {
        throw std::invalid_argument("mixture: means must be pairwise distinct");
      }
    }
  }
}

SampleSet sample(const GaussianMixtureSpec& spec, std::size_t n) {
  spec.validate();
  if (n < 1) throw std::invalid_argument("sample: n must be at least 1");

  std::mt19937_64 gen(spec.seed);
  SampleSet out;
  out.dim = spec.dim;
  out.points.resize(n * spec.dim);
  out.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::int32_t y = draw_label(gen, spec.priors);
    out.labels[i] = y;
    const auto mu = spec.mean(static_cast<std::size_t>(y));
    for (std::size_t j = 0; j < spec.dim; ++j) {
      out.points[i * spec.dim + j] = mu[j] + spec.sigma * next_normal(gen);
    }
  }
  return out;
}

SimplexWeights true_eta(const GaussianMixtureSpec& spec,
                        std::span<const double> point) {
  if (point.size() != spec.dim) {
    throw std::invalid_argument("true_eta: point dimension mismatch");
  }
  const double inv_two_sigma_sq = 1.0 / (2.0 * spec.sigma * spec.sigma);
  std::vector<double> log_scores(spec.num_classes);
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t y = 0; y < spec.num_classes; ++y) {
    const auto mu = spec.mean(y);
    double sq = 0.0;
    for (std::size_t j = 0; j < spec.dim; ++j) {
      const double d = point[j] - mu[j];
      sq += d * d;
    }
    // log(0) = -inf is fine: zero-prior classes get zero posterior mass
    log_scores[y] = std::log(spec.priors[y]) - sq * inv_two_sigma_sq;
    top = std::max(top, log_scores[y]);
  }
  double sum = 0.0;
  for (double& v : log_scores) {
    v = std::exp(v - top);
    sum += v;
  }
  for (double& v : log_scores) v /= sum;
  return SimplexWeights(std::move(log_scores));
}

PredictionDataset make_prediction_dataset(const GaussianMixtureSpec& spec,
                                          std::size_t n) {
  const SampleSet samples = sample(spec, n);
  std::vector<double> scores;
  scores.reserve(n * spec.num_classes);
  for (std::size_t i = 0; i < n; ++i) {
    const SimplexWeights eta = true_eta(spec, samples.point(i));
    scores.insert(scores.end(), eta.values().begin(), eta.values().end());
  }
  return PredictionDataset::create(spec.num_classes, std::move(scores),
                                   samples.labels, std::nullopt,
                                   InputKind::probabilities);
}

ThresholdOracleResult binary_threshold_oracle(const GaussianMixtureSpec& spec,
                                              const SimplexWeights& g,
                                              std::size_t n_eval,
                                              std::span<const double> thresholds) {
  if (spec.num_classes != 2 || spec.dim != 1) {
    throw std::invalid_argument("binary_threshold_oracle: need a 1-D binary mixture");
  }
  if (g.size() != 2) {
    throw std::invalid_argument("binary_threshold_oracle: g must have two entries");
  }
  if (thresholds.empty()) {
    throw std::invalid_argument("binary_threshold_oracle: empty threshold grid");
  }

  const SampleSet samples = sample(spec, n_eval);
  std::vector<double> class0;
  std::vector<double> class1;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    (samples.labels[i] == 0 ? class0 : class1).push_back(samples.points[i]);
  }
  std::sort(class0.begin(), class0.end());
  std::sort(class1.begin(), class1.end());

  const double n0 = static_cast<double>(class0.size());
  const double n1 = static_cast<double>(class1.size());

  ThresholdOracleResult best{thresholds.front(),
                             std::numeric_limits<double>::infinity()};
  for (double threshold : thresholds) {
    // predict 1 iff x > threshold
    const double wrong0 = n0 == 0.0 ? 0.0
                                    : static_cast<double>(class0.end() -
                                                          std::upper_bound(class0.begin(),
                                                                           class0.end(),
                                                                           threshold));
    const double wrong1 = n1 == 0.0 ? 0.0
                                    : static_cast<double>(std::upper_bound(class1.begin(),
                                                                           class1.end(),
                                                                           threshold) -
                                                          class1.begin());
    const double error = g[0] * (n0 == 0.0 ? 0.0 : wrong0 / n0) +
                         g[1] * (n1 == 0.0 ? 0.0 : wrong1 / n1);
    if (error < best.weighted_error) {
      best = {threshold, error};
    }
  }
  return best;
}

}  // namespace drops
