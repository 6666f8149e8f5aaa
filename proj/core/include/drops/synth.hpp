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

#include <cstdint>
#include <span>
#include <vector>

#include "drops/dataset.hpp"
#include "drops/simplex.hpp"

namespace drops {

/**
 * Isotropic Gaussian mixture with one component per class; the conditional
 * class probabilities have the closed form
 *
 *   eta_y(x) ∝ priors_y exp(-||x - mean_y||^2 / (2 sigma^2)),
 *
 * so exact Bayes-rule classifiers are available for verification.
 *
 * Sampling is fully pinned down for reproducibility across implementations:
 * the generator is std::mt19937_64 seeded with `seed`; uniforms in [0, 1)
 * are (next() >> 11) * 2^-53; labels come from inverse-CDF lookup over the
 * priors; each standard normal consumes two uniforms via the Box-Muller
 * cosine branch z = sqrt(-2 ln(1 - u1)) cos(2 pi u2).
 */
struct GaussianMixtureSpec {
  std::size_t num_classes = 0;
  std::size_t dim = 0;
  std::vector<double> means;  // num_classes x dim, row-major, pairwise distinct
  double sigma = 1.0;
  SimplexWeights priors;
  std::uint64_t seed = 0;

  // Means at separation * e_y in dim = num_classes dimensions; all pairwise
  // distances equal separation * sqrt(2).
  static GaussianMixtureSpec simplex_corners(std::size_t num_classes,
                                             double separation, double sigma,
                                             SimplexWeights priors,
                                             std::uint64_t seed);

  // Long-tail priors with geometric decay: priors_i ∝ rho^(-i/(m-1)), so the
  // largest-to-smallest ratio is exactly rho.
  static SimplexWeights geometric_priors(std::size_t num_classes, double rho);

  void validate() const;
  std::span<const double> mean(std::size_t y) const {
    return {means.data() + y * dim, dim};
  }
};

struct SampleSet {
  std::size_t dim = 0;
  std::vector<double> points;  // n x dim, row-major
  std::vector<std::int32_t> labels;

  std::size_t size() const { return labels.size(); }
  std::span<const double> point(std::size_t i) const {
    return {points.data() + i * dim, dim};
  }
};

// n labelled draws from the mixture; deterministic given spec.seed.
SampleSet sample(const GaussianMixtureSpec& spec, std::size_t n);

// Exact conditional class probabilities at a point, computed in log space.
SimplexWeights true_eta(const GaussianMixtureSpec& spec,
                        std::span<const double> point);

// Samples n points and packages their true_eta rows as a probability-kind
// PredictionDataset: the mixture acting as its own perfectly calibrated
// pretrained model.
PredictionDataset make_prediction_dataset(const GaussianMixtureSpec& spec,
                                          std::size_t n);

struct ThresholdOracleResult {
  double threshold = 0.0;
  double weighted_error = 0.0;
};

/**
 * Brute-force reference for the 1-D binary case: draws n_eval points, scans
 * every candidate threshold of the classifier "predict 1 iff x > threshold"
 * and returns the minimizer of the g-weighted class-conditional error. Ties
 * resolve to the first grid entry.
 */
ThresholdOracleResult binary_threshold_oracle(const GaussianMixtureSpec& spec,
                                              const SimplexWeights& g,
                                              std::size_t n_eval,
                                              std::span<const double> thresholds);

}  // namespace drops
