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

#include "drops/simplex.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace drops {

namespace {

constexpr double kSumTolerance = 1e-9;

double checked_sum(std::span<const double> w, const char* what) {
  double sum = 0.0;
  for (double v : w) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument(std::string(what) + ": non-finite entry");
    }
    sum += v;
  }
  return sum;
}

}  // namespace

SimplexWeights::SimplexWeights(std::vector<double> w) : w_(std::move(w)) {
  if (w_.empty()) {
    throw std::invalid_argument("SimplexWeights: empty vector");
  }
  const double sum = checked_sum(w_, "SimplexWeights");
  for (double v : w_) {
    if (v < 0.0) {
      throw std::invalid_argument("SimplexWeights: negative entry");
    }
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    throw std::invalid_argument("SimplexWeights: entries sum to " +
                                std::to_string(sum) + ", expected 1");
  }
}

SimplexWeights SimplexWeights::uniform(std::size_t m) {
  if (m == 0) throw std::invalid_argument("SimplexWeights::uniform: m == 0");
  return SimplexWeights(std::vector<double>(m, 1.0 / static_cast<double>(m)));
}

SimplexWeights SimplexWeights::from_unnormalized(std::vector<double> w) {
  const double sum = checked_sum(w, "SimplexWeights::from_unnormalized");
  for (double v : w) {
    if (v < 0.0) {
      throw std::invalid_argument(
          "SimplexWeights::from_unnormalized: negative entry");
    }
  }
  if (sum <= 0.0) {
    throw std::invalid_argument(
        "SimplexWeights::from_unnormalized: total mass is zero");
  }
  for (double& v : w) v /= sum;
  return SimplexWeights(std::move(w));
}

bool SimplexWeights::full_support() const {
  for (double v : w_) {
    if (v <= 0.0) return false;
  }
  return true;
}

ClassPriors::ClassPriors(std::vector<double> priors) : p_(std::move(priors)) {
  if (p_.empty()) {
    throw std::invalid_argument("ClassPriors: empty vector");
  }
  const double sum = checked_sum(p_, "ClassPriors");
  for (double v : p_) {
    if (v <= 0.0) {
      throw std::invalid_argument("ClassPriors: entries must be positive");
    }
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    throw std::invalid_argument("ClassPriors: entries sum to " +
                                std::to_string(sum) + ", expected 1");
  }
}

ClassPriors ClassPriors::from_counts(std::span<const std::int64_t> counts) {
  std::int64_t total = 0;
  for (std::int64_t c : counts) {
    if (c <= 0) {
      throw std::invalid_argument(
          "ClassPriors::from_counts: every class needs at least one sample");
    }
    total += c;
  }
  std::vector<double> p(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    p[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
  }
  // Kill the rounding residue so the sum-to-one check is exact enough.
  double sum = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& v : p) v /= sum;
  return ClassPriors(std::move(p));
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("dot: dimension mismatch");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

std::size_t argmax_lowest(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("argmax_lowest: empty span");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

SimplexWeights floor_and_renormalize(const SimplexWeights& g, double floor) {
  if (!(floor > 0.0) || floor > 1.0 / static_cast<double>(g.size())) {
    throw std::invalid_argument("floor_and_renormalize: floor outside (0, 1/m]");
  }
  std::vector<double> w = g.values();
  double sum = 0.0;
  for (double& v : w) {
    if (v < floor) v = floor;
    sum += v;
  }
  for (double& v : w) v /= sum;
  return SimplexWeights(std::move(w));
}

}  // namespace drops
