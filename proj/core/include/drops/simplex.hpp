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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace drops {

// Point on the probability simplex: nonnegative entries summing to one
// (within 1e-9). Used both for ambiguity-set weights and class priors.
class SimplexWeights {
 public:
  // Validates the invariants; throws std::invalid_argument on breach.
  explicit SimplexWeights(std::vector<double> w);

  static SimplexWeights uniform(std::size_t m);

  // Normalizes a nonnegative vector with positive total mass.
  static SimplexWeights from_unnormalized(std::vector<double> w);

  std::size_t size() const { return w_.size(); }
  double operator[](std::size_t i) const { return w_[i]; }
  const std::vector<double>& values() const { return w_; }
  std::span<const double> span() const { return {w_.data(), w_.size()}; }

  bool full_support() const;

  friend bool operator==(const SimplexWeights& a, const SimplexWeights& b) {
    return a.w_ == b.w_;
  }

 private:
  std::vector<double> w_;
};

// Empirical class priors: strictly positive entries summing to one.
class ClassPriors {
 public:
  explicit ClassPriors(std::vector<double> priors);

  static ClassPriors from_counts(std::span<const std::int64_t> counts);

  std::size_t size() const { return p_.size(); }
  double operator[](std::size_t i) const { return p_[i]; }
  const std::vector<double>& values() const { return p_; }

  SimplexWeights as_weights() const { return SimplexWeights(p_); }

  friend bool operator==(const ClassPriors& a, const ClassPriors& b) {
    return a.p_ == b.p_;
  }

 private:
  std::vector<double> p_;
};

double dot(std::span<const double> a, std::span<const double> b);

// Index of the largest entry; ties resolve to the lowest index.
std::size_t argmax_lowest(std::span<const double> values);

// Entrywise max with `floor` followed by renormalization. Keeps every
// coordinate strictly positive so KL terms and EG exponents stay finite.
SimplexWeights floor_and_renormalize(const SimplexWeights& g, double floor);

}  // namespace drops
