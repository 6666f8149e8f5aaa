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

#include "drops/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "drops/errors.hpp"

namespace drops {

namespace {

constexpr double kRowSumTolerance = 1e-6;

}  // namespace

PredictionDataset PredictionDataset::create(
    std::size_t num_classes, std::vector<double> scores,
    std::vector<std::int32_t> labels,
    std::optional<std::vector<std::int32_t>> attributes, InputKind kind) {
  if (num_classes < 2) {
    throw ValidationError("dataset: need at least two classes");
  }
  const std::size_t n = labels.size();
  if (n == 0) {
    throw ValidationError("dataset: no samples");
  }
  if (scores.size() != n * num_classes) {
    throw ValidationError("dataset: score matrix is " +
                          std::to_string(scores.size()) + " values, expected " +
                          std::to_string(n * num_classes));
  }
  if (attributes && attributes->size() != n) {
    throw ValidationError("dataset: attribute column length mismatch");
  }

  PredictionDataset ds;
  ds.num_classes_ = num_classes;
  ds.scores_ = std::move(scores);
  ds.labels_ = std::move(labels);
  ds.attributes_ = std::move(attributes);
  ds.kind_ = kind;
  ds.class_counts_.assign(num_classes, 0);

  for (std::size_t i = 0; i < n; ++i) {
    const auto row = ds.row(i);
    double sum = 0.0;
    for (double v : row) {
      if (!std::isfinite(v)) {
        throw ValidationError("dataset: non-finite score in sample " + std::to_string(i));
      }
      if (kind == InputKind::probabilities && v < 0.0) {
        throw ValidationError("dataset: negative probability in sample " + std::to_string(i));
      }
      sum += v;
    }
    if (kind == InputKind::probabilities && std::abs(sum - 1.0) > kRowSumTolerance) {
      throw ValidationError("dataset: probability row of sample " + std::to_string(i) +
                            " sums to " + std::to_string(sum));
    }
    const std::int32_t y = ds.labels_[i];
    if (y < 0 || static_cast<std::size_t>(y) >= num_classes) {
      throw ValidationError("dataset: label " + std::to_string(y) + " of sample " +
                            std::to_string(i) + " outside [0, " +
                            std::to_string(num_classes) + ")");
    }
    ds.class_counts_[static_cast<std::size_t>(y)] += 1;
    if (ds.attributes_) {
      const std::int32_t a = (*ds.attributes_)[i];
      if (a < 0) {
        throw ValidationError("dataset: negative attribute of sample " + std::to_string(i));
      }
      ds.num_attribute_values_ =
          std::max(ds.num_attribute_values_, static_cast<std::size_t>(a) + 1);
    }
  }
  return ds;
}

SimplexWeights PredictionDataset::probabilities(std::size_t i) const {
  const auto r = row(i);
  if (kind_ == InputKind::logits) {
    return softmax(r);
  }
  return SimplexWeights::from_unnormalized(std::vector<double>(r.begin(), r.end()));
}

ClassPriors PredictionDataset::empirical_priors() const {
  for (std::size_t i = 0; i < class_counts_.size(); ++i) {
    if (class_counts_[i] == 0) {
      throw ValidationError("dataset: class " + std::to_string(i) +
                            " has no samples, cannot form class priors");
    }
  }
  return ClassPriors::from_counts(class_counts_);
}

PredictionDataset PredictionDataset::slice_by_attribute(std::int32_t a) const {
  if (!attributes_) {
    throw ValidationError("dataset: no attribute column to slice by");
  }
  std::vector<double> scores;
  std::vector<std::int32_t> labels;
  for (std::size_t i = 0; i < num_samples(); ++i) {
    if ((*attributes_)[i] != a) continue;
    const auto r = row(i);
    scores.insert(scores.end(), r.begin(), r.end());
    labels.push_back(labels_[i]);
  }
  if (labels.empty()) {
    throw ValidationError("dataset: attribute value " + std::to_string(a) +
                          " has no samples");
  }
  return create(num_classes_, std::move(scores), std::move(labels), std::nullopt, kind_);
}

}  // namespace drops
