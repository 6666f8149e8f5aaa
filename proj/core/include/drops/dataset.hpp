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
#include <optional>
#include <span>
#include <vector>

#include "drops/posthoc.hpp"
#include "drops/simplex.hpp"

namespace drops {

// n x m model scores plus labels and optional per-sample attributes. Scores
// are probabilities or logits as declared by input_kind; probability rows
// must be nonnegative and sum to one within 1e-6.
class PredictionDataset {
 public:
  // Validates all invariants; throws ValidationError with the offending
  // sample index on breach.
  static PredictionDataset create(std::size_t num_classes,
                                  std::vector<double> scores,
                                  std::vector<std::int32_t> labels,
                                  std::optional<std::vector<std::int32_t>> attributes,
                                  InputKind kind);

  std::size_t num_samples() const { return labels_.size(); }
  std::size_t num_classes() const { return num_classes_; }
  InputKind input_kind() const { return kind_; }

  std::span<const double> row(std::size_t i) const {
    return {scores_.data() + i * num_classes_, num_classes_};
  }
  std::int32_t label(std::size_t i) const { return labels_[i]; }
  const std::vector<std::int32_t>& labels() const { return labels_; }
  const std::vector<double>& scores() const { return scores_; }

  bool has_attributes() const { return attributes_.has_value(); }
  std::int32_t attribute(std::size_t i) const { return (*attributes_)[i]; }
  const std::optional<std::vector<std::int32_t>>& attributes() const {
    return attributes_;
  }
  // Number of distinct attribute values (max + 1); 0 when absent.
  std::size_t num_attribute_values() const { return num_attribute_values_; }

  const std::vector<std::int64_t>& class_counts() const { return class_counts_; }

  // Row as a probability vector: logits go through softmax, probability rows
  // are renormalized to kill the 1e-6 file tolerance.
  SimplexWeights probabilities(std::size_t i) const;

  // Empirical class priors from the label counts. Requires every class to
  // appear at least once.
  ClassPriors empirical_priors() const;

  // Rows with attribute == a, attribute column dropped.
  PredictionDataset slice_by_attribute(std::int32_t a) const;

 private:
  PredictionDataset() = default;

  std::size_t num_classes_ = 0;
  std::vector<double> scores_;
  std::vector<std::int32_t> labels_;
  std::optional<std::vector<std::int32_t>> attributes_;
  std::size_t num_attribute_values_ = 0;
  std::vector<std::int64_t> class_counts_;
  InputKind kind_ = InputKind::probabilities;
};

}  // namespace drops
