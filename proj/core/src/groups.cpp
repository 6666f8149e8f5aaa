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

#include "drops/groups.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "drops/errors.hpp"

namespace drops {

namespace {

void require_attributes(const PredictionDataset& dataset, const char* who) {
  if (!dataset.has_attributes()) {
    throw ValidationError(std::string(who) + ": dataset has no attribute column");
  }
}

AccuracyVector tabulate_groups(
    const PredictionDataset& dataset,
    const std::function<std::size_t(std::size_t)>& predict_row) {
  require_attributes(dataset, "group_accuracy");
  const std::size_t num_classes = dataset.num_classes();
  const std::size_t num_attrs = dataset.num_attribute_values();
  const std::size_t num_groups = num_attrs * num_classes;

  std::vector<long long> total(num_groups, 0);
  std::vector<long long> correct(num_groups, 0);
  for (std::size_t i = 0; i < dataset.num_samples(); ++i) {
    const auto y = static_cast<std::size_t>(dataset.label(i));
    const auto a = static_cast<std::size_t>(dataset.attribute(i));
    const std::size_t group = a * num_classes + y;
    ++total[group];
    if (predict_row(i) == y) ++correct[group];
  }

  std::vector<double> acc(num_groups);
  for (std::size_t idx = 0; idx < num_groups; ++idx) {
    if (total[idx] == 0) {
      throw ValidationError("group_accuracy: group (attribute " +
                            std::to_string(idx / num_classes) + ", class " +
                            std::to_string(idx % num_classes) + ") has no samples");
    }
    acc[idx] = static_cast<double>(correct[idx]) / static_cast<double>(total[idx]);
  }
  return AccuracyVector(std::move(acc));
}

}  // namespace

GroupPriors GroupPriors::from_dataset(const PredictionDataset& dataset) {
  require_attributes(dataset, "GroupPriors");
  GroupPriors priors;
  priors.per_attribute.reserve(dataset.num_attribute_values());
  for (std::size_t a = 0; a < dataset.num_attribute_values(); ++a) {
    priors.per_attribute.push_back(
        dataset.slice_by_attribute(static_cast<std::int32_t>(a)).empirical_priors());
  }
  return priors;
}

AccuracyVector group_accuracy(const PredictionDataset& dataset) {
  return tabulate_groups(dataset, [&](std::size_t i) {
    return predict_unadjusted(dataset.row(i));
  });
}

AccuracyVector group_accuracy(const PredictionDataset& dataset,
                              const PosthocAdjustment& adjustment) {
  return tabulate_groups(dataset, [&](std::size_t i) {
    return predict(dataset.row(i), adjustment, dataset.input_kind());
  });
}

AccuracyVector group_accuracy(const PredictionDataset& dataset,
                              const GroupAdjustment& adjustment) {
  require_attributes(dataset, "group_accuracy");
  if (adjustment.per_attribute.size() < dataset.num_attribute_values()) {
    throw ValidationError("group_accuracy: adjustment covers fewer attribute values "
                          "than the dataset");
  }
  return tabulate_groups(dataset, [&](std::size_t i) {
    const auto a = static_cast<std::size_t>(dataset.attribute(i));
    return predict(dataset.row(i), adjustment.per_attribute[a], dataset.input_kind());
  });
}

std::string to_string(GroupMode m) {
  return m == GroupMode::class_only ? "class_only" : "per_attribute";
}

GroupMode group_mode_from_string(const std::string& name) {
  if (name == "class_only") return GroupMode::class_only;
  if (name == "per_attribute") return GroupMode::per_attribute;
  throw std::invalid_argument("unknown group mode '" + name +
                              "' (expected class_only|per_attribute)");
}

GroupAdjustment GroupLearnResult::adjustment() const {
  GroupAdjustment adj;
  adj.per_attribute.reserve(results.size());
  for (const LearnResult& r : results) adj.per_attribute.push_back(r.adjustment);
  return adj;
}

GroupLearnResult learn_group(const PredictionDataset& dataset,
                             const LearnerConfig& config, GroupMode mode) {
  GroupLearnResult out;
  out.mode = mode;
  if (mode == GroupMode::class_only) {
    out.results.push_back(learn(dataset, dataset.empirical_priors(), config));
    return out;
  }
  require_attributes(dataset, "learn_group");
  for (std::size_t a = 0; a < dataset.num_attribute_values(); ++a) {
    const PredictionDataset slice =
        dataset.slice_by_attribute(static_cast<std::int32_t>(a));
    out.results.push_back(learn(slice, slice.empirical_priors(), config));
  }
  return out;
}

ScalarSweepResult binary_scalar_sweep(const PredictionDataset& dataset,
                                      const DeltaBall& ball,
                                      std::span<const double> grid) {
  if (dataset.num_classes() != 2) {
    throw ValidationError("binary_scalar_sweep: dataset must have exactly two classes");
  }
  if (grid.empty()) {
    throw std::invalid_argument("binary_scalar_sweep: empty grid");
  }
  for (double w : grid) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("binary_scalar_sweep: grid entries must be positive");
    }
  }

  // Scaling class 1 by w spans all binary adjustments: a common factor on
  // both classes never moves the argmax.
  auto accuracies_for = [&](double w) {
    const std::size_t num_classes = 2;
    const bool grouped = dataset.has_attributes();
    const std::size_t cells =
        grouped ? dataset.num_attribute_values() * num_classes : num_classes;
    std::vector<long long> total(cells, 0);
    std::vector<long long> correct(cells, 0);
    for (std::size_t i = 0; i < dataset.num_samples(); ++i) {
      const auto row = dataset.row(i);
      std::size_t pred;
      if (dataset.input_kind() == InputKind::probabilities) {
        pred = w * row[1] > row[0] ? 1 : 0;
      } else {
        pred = std::log(w) + row[1] > row[0] ? 1 : 0;
      }
      const auto y = static_cast<std::size_t>(dataset.label(i));
      const std::size_t cell =
          grouped ? static_cast<std::size_t>(dataset.attribute(i)) * num_classes + y
                  : y;
      ++total[cell];
      if (pred == y) ++correct[cell];
    }
    std::vector<double> acc(cells);
    for (std::size_t c = 0; c < cells; ++c) {
      if (total[c] == 0) {
        throw ValidationError("binary_scalar_sweep: empty class/group cell " +
                              std::to_string(c));
      }
      acc[c] = static_cast<double>(correct[c]) / static_cast<double>(total[c]);
    }
    return AccuracyVector(std::move(acc));
  };

  ScalarSweepResult out;
  out.curve.reserve(grid.size());
  bool first = true;
  for (double w : grid) {
    const double value = delta_worst(accuracies_for(w), ball).value;
    out.curve.emplace_back(w, value);
    if (first || value > out.value || (value == out.value && w < out.w)) {
      out.w = w;
      out.value = value;
      first = false;
    }
  }
  return out;
}

std::vector<double> log_spaced_grid(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2) {
    throw std::invalid_argument("log_spaced_grid: need 0 < lo < hi and count >= 2");
  }
  std::vector<double> grid(count);
  const double step = (std::log(hi) - std::log(lo)) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    grid[i] = std::exp(std::log(lo) + static_cast<double>(i) * step);
  }
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

}  // namespace drops
