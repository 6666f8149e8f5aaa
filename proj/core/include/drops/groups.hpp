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
#include "drops/learner.hpp"
#include "drops/posthoc.hpp"
#include "drops/robust_metric.hpp"

namespace drops {

// Attribute-specific class priors pi_{a,i} = P(y = i | a).
struct GroupPriors {
  std::vector<ClassPriors> per_attribute;

  static GroupPriors from_dataset(const PredictionDataset& dataset);
};

// One scaling adjustment per attribute value; prediction picks the entry
// matching the sample's attribute.
struct GroupAdjustment {
  std::vector<PosthocAdjustment> per_attribute;
};

/**
 * Accuracy per (attribute, class) group over m = |A| x |Y| groups, indexed
 * group = attribute * |Y| + class. Every group must contain at least one
 * sample. The overloads differ only in how predictions are shifted: not at
 * all, by one shared adjustment, or by the attribute's own adjustment.
 */
AccuracyVector group_accuracy(const PredictionDataset& dataset);
AccuracyVector group_accuracy(const PredictionDataset& dataset,
                              const PosthocAdjustment& adjustment);
AccuracyVector group_accuracy(const PredictionDataset& dataset,
                              const GroupAdjustment& adjustment);

enum class GroupMode { class_only, per_attribute };

std::string to_string(GroupMode m);
GroupMode group_mode_from_string(const std::string& name);

// class_only runs the plain learner on labels alone; per_attribute slices the
// validation set by attribute, estimates each slice's class priors and runs
// the learner independently per slice. `results` holds one LearnResult for
// class_only and one per attribute value otherwise.
struct GroupLearnResult {
  GroupMode mode = GroupMode::class_only;
  std::vector<LearnResult> results;

  GroupAdjustment adjustment() const;
};

GroupLearnResult learn_group(const PredictionDataset& dataset,
                             const LearnerConfig& config, GroupMode mode);

struct ScalarSweepResult {
  double w = 1.0;
  double value = 0.0;
  // (candidate w, delta-worst value) for every grid entry, in grid order.
  std::vector<std::pair<double, double>> curve;
};

/**
 * Binary single-scalar variant: rescale the class-1 score by each candidate
 * w, evaluate the delta-worst value of the resulting group (or class, when
 * the dataset carries no attributes) accuracies, and return the maximizing w
 * (the smallest on ties). The ball's target dimension must match the
 * accuracy vector being evaluated.
 */
ScalarSweepResult binary_scalar_sweep(const PredictionDataset& dataset,
                                      const DeltaBall& ball,
                                      std::span<const double> grid);

// Default sweep grid: `count` log-spaced points covering [lo, hi].
std::vector<double> log_spaced_grid(double lo, double hi, std::size_t count);

}  // namespace drops
