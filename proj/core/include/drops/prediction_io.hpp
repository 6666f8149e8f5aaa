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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "drops/dataset.hpp"
#include "drops/groups.hpp"
#include "drops/learner.hpp"
#include "drops/robust_metric.hpp"

namespace drops {

/**
 * Prediction files are UTF-8, LF-terminated CSV with header
 *
 *   p0,...,p{m-1},label[,attr]     (probability scores)
 *   l0,...,l{m-1},label[,attr]     (logit scores)
 *
 * The declared kind must match the header prefix. All validation failures
 * carry the 1-based file row in the message. Scores are written with
 * shortest round-trip formatting, so write -> read is numerically exact.
 */
PredictionDataset load_predictions(const std::filesystem::path& path,
                                   InputKind declared_kind);

void write_predictions(const std::filesystem::path& path,
                       const PredictionDataset& dataset);

// Serialized scaling adjustments. `entries` holds one record for class-level
// adjustments and one per attribute value for group-level ones; g_trace is
// populated when the scorer mode is `average`.
struct AdjustmentFile {
  struct Entry {
    std::optional<std::int32_t> attribute;
    ClassPriors priors;
    SimplexWeights g;
    std::vector<double> multipliers;
    std::vector<SimplexWeights> g_trace;

    PosthocAdjustment adjustment(double delta_train, Divergence kind) const;
    AveragedScorer averaged_scorer() const;
  };

  int schema_version = 1;
  Divergence divergence = Divergence::kl;
  double delta_train = 0.0;
  ScorerMode scorer_mode = ScorerMode::last;
  std::vector<Entry> entries;
  std::string created;

  static AdjustmentFile from_learn_result(const LearnResult& result,
                                          double delta_train, Divergence kind,
                                          ScorerMode mode);
  static AdjustmentFile from_group_result(const GroupLearnResult& result,
                                          double delta_train, Divergence kind,
                                          ScorerMode mode);
};

// JSON with full-precision numbers; read(write(x)) is bit-identical on all
// numeric fields.
void write_adjustment(const std::filesystem::path& path, const AdjustmentFile& file);
AdjustmentFile read_adjustment(const std::filesystem::path& path);

// CSV columns: delta,value,g_0..g_{m-1}.
void write_curve_csv(const std::filesystem::path& path, const RobustCurve& curve);

// CSV columns: t,lambda,lagrangian,loss_0..loss_{m-1},g_0..g_{m-1}.
void write_trace_csv(const std::filesystem::path& path, const SaddleTrace& trace);

// CSV with a single `label` column.
void write_labels_csv(const std::filesystem::path& path,
                      const std::vector<std::int32_t>& labels);

// Target distribution file: one line of comma-separated nonnegative reals.
SimplexWeights load_target(const std::filesystem::path& path,
                           std::size_t expected_size);

}  // namespace drops
