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

#include "drops/posthoc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "drops/errors.hpp"

namespace drops {

std::string to_string(InputKind k) {
  return k == InputKind::probabilities ? "probs" : "logits";
}

InputKind input_kind_from_string(const std::string& name) {
  if (name == "probs" || name == "probabilities") return InputKind::probabilities;
  if (name == "logits") return InputKind::logits;
  throw std::invalid_argument("unknown input kind '" + name + "' (expected probs|logits)");
}

PosthocAdjustment PosthocAdjustment::from_weights(SimplexWeights weights,
                                                  ClassPriors priors,
                                                  double delta_train,
                                                  Divergence kind) {
  if (weights.size() != priors.size()) {
    throw std::invalid_argument("PosthocAdjustment: weights/priors dimension mismatch");
  }
  std::vector<double> mult(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) {
    mult[i] = weights[i] / priors[i];
    if (!std::isfinite(mult[i])) {
      throw std::invalid_argument("PosthocAdjustment: non-finite multiplier");
    }
  }
  return PosthocAdjustment{std::move(mult), std::move(weights), std::move(priors),
                           delta_train, kind};
}

PosthocAdjustment PosthocAdjustment::identity(ClassPriors priors) {
  SimplexWeights weights(priors.values());
  return PosthocAdjustment{std::vector<double>(priors.size(), 1.0),
                           std::move(weights), std::move(priors), 0.0,
                           Divergence::kl};
}

SimplexWeights softmax(std::span<const double> logits) {
  if (logits.empty()) throw std::invalid_argument("softmax: empty row");
  double max = -std::numeric_limits<double>::infinity();
  for (double v : logits) {
    if (!std::isfinite(v)) throw std::invalid_argument("softmax: non-finite logit");
    max = std::max(max, v);
  }
  std::vector<double> out(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - max);
    sum += out[i];
  }
  for (double& v : out) v /= sum;
  return SimplexWeights(std::move(out));
}

SimplexWeights adjusted_scores(const SimplexWeights& probs,
                               const PosthocAdjustment& adj) {
  if (probs.size() != adj.size()) {
    throw std::invalid_argument("adjusted_scores: dimension mismatch");
  }
  std::vector<double> out(probs.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    out[i] = adj.multipliers[i] * probs[i];
    sum += out[i];
  }
  if (!(sum > 0.0)) {
    throw NumericError("adjusted_scores: all probability mass on zero-multiplier classes");
  }
  for (double& v : out) v /= sum;
  return SimplexWeights(std::move(out));
}

std::size_t predict(std::span<const double> row, const PosthocAdjustment& adj,
                    InputKind kind) {
  if (row.size() != adj.size()) {
    throw std::invalid_argument("predict: dimension mismatch");
  }
  std::vector<double> scores(row.size());
  if (kind == InputKind::probabilities) {
    double sum = 0.0;
    for (std::size_t i = 0; i < row.size(); ++i) {
      scores[i] = adj.multipliers[i] * row[i];
      sum += scores[i];
    }
    if (!(sum > 0.0)) {
      throw NumericError("predict: all probability mass on zero-multiplier classes");
    }
  } else {
    for (std::size_t i = 0; i < row.size(); ++i) {
      scores[i] = row[i] + std::log(adj.multipliers[i]);
    }
  }
  return argmax_lowest(scores);
}

std::size_t predict_unadjusted(std::span<const double> row) {
  return argmax_lowest(row);
}

}  // namespace drops
