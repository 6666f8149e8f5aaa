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
#include <span>
#include <vector>

#include "drops/divergence.hpp"
#include "drops/simplex.hpp"

namespace drops {

enum class InputKind { probabilities, logits };

std::string to_string(InputKind k);
InputKind input_kind_from_string(const std::string& name);

// Per-class multiplicative rescaling of a frozen model's scores. The
// multiplier for class i is weights_i / priors_i; rescoring a probability
// row p produces scores proportional to multipliers ∘ p, and on logit rows
// the equivalent additive shift is log(multipliers).
struct PosthocAdjustment {
  std::vector<double> multipliers;
  SimplexWeights weights;
  ClassPriors priors;
  double delta_train = 0.0;
  Divergence divergence_kind = Divergence::kl;

  static PosthocAdjustment from_weights(SimplexWeights weights, ClassPriors priors,
                                        double delta_train, Divergence kind);

  // weights == priors, i.e. all multipliers equal one.
  static PosthocAdjustment identity(ClassPriors priors);

  std::size_t size() const { return multipliers.size(); }
};

// Numerically stable (max-subtracted) softmax.
SimplexWeights softmax(std::span<const double> logits);

// Rescaled probability vector: out_i = multipliers_i * probs_i, renormalized.
// Throws NumericError when all probability mass sits on zero-multiplier
// classes.
SimplexWeights adjusted_scores(const SimplexWeights& probs,
                               const PosthocAdjustment& adj);

/**
 * Post-shifted class prediction for one row of model scores.
 *
 * For probability rows the prediction is argmax_i multipliers_i * probs_i.
 * For logit rows it is argmax_i (logit_i + log multipliers_i), which selects
 * the same class as rescaling the softmax probabilities. Ties break toward
 * the lowest class index in both paths.
 */
std::size_t predict(std::span<const double> row, const PosthocAdjustment& adj,
                    InputKind kind);

// Plain argmax prediction (no adjustment); same tie rule.
std::size_t predict_unadjusted(std::span<const double> row);

}  // namespace drops
