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
#include "drops/divergence.hpp"
#include "drops/posthoc.hpp"
#include "drops/simplex.hpp"

namespace drops {

enum class LossKind { zero_one, log_loss };
enum class GUpdate { simplified, eg_closed_form };
enum class ScorerMode { average, last, best_validation };

std::string to_string(LossKind k);
std::string to_string(GUpdate u);
std::string to_string(ScorerMode m);
LossKind loss_kind_from_string(const std::string& name);
GUpdate g_update_from_string(const std::string& name);
ScorerMode scorer_mode_from_string(const std::string& name);

struct LearnerConfig {
  double delta_train = 1.0;
  DivergenceSpec divergence = DivergenceSpec::kl_uniform(2);
  int iterations = 100;
  double eta_lambda = 0.1;
  double eta_g = 0.1;
  double lambda_cap = 10.0;
  LossKind loss = LossKind::zero_one;
  GUpdate g_update = GUpdate::simplified;
  ScorerMode scorer_mode = ScorerMode::average;
  double lambda_init = 1.0;
  double g_floor = 1e-12;

  /**
   * Plug-in step-size schedule: with Z = max_i 1/priors_i and B_D = log m,
   *
   *   lambda_cap R = 2 Z / delta_train
   *   eta_lambda   = R / (B_D sqrt(T))
   *   eta_g        = sqrt(log(m) / T) / (2 Z + R)
   *
   * T defaults to the validation size capped at 2000. delta_train = 0 uses
   * R = 2000 Z so the cap stays finite.
   */
  static LearnerConfig with_schedule_defaults(double delta_train,
                                              DivergenceSpec divergence,
                                              const ClassPriors& priors,
                                              std::size_t validation_size,
                                              int iterations_override = 0);

  void validate(std::size_t m) const;
};

// One row per iteration of the saddle-point loop. `g` and `lambda` are the
// iterates after the iteration's updates; `per_class_loss` is measured on the
// classifier post-shifted by this row's g, and `lagrangian` combines the
// three at this iterate.
struct SaddleTrace {
  struct Row {
    int t = 0;
    double lambda = 0.0;
    SimplexWeights g;
    std::vector<double> per_class_loss;
    double lagrangian = 0.0;
  };
  std::vector<Row> rows;
};

// The uniform average over iterations of the post-shifted scorers. Carries
// the full g-trace so prediction can average the per-iterate probability
// vectors exactly.
struct AveragedScorer {
  std::vector<SimplexWeights> g_trace;
  ClassPriors priors;
  ScorerMode mode = ScorerMode::average;
};

struct LearnResult {
  PosthocAdjustment adjustment;
  AveragedScorer scorer;
  SaddleTrace trace;
};

// Class-conditional mean loss of the post-shifted classifier. zero_one gives
// 1 - accuracy per class; log_loss is -log of the adjusted probability of
// the true class, floored at 1e-12.
std::vector<double> per_class_loss(const PredictionDataset& dataset,
                                   const PosthocAdjustment& adjustment,
                                   LossKind kind);

// Gradient step on the Lagrange multiplier, clipped to [0, cap]:
// lambda - eta * (delta - D(g, target)).
double lambda_step(double lambda, const SimplexWeights& g,
                   const DivergenceSpec& divergence, double delta, double eta,
                   double cap);

/**
 * Simplified multiplier update: g_i ∝ target_i exp(losses_i / lambda),
 * normalized, floored at g_floor and renormalized. lambda = 0 is treated as
 * the concentration limit: all mass on the largest-loss class (lowest index
 * on ties), floored.
 */
SimplexWeights g_step_simplified(const SimplexWeights& target,
                                 std::span<const double> losses, double lambda,
                                 double g_floor);

/**
 * Closed-form entropic-mirror ascent step
 *
 *   g_i <- (g_i exp(eta_g losses_i + lambda eta_g log target_i))^(1/(1+lambda eta_g))
 *
 * normalized to the simplex, floored and renormalized. The normalized result
 * maximizes sum_i g'_i losses_i - KL(g', g)/eta_g - lambda (KL(g', target) - delta)
 * over the simplex.
 */
SimplexWeights g_step_eg_closed_form(const SimplexWeights& g,
                                     std::span<const double> losses,
                                     double lambda, double eta_g,
                                     const SimplexWeights& target,
                                     double g_floor);

/**
 * Saddle-point loop: starting from g = target and lambda = lambda_init,
 * alternate the lambda gradient step, the g update and post-hoc rescoring of
 * the validation predictions for `iterations` rounds. The adjustment in the
 * result carries the g selected by scorer_mode: the final iterate (last), the
 * iterate with the smallest empirical delta-worst loss (best_validation), or
 * the normalized mean of the trace as a single-vector summary (average, with
 * the exact averaged scorer in `scorer`).
 */
LearnResult learn(const PredictionDataset& dataset, const ClassPriors& priors,
                  const LearnerConfig& config);

// Averaged-scorer prediction: mean of the per-iterate adjusted probability
// vectors, argmax with lowest-index ties.
std::size_t averaged_predict(std::span<const double> row, InputKind kind,
                             const AveragedScorer& scorer);

}  // namespace drops
