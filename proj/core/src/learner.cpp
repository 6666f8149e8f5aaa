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

#include "drops/learner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "drops/errors.hpp"
#include "drops/robust_metric.hpp"

namespace drops {

namespace {

constexpr double kLogLossFloor = 1e-12;

SimplexWeights normalize_log_weights(std::vector<double> log_weights,
                                     double g_floor) {
  const double top = *std::max_element(log_weights.begin(), log_weights.end());
  double sum = 0.0;
  for (double& v : log_weights) {
    v = std::exp(v - top);
    sum += v;
  }
  for (double& v : log_weights) v /= sum;
  return floor_and_renormalize(SimplexWeights(std::move(log_weights)), g_floor);
}

}  // namespace

std::string to_string(LossKind k) {
  return k == LossKind::zero_one ? "zero_one" : "log_loss";
}
std::string to_string(GUpdate u) {
  return u == GUpdate::simplified ? "simplified" : "eg";
}
std::string to_string(ScorerMode m) {
  switch (m) {
    case ScorerMode::average: return "average";
    case ScorerMode::last: return "last";
    default: return "best_validation";
  }
}

LossKind loss_kind_from_string(const std::string& name) {
  if (name == "zero_one") return LossKind::zero_one;
  if (name == "log_loss") return LossKind::log_loss;
  throw std::invalid_argument("unknown loss '" + name + "' (expected zero_one|log_loss)");
}

GUpdate g_update_from_string(const std::string& name) {
  if (name == "simplified") return GUpdate::simplified;
  if (name == "eg" || name == "eg_closed_form") return GUpdate::eg_closed_form;
  throw std::invalid_argument("unknown g update '" + name + "' (expected simplified|eg)");
}

ScorerMode scorer_mode_from_string(const std::string& name) {
  if (name == "average") return ScorerMode::average;
  if (name == "last") return ScorerMode::last;
  if (name == "best_validation") return ScorerMode::best_validation;
  throw std::invalid_argument(
      "unknown scorer mode '" + name + "' (expected average|last|best_validation)");
}

LearnerConfig LearnerConfig::with_schedule_defaults(double delta_train,
                                                    DivergenceSpec divergence,
                                                    const ClassPriors& priors,
                                                    std::size_t validation_size,
                                                    int iterations_override) {
  const std::size_t m = priors.size();
  double z = 0.0;
  for (std::size_t i = 0; i < m; ++i) z = std::max(z, 1.0 / priors[i]);

  LearnerConfig cfg;
  cfg.delta_train = delta_train;
  cfg.divergence = std::move(divergence);
  cfg.iterations = iterations_override > 0
                       ? iterations_override
                       : static_cast<int>(std::min<std::size_t>(validation_size, 2000));
  const double t = static_cast<double>(cfg.iterations);
  const double bd = std::log(static_cast<double>(m));
  cfg.lambda_cap = delta_train > 0.0 ? 2.0 * z / delta_train : 2000.0 * z;
  cfg.eta_lambda = cfg.lambda_cap / (bd * std::sqrt(t));
  cfg.eta_g = std::sqrt(bd / t) / (2.0 * z + cfg.lambda_cap);
  cfg.lambda_init = std::min(1.0, cfg.lambda_cap);
  return cfg;
}

void LearnerConfig::validate(std::size_t m) const {
  if (divergence.target.size() != m) {
    throw std::invalid_argument("LearnerConfig: divergence target dimension mismatch");
  }
  if (!(delta_train >= 0.0)) throw std::invalid_argument("LearnerConfig: delta_train < 0");
  if (iterations < 1) throw std::invalid_argument("LearnerConfig: iterations < 1");
  if (!(eta_lambda > 0.0)) throw std::invalid_argument("LearnerConfig: eta_lambda <= 0");
  if (!(eta_g > 0.0)) throw std::invalid_argument("LearnerConfig: eta_g <= 0");
  if (!(lambda_cap > 0.0)) throw std::invalid_argument("LearnerConfig: lambda_cap <= 0");
  if (!(lambda_init >= 0.0) || lambda_init > lambda_cap) {
    throw std::invalid_argument("LearnerConfig: lambda_init outside [0, lambda_cap]");
  }
  if (!(g_floor > 0.0) || g_floor > 1.0 / static_cast<double>(m)) {
    throw std::invalid_argument("LearnerConfig: g_floor outside (0, 1/m]");
  }
}

std::vector<double> per_class_loss(const PredictionDataset& dataset,
                                   const PosthocAdjustment& adjustment,
                                   LossKind kind) {
  const std::size_t m = dataset.num_classes();
  if (adjustment.size() != m) {
    throw std::invalid_argument("per_class_loss: adjustment dimension mismatch");
  }
  std::vector<double> total(m, 0.0);
  if (kind == LossKind::zero_one) {
    for (std::size_t i = 0; i < dataset.num_samples(); ++i) {
      const std::size_t pred = predict(dataset.row(i), adjustment, dataset.input_kind());
      const auto y = static_cast<std::size_t>(dataset.label(i));
      if (pred != y) total[y] += 1.0;
    }
  } else {
    for (std::size_t i = 0; i < dataset.num_samples(); ++i) {
      const SimplexWeights adjusted =
          adjusted_scores(dataset.probabilities(i), adjustment);
      const auto y = static_cast<std::size_t>(dataset.label(i));
      total[y] += -std::log(std::max(adjusted[y], kLogLossFloor));
    }
  }
  std::vector<double> loss(m);
  for (std::size_t i = 0; i < m; ++i) {
    const std::int64_t count = dataset.class_counts()[i];
    if (count == 0) {
      throw ValidationError("per_class_loss: class " + std::to_string(i) +
                            " has no samples");
    }
    loss[i] = total[i] / static_cast<double>(count);
    if (!std::isfinite(loss[i])) {
      throw NumericError("per_class_loss: non-finite loss for class " + std::to_string(i));
    }
  }
  return loss;
}

double lambda_step(double lambda, const SimplexWeights& g,
                   const DivergenceSpec& divergence, double delta, double eta,
                   double cap) {
  const double div = divergence_value(divergence, g);
  return std::clamp(lambda - eta * (delta - div), 0.0, cap);
}

SimplexWeights g_step_simplified(const SimplexWeights& target,
                                 std::span<const double> losses, double lambda,
                                 double g_floor) {
  if (losses.size() != target.size()) {
    throw std::invalid_argument("g_step_simplified: dimension mismatch");
  }
  if (lambda == 0.0) {
    // exp(loss/lambda) concentration limit: the largest loss takes all mass.
    std::vector<double> g(target.size(), 0.0);
    g[argmax_lowest(losses)] = 1.0;
    return floor_and_renormalize(SimplexWeights(std::move(g)), g_floor);
  }
  std::vector<double> log_weights(target.size());
  for (std::size_t i = 0; i < target.size(); ++i) {
    log_weights[i] = std::log(target[i]) + losses[i] / lambda;
  }
  return normalize_log_weights(std::move(log_weights), g_floor);
}

SimplexWeights g_step_eg_closed_form(const SimplexWeights& g,
                                     std::span<const double> losses,
                                     double lambda, double eta_g,
                                     const SimplexWeights& target,
                                     double g_floor) {
  if (losses.size() != g.size() || target.size() != g.size()) {
    throw std::invalid_argument("g_step_eg_closed_form: dimension mismatch");
  }
  if (!g.full_support()) {
    throw std::invalid_argument("g_step_eg_closed_form: g must have full support");
  }
  if (!(eta_g > 0.0) || lambda < 0.0) {
    throw std::invalid_argument("g_step_eg_closed_form: need eta_g > 0 and lambda >= 0");
  }
  const double exponent = 1.0 / (1.0 + lambda * eta_g);
  std::vector<double> log_weights(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    log_weights[i] = exponent * (std::log(g[i]) + eta_g * losses[i] +
                                 lambda * eta_g * std::log(target[i]));
  }
  return normalize_log_weights(std::move(log_weights), g_floor);
}

LearnResult learn(const PredictionDataset& dataset, const ClassPriors& priors,
                  const LearnerConfig& config) {
  const std::size_t m = dataset.num_classes();
  if (priors.size() != m) {
    throw std::invalid_argument("learn: priors dimension mismatch");
  }
  config.validate(m);
  dataset.empirical_priors();  // rejects datasets with an empty class

  const SimplexWeights& target = config.divergence.target;
  const DeltaBall ball{config.divergence, config.delta_train};

  auto adjustment_for = [&](const SimplexWeights& g) {
    return PosthocAdjustment::from_weights(g, priors, config.delta_train,
                                           config.divergence.kind);
  };

  SimplexWeights g = target;
  double lambda = config.lambda_init;
  std::vector<double> losses = per_class_loss(dataset, adjustment_for(g), config.loss);

  SaddleTrace trace;
  trace.rows.reserve(static_cast<std::size_t>(config.iterations));
  std::vector<SimplexWeights> g_trace;
  g_trace.reserve(static_cast<std::size_t>(config.iterations));

  double best_drl = std::numeric_limits<double>::infinity();
  std::size_t best_index = 0;

  for (int t = 1; t <= config.iterations; ++t) {
    const double lambda_next = lambda_step(lambda, g, config.divergence,
                                           config.delta_train, config.eta_lambda,
                                           config.lambda_cap);
    // The g update consumes the pre-update lambda: both iterates advance from
    // the same (g, lambda, losses) state.
    SimplexWeights g_next =
        config.g_update == GUpdate::simplified
            ? g_step_simplified(target, losses, lambda, config.g_floor)
            : g_step_eg_closed_form(g, losses, lambda, config.eta_g, target,
                                    config.g_floor);
    lambda = lambda_next;
    g = std::move(g_next);

    losses = per_class_loss(dataset, adjustment_for(g), config.loss);
    const double div = divergence_value(config.divergence, g);
    const double lagrangian =
        dot(g.span(), losses) - lambda * (div - config.delta_train);

    const double drl = constrained_weighted_max(losses, ball).value;
    if (drl < best_drl) {
      best_drl = drl;
      best_index = g_trace.size();
    }

    trace.rows.push_back({t, lambda, g, losses, lagrangian});
    g_trace.push_back(g);
  }

  SimplexWeights selected = g;
  if (config.scorer_mode == ScorerMode::best_validation) {
    selected = g_trace[best_index];
  } else if (config.scorer_mode == ScorerMode::average) {
    std::vector<double> mean(m, 0.0);
    for (const SimplexWeights& gt : g_trace) {
      for (std::size_t i = 0; i < m; ++i) mean[i] += gt[i];
    }
    selected = SimplexWeights::from_unnormalized(std::move(mean));
  }

  AveragedScorer scorer{std::move(g_trace), priors, config.scorer_mode};
  return LearnResult{adjustment_for(selected), std::move(scorer), std::move(trace)};
}

std::size_t averaged_predict(std::span<const double> row, InputKind kind,
                             const AveragedScorer& scorer) {
  if (scorer.g_trace.empty()) {
    throw std::invalid_argument("averaged_predict: empty g trace");
  }
  const SimplexWeights probs =
      kind == InputKind::logits
          ? softmax(row)
          : SimplexWeights::from_unnormalized(std::vector<double>(row.begin(), row.end()));
  std::vector<double> mean(probs.size(), 0.0);
  for (const SimplexWeights& g : scorer.g_trace) {
    const PosthocAdjustment adj = PosthocAdjustment::from_weights(
        g, scorer.priors, 0.0, Divergence::kl);
    const SimplexWeights adjusted = adjusted_scores(probs, adj);
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += adjusted[i];
  }
  for (double& v : mean) v /= static_cast<double>(scorer.g_trace.size());
  return argmax_lowest(mean);
}

}  // namespace drops
