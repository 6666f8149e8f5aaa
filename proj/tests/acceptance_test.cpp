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

// Acceptance suite: one test per release criterion, each printing a single
// PASS/FAIL line. Run via `ctest -R acceptance` or the binary directly.

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "drops/errors.hpp"
#include "drops/groups.hpp"
#include "drops/learner.hpp"
#include "drops/posthoc.hpp"
#include "drops/prediction_io.hpp"
#include "drops/robust_metric.hpp"
#include "drops/synth.hpp"
#include "testing/test_util.hpp"

namespace drops {
namespace {

namespace fs = std::filesystem;

class Acceptance : public ::testing::Test {
 protected:
  void SetUp() override { start_ = std::chrono::steady_clock::now(); }

  double elapsed_seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

  void conclude(const char* id, const char* name, double runtime_limit_s = 0.0) {
    if (runtime_limit_s > 0.0) {
      EXPECT_LT(elapsed_seconds(), runtime_limit_s)
          << id << " exceeded its runtime budget";
    }
    const bool pass = !HasFailure();
    std::printf("[ACCEPTANCE] %s %s: %s (%.1fs)\n", id, name,
                pass ? "PASS" : "FAIL", elapsed_seconds());
    std::fflush(stdout);
  }

  std::chrono::steady_clock::time_point start_;
};

TEST_F(Acceptance, C1MetricEndpoints) {
  std::mt19937_64 rng(1001);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t m = 2 + rng() % 9;  // 2..10
    const AccuracyVector acc(testing::random_accuracies(rng, m));
    const SimplexWeights r = trial % 2 == 0 ? SimplexWeights::uniform(m)
                                            : testing::random_simplex(rng, m);
    const DivergenceSpec kind{
        trial % 4 < 2 ? Divergence::kl : Divergence::reverse_kl, r};

    const auto at_zero = delta_worst(acc, {kind, 0.0});
    ASSERT_NEAR(at_zero.value, dot(acc.span(), r.span()), 1e-9);

    double rmin = 1.0, amin = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
      rmin = std::min(rmin, r[i]);
      amin = std::min(amin, acc[i]);
    }
    const DivergenceSpec kl{Divergence::kl, r};
    const auto at_vertex = delta_worst(acc, {kl, std::log(1.0 / rmin)});
    ASSERT_EQ(at_vertex.value, amin);
    const auto beyond = delta_worst(acc, {kl, std::log(1.0 / rmin) + 1.5});
    ASSERT_EQ(beyond.value, amin);
  }
  conclude("C1", "metric endpoints over 1000 random vectors", 10.0);
}

TEST_F(Acceptance, C2OracleAgreement) {
  std::mt19937_64 rng(1002);
  const std::vector<double> deltas{0.05, 0.1, 0.5, 1.0};
  double worst_gap = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const AccuracyVector acc(testing::random_accuracies(rng, 3));
    for (auto kind : {Divergence::kl, Divergence::reverse_kl}) {
      const DivergenceSpec spec{kind, SimplexWeights::uniform(3)};
      for (double delta : deltas) {
        const DeltaBall ball{spec, delta};
        const double dual = delta_worst(acc, ball).value;
        const double oracle = delta_worst_grid_oracle(acc, ball, 1e-3);
        worst_gap = std::max(worst_gap, std::abs(dual - oracle));
        ASSERT_NEAR(dual, oracle, 2e-3);
      }
    }
  }
  std::printf("  C2 detail: worst |dual - oracle| = %.2e over 400 solves\n",
              worst_gap);
  conclude("C2", "dual solver vs grid oracle (m=3, step 1e-3)", 60.0);
}

TEST_F(Acceptance, C3CurveMonotoneAndFeasible) {
  std::mt19937_64 rng(1003);
  const std::vector<double> deltas{0.0, 0.05, 0.1, 0.3, 0.7, 1.5};
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 2 + rng() % 5;
    const AccuracyVector acc(testing::random_accuracies(rng, m));
    const SimplexWeights r = trial % 3 == 0 ? testing::random_simplex(rng, m)
                                            : SimplexWeights::uniform(m);
    const DivergenceSpec spec{
        trial % 2 == 0 ? Divergence::kl : Divergence::reverse_kl, r};
    const auto curve = robust_curve(acc, spec, deltas);
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
      if (i > 0) {
        ASSERT_LE(curve.points[i].value, curve.points[i - 1].value + 1e-9);
      }
      ASSERT_LE(divergence_value(spec, curve.points[i].minimizer),
                curve.points[i].delta + 1e-8);
    }
  }
  conclude("C3", "200 robust curves nonincreasing with feasible minimizers");
}

TEST_F(Acceptance, C4EgClosedFormFidelity) {
  std::mt19937_64 rng(1004);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> g0(3);
    for (double& v : g0) v = 0.1 + testing::unit(rng);
    double sum = g0[0] + g0[1] + g0[2];
    for (double& v : g0) v /= sum;
    std::vector<double> losses(3);
    for (double& v : losses) v = testing::unit(rng);
    const double lambda = 2.0 * testing::unit(rng);
    const double eta = 0.2 + 2.0 * testing::unit(rng);
    const SimplexWeights target = trial % 2 == 0
                                      ? SimplexWeights::uniform(3)
                                      : testing::random_simplex(rng, 3, 0.05);

    const auto closed = g_step_eg_closed_form(SimplexWeights(g0), losses, lambda,
                                              eta, target, 1e-12);
    const auto numeric = testing::grid_argmax_regularized(g0, losses, lambda, eta,
                                                          target.values());
    for (std::size_t i = 0; i < 3; ++i) {
      worst = std::max(worst, std::abs(closed[i] - numeric[i]));
      ASSERT_NEAR(closed[i], numeric[i], 1e-6);
    }
  }
  std::printf("  C4 detail: worst |closed form - grid argmax| = %.2e\n", worst);
  conclude("C4", "EG closed form vs grid maximization on 100 states");
}

TEST_F(Acceptance, C5LogitAdjustmentEquivalence) {
  std::mt19937_64 rng(1005);
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t m = 2 + rng() % 9;
    std::vector<double> logits(m);
    for (double& v : logits) v = 12.0 * (testing::unit(rng) - 0.5);
    const auto adj = PosthocAdjustment::from_weights(
        testing::random_simplex(rng, m),
        ClassPriors(testing::random_simplex(rng, m).values()), 0.0,
        Divergence::kl);
    const std::size_t multiplicative =
        predict(softmax(logits).span(), adj, InputKind::probabilities);
    const std::size_t additive = predict(logits, adj, InputKind::logits);
    ASSERT_EQ(multiplicative, additive);
  }
  conclude("C5", "multiplicative vs additive-log argmax on 10^4 triples");
}

TEST_F(Acceptance, C6Lemma1BayesOptimality) {
  const GaussianMixtureSpec spec{2, 1, {-1.0, 1.0}, 1.0,
                                 SimplexWeights({0.9, 0.1}), 1006};
  const std::size_t n = 100000;
  const auto samples = sample(spec, n);
  std::vector<double> thresholds;
  for (int i = 0; i <= 4000; ++i) thresholds.push_back(-5.0 + 10.0 * i / 4000.0);

  std::mt19937_64 rng(1066);
  for (int trial = 0; trial < 10; ++trial) {
    const double g0 = 0.02 + 0.96 * testing::unit(rng);
    const SimplexWeights g({g0, 1.0 - g0});
    const auto oracle = binary_threshold_oracle(spec, g, n, thresholds);

    long long wrong0 = 0, n0 = 0, wrong1 = 0, n1 = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto eta = true_eta(spec, samples.point(i));
      const int pred =
          g[1] / spec.priors[1] * eta[1] > g[0] / spec.priors[0] * eta[0] ? 1 : 0;
      if (samples.labels[i] == 0) {
        ++n0;
        wrong0 += pred != 0;
      } else {
        ++n1;
        wrong1 += pred != 1;
      }
    }
    const double err =
        g[0] * static_cast<double>(wrong0) / static_cast<double>(n0) +
        g[1] * static_cast<double>(wrong1) / static_cast<double>(n1);
    ASSERT_LE(err, oracle.weighted_error + 0.005)
        << "g = [" << g[0] << ", " << g[1] << "]";
  }
  conclude("C6", "post-shifted Bayes rule vs threshold oracle", 30.0);
}

TEST_F(Acceptance, C7EndToEndDirectionalReproduction) {
  const std::size_t m = 10;
  const auto priors = GaussianMixtureSpec::geometric_priors(m, 100.0);
  auto spec = GaussianMixtureSpec::simplex_corners(m, 2.0, 1.0, priors, 42);
  const auto validation = make_prediction_dataset(spec, 10000);
  spec.seed = 43;
  const auto heldout = make_prediction_dataset(spec, 10000);

  const DeltaBall ball{DivergenceSpec::kl_uniform(m), 1.0};
  const double unadjusted = delta_worst(per_class_accuracy(heldout), ball).value;

  auto cfg = LearnerConfig::with_schedule_defaults(
      1.0, DivergenceSpec::kl_uniform(m), validation.empirical_priors(),
      validation.num_samples(), 400);
  cfg.scorer_mode = ScorerMode::best_validation;
  const auto result = learn(validation, validation.empirical_priors(), cfg);
  const auto adjusted_acc = per_class_accuracy(heldout, &result.adjustment);
  const double adjusted = delta_worst(adjusted_acc, ball).value;

  std::printf("  C7 detail: delta=1 worst accuracy %.4f -> %.4f (+%.1f pp)\n",
              unadjusted, adjusted, 100.0 * (adjusted - unadjusted));
  EXPECT_GE(adjusted, unadjusted + 0.02);
  conclude("C7", "rho=100 synthetic: adjusted beats unadjusted by >= 2pp", 30.0);
}

TEST_F(Acceptance, C8SaddlePointSanity) {
  const std::size_t m = 3;
  const double delta = 0.5;
  const auto spec = GaussianMixtureSpec::simplex_corners(
      m, 2.0, 1.0, SimplexWeights({0.6, 0.3, 0.1}), 7);
  const auto validation = make_prediction_dataset(spec, 4000);
  const auto priors = validation.empirical_priors();
  const DivergenceSpec divergence = DivergenceSpec::kl_uniform(m);
  const DeltaBall ball{divergence, delta};

  auto cfg = LearnerConfig::with_schedule_defaults(delta, divergence, priors,
                                                   validation.num_samples(), 500);
  cfg.scorer_mode = ScorerMode::best_validation;
  const auto result = learn(validation, priors, cfg);

  double best_drl = std::numeric_limits<double>::infinity();
  for (const auto& row : result.trace.rows) {
    ASSERT_GE(row.lambda, 0.0);
    ASSERT_LE(row.lambda, cfg.lambda_cap);
    best_drl = std::min(best_drl,
                        constrained_weighted_max(row.per_class_loss, ball).value);
  }

  // dense-grid reference: every candidate adjustment weight vector on the
  // step-0.01 simplex lattice
  const long long resolution = 100;
  double grid_min = std::numeric_limits<double>::infinity();
  for (long long k0 = 0; k0 <= resolution; ++k0) {
    for (long long k1 = 0; k1 <= resolution - k0; ++k1) {
      const long long k2 = resolution - k0 - k1;
      std::vector<double> g{
          std::max(static_cast<double>(k0) / resolution, 1e-12),
          std::max(static_cast<double>(k1) / resolution, 1e-12),
          std::max(static_cast<double>(k2) / resolution, 1e-12)};
      const auto adj = PosthocAdjustment::from_weights(
          SimplexWeights::from_unnormalized(g), priors, delta, Divergence::kl);
      const auto losses = per_class_loss(validation, adj, LossKind::zero_one);
      grid_min =
          std::min(grid_min, constrained_weighted_max(losses, ball).value);
    }
  }

  std::printf("  C8 detail: best-so-far DRL %.5f vs grid min %.5f\n", best_drl,
              grid_min);
  EXPECT_NEAR(best_drl, grid_min, 0.01);

  const double selected_div = divergence_value(divergence, result.adjustment.weights);
  EXPECT_LE(selected_div, delta + 0.05);
  conclude("C8", "saddle loop reaches the dense-grid DRL optimum");
}

TEST_F(Acceptance, C9IoRoundTripsAndRejection) {
  const fs::path dir =
      fs::temp_directory_path() /
      ("drops_acceptance_io_" + std::to_string(::getpid()));
  fs::create_directories(dir);

  std::mt19937_64 rng(1009);
  // 100 randomized datasets and adjustment files survive write -> read
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t classes = 2 + rng() % 6;
    const std::size_t n = 3 + rng() % 30;
    const bool with_attrs = trial % 3 == 0;
    const InputKind kind =
        trial % 4 == 0 ? InputKind::logits : InputKind::probabilities;
    std::vector<double> scores;
    std::vector<std::int32_t> labels, attrs;
    for (std::size_t i = 0; i < n; ++i) {
      if (kind == InputKind::probabilities) {
        const auto row = testing::random_simplex(rng, classes);
        scores.insert(scores.end(), row.values().begin(), row.values().end());
      } else {
        for (std::size_t j = 0; j < classes; ++j) {
          scores.push_back(40.0 * (testing::unit(rng) - 0.5));
        }
      }
      labels.push_back(static_cast<std::int32_t>(rng() % classes));
      attrs.push_back(static_cast<std::int32_t>(rng() % 2));
    }
    const auto ds = PredictionDataset::create(
        classes, scores, labels,
        with_attrs ? std::optional(attrs) : std::nullopt, kind);
    const fs::path preds = dir / "preds.csv";
    write_predictions(preds, ds);
    const auto back = load_predictions(preds, kind);
    ASSERT_EQ(back.scores(), ds.scores());
    ASSERT_EQ(back.labels(), ds.labels());
    ASSERT_EQ(back.attributes(), ds.attributes());

    AdjustmentFile file;
    file.divergence = trial % 2 == 0 ? Divergence::kl : Divergence::reverse_kl;
    file.delta_train = 2.0 * testing::unit(rng);
    file.scorer_mode = trial % 5 == 0 ? ScorerMode::average : ScorerMode::last;
    file.created = "acceptance";
    const auto priors = ClassPriors(testing::random_simplex(rng, classes).values());
    const auto g = testing::random_simplex(rng, classes);
    std::vector<double> mult(classes);
    for (std::size_t i = 0; i < classes; ++i) mult[i] = g[i] / priors[i];
    AdjustmentFile::Entry entry{std::nullopt, priors, g, mult, {}};
    if (file.scorer_mode == ScorerMode::average) {
      for (int t = 0; t < 3; ++t) {
        entry.g_trace.push_back(testing::random_simplex(rng, classes));
      }
    }
    file.entries.push_back(entry);
    const fs::path adjustment = dir / "adj.json";
    write_adjustment(adjustment, file);
    const auto parsed = read_adjustment(adjustment);
    ASSERT_EQ(parsed.delta_train, file.delta_train);
    ASSERT_EQ(parsed.entries[0].g.values(), g.values());
    ASSERT_EQ(parsed.entries[0].multipliers, mult);
    for (std::size_t t = 0; t < entry.g_trace.size(); ++t) {
      ASSERT_EQ(parsed.entries[0].g_trace[t].values(), entry.g_trace[t].values());
    }
  }

  // 50 corrupted prediction files are rejected with row-addressed messages
  int rejected = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t classes = 2 + rng() % 3;
    const std::size_t n = 4 + rng() % 10;
    std::vector<double> scores;
    std::vector<std::int32_t> labels;
    for (std::size_t i = 0; i < n; ++i) {
      const auto row = testing::random_simplex(rng, classes);
      scores.insert(scores.end(), row.values().begin(), row.values().end());
      labels.push_back(static_cast<std::int32_t>(rng() % classes));
    }
    const auto ds = PredictionDataset::create(classes, scores, labels,
                                              std::nullopt,
                                              InputKind::probabilities);
    const fs::path valid = dir / "valid.csv";
    write_predictions(valid, ds);
    std::string text;
    {
      std::ifstream in(valid, std::ios::binary);
      std::stringstream ss;
      ss << in.rdbuf();
      text = ss.str();
    }

    // corrupt one data row
    std::vector<std::size_t> line_starts;
    for (std::size_t pos = 0; pos < text.size(); ++pos) {
      if (pos == 0 || text[pos - 1] == '\n') line_starts.push_back(pos);
    }
    const std::size_t row = 1 + rng() % n;  // data rows are lines 2..n+1
    const std::size_t begin = line_starts[row];
    const std::size_t end = text.find('\n', begin);
    std::string line = text.substr(begin, end - begin);
    switch (trial % 5) {
      case 0: line = "0.9,0.9"; break;                      // column count
      case 1: line[0] = 'x'; break;                         // garbage token
      case 2: line = line.substr(0, line.rfind(',')) + ",99"; break;  // label
      case 3: {                                             // break the row sum
        const std::size_t comma = line.find(',');
        line = "7.5" + line.substr(comma);
        break;
      }
      default: line = "-0.5,1.5" + line.substr(line.find(',', line.find(',') + 1));
    }
    text = text.substr(0, begin) + line + text.substr(end);
    const fs::path bad = dir / "bad.csv";
    std::ofstream(bad, std::ios::binary) << text;
    try {
      load_predictions(bad, InputKind::probabilities);
    } catch (const ValidationError& e) {
      const std::string what = e.what();
      ASSERT_NE(what.find("row " + std::to_string(row + 1)), std::string::npos)
          << what;
      ++rejected;
    }
  }
  ASSERT_EQ(rejected, 50);

  fs::remove_all(dir);
  conclude("C9", "100 exact IO round-trips, 50 row-addressed rejections");
}

}  // namespace
}  // namespace drops
