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

// drops: evaluate classifier robustness under prior shifts and learn
// post-hoc scaling adjustments from exported model predictions.
//
// Exit status: 0 success, 1 usage error, 2 data validation error,
// 3 numerical failure.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "drops/dataset.hpp"
#include "drops/divergence.hpp"
#include "drops/errors.hpp"
#include "drops/groups.hpp"
#include "drops/learner.hpp"
#include "drops/posthoc.hpp"
#include "drops/prediction_io.hpp"
#include "drops/robust_metric.hpp"
#include "drops/simplex.hpp"
#include "drops/synth.hpp"

namespace {

using nlohmann::json;

struct SharedFlags {
  std::string preds;
  std::string kind = "probs";
  std::string divergence = "kl";
  std::string target = "uniform";
};

void add_shared(CLI::App* cmd, SharedFlags& flags, bool preds_required = true) {
  auto* preds = cmd->add_option("--preds", flags.preds, "prediction CSV file");
  if (preds_required) preds->required();
  cmd->add_option("--kind", flags.kind, "score kind in the file")
      ->check(CLI::IsMember({"probs", "logits"}))
      ->capture_default_str();
  cmd->add_option("--divergence", flags.divergence, "ball divergence")
      ->check(CLI::IsMember({"kl", "rkl"}))
      ->capture_default_str();
  cmd->add_option("--target", flags.target,
                  "target distribution: 'uniform' or a CSV file of weights")
      ->capture_default_str();
}

drops::PredictionDataset load_dataset(const SharedFlags& flags) {
  return drops::load_predictions(flags.preds,
                                 drops::input_kind_from_string(flags.kind));
}

drops::SimplexWeights resolve_target(const std::string& target, std::size_t m) {
  if (target == "uniform") return drops::SimplexWeights::uniform(m);
  return drops::load_target(target, m);
}

drops::DivergenceSpec resolve_spec(const SharedFlags& flags, std::size_t m) {
  return {drops::divergence_from_string(flags.divergence),
          resolve_target(flags.target, m)};
}

std::vector<double> parse_delta_grid(const std::string& text) {
  const std::size_t c1 = text.find(':');
  const std::size_t c2 = text.find(':', c1 == std::string::npos ? c1 : c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos) {
    throw CLI::ValidationError("--delta-grid", "expected A:B:STEP");
  }
  double lo{}, hi{}, step{};
  try {
    lo = std::stod(text.substr(0, c1));
    hi = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
    step = std::stod(text.substr(c2 + 1));
  } catch (const std::exception&) {
    throw CLI::ValidationError("--delta-grid", "expected numeric A:B:STEP");
  }
  if (lo < 0.0 || hi < lo || step <= 0.0) {
    throw CLI::ValidationError("--delta-grid", "need 0 <= A <= B and STEP > 0");
  }
  const auto count = static_cast<std::size_t>((hi - lo) / step + 1e-9) + 1;
  std::vector<double> grid;
  grid.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    grid.push_back(lo + static_cast<double>(i) * step);
  }
  return grid;
}

struct LoadedAdjustment {
  std::optional<drops::PosthocAdjustment> single;
  std::optional<drops::GroupAdjustment> grouped;
};

drops::GroupAdjustment group_adjustment_from_file(const drops::AdjustmentFile& file,
                                                  std::size_t num_attribute_values) {
  std::vector<const drops::AdjustmentFile::Entry*> by_attr(num_attribute_values,
                                                           nullptr);
  for (const auto& entry : file.entries) {
    if (!entry.attribute) {
      throw drops::ValidationError(
          "adjustment file mixes class-level and per-attribute entries");
    }
    const auto a = static_cast<std::size_t>(*entry.attribute);
    if (a < by_attr.size()) by_attr[a] = &entry;
  }
  drops::GroupAdjustment adj;
  for (std::size_t a = 0; a < by_attr.size(); ++a) {
    if (!by_attr[a]) {
      throw drops::ValidationError("adjustment file has no entry for attribute " +
                                   std::to_string(a));
    }
    adj.per_attribute.push_back(
        by_attr[a]->adjustment(file.delta_train, file.divergence));
  }
  return adj;
}

LoadedAdjustment load_adjustment_for(const std::string& path,
                                     const drops::PredictionDataset& ds) {
  LoadedAdjustment out;
  if (path.empty()) return out;
  const drops::AdjustmentFile file = drops::read_adjustment(path);
  if (file.entries.size() == 1 && !file.entries.front().attribute) {
    out.single = file.entries.front().adjustment(file.delta_train, file.divergence);
    return out;
  }
  if (!ds.has_attributes()) {
    throw drops::ValidationError(
        "adjustment file is per-attribute but the prediction file has no attr column");
  }
  out.grouped = group_adjustment_from_file(file, ds.num_attribute_values());
  return out;
}

// Per-group accuracies when the file carries an attribute column, per-class
// otherwise.
drops::AccuracyVector accuracies_of(const drops::PredictionDataset& ds,
                                    const LoadedAdjustment& adj) {
  if (adj.grouped) return drops::group_accuracy(ds, *adj.grouped);
  if (ds.has_attributes()) {
    return adj.single ? drops::group_accuracy(ds, *adj.single)
                      : drops::group_accuracy(ds);
  }
  return drops::per_class_accuracy(ds, adj.single ? &*adj.single : nullptr);
}

void emit_report(const json& report, const std::string& out) {
  const std::string text = report.dump(2) + "\n";
  std::cout << text;
  if (!out.empty()) {
    std::ofstream f(out, std::ios::binary | std::ios::trunc);
    if (!f) throw drops::ValidationError("cannot open '" + out + "' for writing");
    f << text;
  }
}

int run_eval(const SharedFlags& flags, double delta, const std::string& adjustment,
             const std::string& out) {
  const auto ds = load_dataset(flags);
  const auto adj = load_adjustment_for(adjustment, ds);
  const drops::AccuracyVector acc = accuracies_of(ds, adj);
  const auto spec = resolve_spec(flags, acc.size());
  const auto result = drops::delta_worst(acc, {spec, delta});

  double worst = acc[0];
  double mean = 0.0;
  for (std::size_t i = 0; i < acc.size(); ++i) {
    worst = std::min(worst, acc[i]);
    mean += spec.target[i] * acc[i];
  }

  json report;
  report["granularity"] = ds.has_attributes() ? "group" : "class";
  report["accuracies"] = acc.values();
  report["divergence"] = drops::to_string(spec.kind);
  report["delta"] = delta;
  report["delta_worst"] = result.value;
  report["minimizer"] = result.minimizer.values();
  report["mean"] = mean;
  report["worst"] = worst;
  emit_report(report, out);
  return 0;
}

int run_curve(const SharedFlags& flags, const std::string& grid_text,
              bool include_worst, const std::string& adjustment,
              const std::string& out) {
  const auto ds = load_dataset(flags);
  const auto adj = load_adjustment_for(adjustment, ds);
  const drops::AccuracyVector acc = accuracies_of(ds, adj);
  const auto spec = resolve_spec(flags, acc.size());
  const std::vector<double> deltas = parse_delta_grid(grid_text);

  drops::RobustCurve curve = drops::robust_curve(acc, spec, deltas);
  if (include_worst) {
    // Exact worst class/group as the delta -> infinity sentinel row.
    std::size_t worst = 0;
    for (std::size_t i = 1; i < acc.size(); ++i) {
      if (acc[i] < acc[worst]) worst = i;
    }
    std::vector<double> vertex(acc.size(), 0.0);
    vertex[worst] = 1.0;
    curve.points.push_back({std::numeric_limits<double>::infinity(), acc[worst],
                            drops::SimplexWeights(std::move(vertex))});
  }
  drops::write_curve_csv(out, curve);
  std::cout << "wrote " << curve.points.size() << " curve points to " << out << "\n";
  return 0;
}

int run_learn(const SharedFlags& flags, double delta, int iters, double eta_lambda,
              double eta_g, double lambda_cap, double lambda_init,
              const std::string& loss, const std::string& g_update,
              const std::string& mode, const std::string& group,
              const std::string& out, const std::string& trace_out) {
  const auto ds = load_dataset(flags);
  const auto spec = resolve_spec(flags, ds.num_classes());
  const auto group_mode = drops::group_mode_from_string(group);

  drops::LearnerConfig cfg = drops::LearnerConfig::with_schedule_defaults(
      delta, spec, ds.empirical_priors(), ds.num_samples(), iters);
  if (eta_lambda > 0.0) cfg.eta_lambda = eta_lambda;
  if (eta_g > 0.0) cfg.eta_g = eta_g;
  if (lambda_cap > 0.0) {
    cfg.lambda_cap = lambda_cap;
    cfg.lambda_init = std::min(cfg.lambda_init, lambda_cap);
  }
  if (lambda_init >= 0.0) cfg.lambda_init = lambda_init;
  cfg.loss = drops::loss_kind_from_string(loss);
  cfg.g_update = drops::g_update_from_string(g_update);
  cfg.scorer_mode = drops::scorer_mode_from_string(mode);

  const drops::GroupLearnResult result = drops::learn_group(ds, cfg, group_mode);
  const drops::AdjustmentFile file = drops::AdjustmentFile::from_group_result(
      result, delta, spec.kind, cfg.scorer_mode);
  drops::write_adjustment(out, file);

  const std::string trace_base = trace_out.empty() ? out + ".trace" : trace_out;
  if (result.results.size() == 1) {
    const std::string trace_path =
        trace_out.empty() ? trace_base + ".csv" : trace_out;
    drops::write_trace_csv(trace_path, result.results.front().trace);
    std::cout << "wrote adjustment to " << out << " and trace to " << trace_path
              << "\n";
  } else {
    for (std::size_t a = 0; a < result.results.size(); ++a) {
      drops::write_trace_csv(trace_base + ".a" + std::to_string(a) + ".csv",
                             result.results[a].trace);
    }
    std::cout << "wrote adjustment to " << out << " and " << result.results.size()
              << " traces to " << trace_base << ".a*.csv\n";
  }
  return 0;
}

int run_apply(const SharedFlags& flags, const std::string& adjustment,
              const std::string& out) {
  const auto ds = load_dataset(flags);
  const drops::AdjustmentFile file = drops::read_adjustment(adjustment);

  const bool per_attribute =
      file.entries.size() > 1 || file.entries.front().attribute.has_value();
  if (per_attribute && !ds.has_attributes()) {
    throw drops::ValidationError(
        "adjustment file is per-attribute but the prediction file has no attr column");
  }

  std::vector<const drops::AdjustmentFile::Entry*> by_attr;
  if (per_attribute) {
    by_attr.resize(ds.num_attribute_values(), nullptr);
    for (const auto& entry : file.entries) {
      if (!entry.attribute) {
        throw drops::ValidationError("adjustment file mixes class-level and "
                                     "per-attribute entries");
      }
      const auto a = static_cast<std::size_t>(*entry.attribute);
      if (a < by_attr.size()) by_attr[a] = &entry;
    }
    for (std::size_t a = 0; a < by_attr.size(); ++a) {
      if (!by_attr[a]) {
        throw drops::ValidationError("adjustment file has no entry for attribute " +
                                     std::to_string(a));
      }
    }
  }

  const bool averaged = file.scorer_mode == drops::ScorerMode::average;
  std::vector<std::int32_t> labels(ds.num_samples());
  std::vector<drops::PosthocAdjustment> adjustments;
  std::vector<drops::AveragedScorer> scorers;
  for (const auto& entry : file.entries) {
    if (averaged) {
      scorers.push_back(entry.averaged_scorer());
    } else {
      adjustments.push_back(entry.adjustment(file.delta_train, file.divergence));
    }
  }
  for (std::size_t i = 0; i < ds.num_samples(); ++i) {
    std::size_t which = 0;
    if (per_attribute) {
      const auto a = static_cast<std::size_t>(ds.attribute(i));
      which = static_cast<std::size_t>(by_attr[a] - &file.entries.front());
    }
    labels[i] = static_cast<std::int32_t>(
        averaged
            ? drops::averaged_predict(ds.row(i), ds.input_kind(), scorers[which])
            : drops::predict(ds.row(i), adjustments[which], ds.input_kind()));
  }
  drops::write_labels_csv(out, labels);
  std::cout << "wrote " << labels.size() << " labels to " << out << "\n";
  return 0;
}

int run_synth(std::size_t classes, std::size_t n, double rho, double sigma,
              double separation, std::uint64_t seed, const std::string& out) {
  const auto priors = drops::GaussianMixtureSpec::geometric_priors(classes, rho);
  const auto spec = drops::GaussianMixtureSpec::simplex_corners(
      classes, separation, sigma, priors, seed);
  const auto ds = drops::make_prediction_dataset(spec, n);
  drops::write_predictions(out, ds);
  std::cout << "wrote " << n << " samples (" << classes << " classes, rho=" << rho
            << ") to " << out << "\n";
  return 0;
}

int run_oracle(const SharedFlags& flags, const std::string& acc_text,
               const std::string& grid_text, double step,
               const std::string& adjustment, const std::string& out) {
  std::vector<double> acc_values;
  if (!acc_text.empty()) {
    std::size_t start = 0;
    while (start <= acc_text.size()) {
      const std::size_t comma = acc_text.find(',', start);
      const std::string token = acc_text.substr(
          start, comma == std::string::npos ? std::string::npos : comma - start);
      try {
        acc_values.push_back(std::stod(token));
      } catch (const std::exception&) {
        throw drops::ValidationError("--acc: bad entry '" + token + "'");
      }
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  } else {
    const auto ds = load_dataset(flags);
    const auto adj = load_adjustment_for(adjustment, ds);
    acc_values = accuracies_of(ds, adj).values();
  }
  const drops::AccuracyVector acc{std::vector<double>(acc_values)};
  const auto spec = resolve_spec(flags, acc.size());

  std::ostringstream csv;
  csv << "delta,oracle_value\n";
  char buf[32];
  for (double d : parse_delta_grid(grid_text)) {
    const double value = drops::delta_worst_grid_oracle(acc, {spec, d}, step);
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    csv << d << ',' << std::string_view(buf, res.ptr - buf) << '\n';
  }
  if (out.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream f(out, std::ios::binary | std::ios::trunc);
    if (!f) throw drops::ValidationError("cannot open '" + out + "' for writing");
    f << csv.str();
    std::cout << "wrote oracle values to " << out << "\n";
  }
  return 0;
}

int run_sweep_w(const SharedFlags& flags, double delta, double grid_lo,
                double grid_hi, std::size_t grid_count, const std::string& out) {
  const auto ds = load_dataset(flags);
  const std::size_t cells =
      ds.has_attributes() ? ds.num_attribute_values() * ds.num_classes()
                          : ds.num_classes();
  const drops::DeltaBall ball{
      {drops::divergence_from_string(flags.divergence),
       resolve_target(flags.target, cells)},
      delta};
  const auto grid = drops::log_spaced_grid(grid_lo, grid_hi, grid_count);
  const drops::ScalarSweepResult result = drops::binary_scalar_sweep(ds, ball, grid);

  if (!out.empty()) {
    std::ostringstream csv;
    csv << "w,delta_worst\n";
    char buf[32];
    for (const auto& [w, value] : result.curve) {
      auto r1 = std::to_chars(buf, buf + sizeof(buf), w);
      csv << std::string_view(buf, r1.ptr - buf) << ',';
      auto r2 = std::to_chars(buf, buf + sizeof(buf), value);
      csv << std::string_view(buf, r2.ptr - buf) << '\n';
    }
    std::ofstream f(out, std::ios::binary | std::ios::trunc);
    if (!f) throw drops::ValidationError("cannot open '" + out + "' for writing");
    f << csv.str();
  }
  json report;
  report["w"] = result.w;
  report["delta_worst"] = result.value;
  report["delta"] = delta;
  report["granularity"] = ds.has_attributes() ? "group" : "class";
  std::cout << report.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"drops: distributionally robust post-hoc scaling of classifier "
               "predictions"};
  app.require_subcommand(1);

  SharedFlags eval_flags, curve_flags, learn_flags, apply_flags, oracle_flags,
      sweep_flags;

  // eval
  auto* eval_cmd = app.add_subcommand(
      "eval", "per-class/group accuracies and a delta-worst value");
  add_shared(eval_cmd, eval_flags);
  double eval_delta = 1.0;
  std::string eval_adjustment, eval_out;
  eval_cmd->add_option("--delta", eval_delta, "ball radius")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  eval_cmd->add_option("--adjustment", eval_adjustment,
                       "adjustment JSON to apply before scoring");
  eval_cmd->add_option("--out", eval_out, "also write the JSON report here");

  // curve
  auto* curve_cmd =
      app.add_subcommand("curve", "delta-worst values over a grid of radii");
  add_shared(curve_cmd, curve_flags);
  std::string curve_grid = "0:2:0.05", curve_adjustment, curve_out = "curve.csv";
  bool curve_worst = false;
  curve_cmd->add_option("--delta-grid", curve_grid, "radius grid A:B:STEP")
      ->capture_default_str();
  curve_cmd->add_flag("--worst", curve_worst,
                      "append the exact worst class/group as a final row");
  curve_cmd->add_option("--adjustment", curve_adjustment,
                        "adjustment JSON to apply before scoring");
  curve_cmd->add_option("--out", curve_out, "output CSV")->capture_default_str();

  // learn
  auto* learn_cmd = app.add_subcommand(
      "learn", "learn post-hoc scaling adjustments on a validation file");
  add_shared(learn_cmd, learn_flags);
  double learn_delta = 1.0, learn_eta_lambda = 0.0, learn_eta_g = 0.0;
  double learn_lambda_cap = 0.0, learn_lambda_init = -1.0;
  int learn_iters = 0;
  std::string learn_loss = "zero_one", learn_g_update = "simplified";
  std::string learn_mode = "average", learn_group = "class_only";
  std::string learn_out = "adjustment.json", learn_trace_out;
  learn_cmd->add_option("--delta", learn_delta, "training ball radius")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  learn_cmd->add_option("--iters", learn_iters,
                        "iterations T (0: validation size, capped at 2000)")
      ->capture_default_str();
  learn_cmd->add_option("--eta-lambda", learn_eta_lambda,
                        "lambda step size (0: schedule default)");
  learn_cmd->add_option("--eta-g", learn_eta_g, "g step size (0: schedule default)");
  learn_cmd->add_option("--lambda-cap", learn_lambda_cap,
                        "clip range for lambda (0: schedule default)");
  learn_cmd->add_option("--lambda-init", learn_lambda_init,
                        "initial lambda (negative: default)");
  learn_cmd->add_option("--loss", learn_loss, "per-class loss")
      ->check(CLI::IsMember({"zero_one", "log_loss"}))
      ->capture_default_str();
  learn_cmd->add_option("--g-update", learn_g_update, "g update rule")
      ->check(CLI::IsMember({"simplified", "eg"}))
      ->capture_default_str();
  learn_cmd->add_option("--mode", learn_mode, "scorer selection")
      ->check(CLI::IsMember({"average", "last", "best_validation"}))
      ->capture_default_str();
  learn_cmd->add_option("--group", learn_group, "group handling")
      ->check(CLI::IsMember({"class_only", "per_attribute"}))
      ->capture_default_str();
  learn_cmd->add_option("--out", learn_out, "adjustment JSON output")
      ->capture_default_str();
  learn_cmd->add_option("--trace-out", learn_trace_out,
                        "trace CSV output (default: OUT.trace.csv)");

  // apply
  auto* apply_cmd =
      app.add_subcommand("apply", "write post-shifted predicted labels");
  add_shared(apply_cmd, apply_flags);
  std::string apply_adjustment, apply_out = "labels.csv";
  apply_cmd->add_option("--adjustment", apply_adjustment, "adjustment JSON")
      ->required();
  apply_cmd->add_option("--out", apply_out, "labels CSV output")
      ->capture_default_str();

  // synth
  auto* synth_cmd = app.add_subcommand(
      "synth", "generate a Gaussian-mixture prediction file with exact "
               "conditional probabilities");
  std::size_t synth_classes = 10, synth_n = 10000;
  double synth_rho = 100.0, synth_sigma = 1.0, synth_sep = 2.0;
  std::uint64_t synth_seed = 0;
  std::string synth_out = "synth.csv";
  synth_cmd->add_option("--classes", synth_classes, "number of classes")
      ->check(CLI::Range(std::size_t{2}, std::size_t{1000}))
      ->capture_default_str();
  synth_cmd->add_option("--n", synth_n, "number of samples")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  synth_cmd->add_option("--rho", synth_rho, "imbalance ratio max/min prior")
      ->check(CLI::Range(1.0, 1e9))
      ->capture_default_str();
  synth_cmd->add_option("--sigma", synth_sigma, "component standard deviation")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  synth_cmd->add_option("--sep", synth_sep, "mean separation")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  synth_cmd->add_option("--seed", synth_seed, "random seed")->capture_default_str();
  synth_cmd->add_option("--out", synth_out, "output CSV")->capture_default_str();

  // oracle
  auto* oracle_cmd = app.add_subcommand(
      "oracle", "simplex-grid oracle values for cross-checking delta-worst");
  add_shared(oracle_cmd, oracle_flags, /*preds_required=*/false);
  std::string oracle_acc, oracle_grid = "0.05:2:0.05", oracle_adjustment, oracle_out;
  double oracle_step = 1e-3;
  oracle_cmd->add_option("--acc", oracle_acc,
                         "comma-separated accuracies (instead of --preds)");
  oracle_cmd
      ->add_option("--delta-grid", oracle_grid,
                   "radius grid A:B:STEP (delta 0 usually has no feasible "
                   "lattice point)")
      ->capture_default_str();
  oracle_cmd->add_option("--step", oracle_step, "lattice step")
      ->check(CLI::Range(1e-4, 1e-1))
      ->capture_default_str();
  oracle_cmd->add_option("--adjustment", oracle_adjustment,
                         "adjustment JSON to apply before scoring");
  oracle_cmd->add_option("--out", oracle_out, "output CSV (default: stdout)");

  // sweep-w
  auto* sweep_cmd = app.add_subcommand(
      "sweep-w", "binary single-scalar sweep: rescale class 1 by w");
  add_shared(sweep_cmd, sweep_flags);
  double sweep_delta = 1.0, sweep_lo = 1e-2, sweep_hi = 1e2;
  std::size_t sweep_count = 81;
  std::string sweep_out;
  sweep_cmd->add_option("--delta", sweep_delta, "ball radius")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  sweep_cmd->add_option("--grid-lo", sweep_lo, "smallest candidate w")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sweep_cmd->add_option("--grid-hi", sweep_hi, "largest candidate w")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sweep_cmd->add_option("--grid-count", sweep_count, "number of log-spaced candidates")
      ->check(CLI::Range(std::size_t{1}, std::size_t{100000}))
      ->capture_default_str();
  sweep_cmd->add_option("--out", sweep_out, "candidate curve CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  if (*oracle_cmd && oracle_acc.empty() && oracle_flags.preds.empty()) {
    std::cerr << "error: oracle needs --preds or --acc\n";
    return 1;
  }

  try {
    if (*eval_cmd) return run_eval(eval_flags, eval_delta, eval_adjustment, eval_out);
    if (*curve_cmd) {
      return run_curve(curve_flags, curve_grid, curve_worst, curve_adjustment,
                       curve_out);
    }
    if (*learn_cmd) {
      return run_learn(learn_flags, learn_delta, learn_iters, learn_eta_lambda,
                       learn_eta_g, learn_lambda_cap, learn_lambda_init, learn_loss,
                       learn_g_update, learn_mode, learn_group, learn_out,
                       learn_trace_out);
    }
    if (*apply_cmd) return run_apply(apply_flags, apply_adjustment, apply_out);
    if (*synth_cmd) {
      return run_synth(synth_classes, synth_n, synth_rho, synth_sigma, synth_sep,
                       synth_seed, synth_out);
    }
    if (*oracle_cmd) {
      return run_oracle(oracle_flags, oracle_acc, oracle_grid, oracle_step,
                        oracle_adjustment, oracle_out);
    }
    if (*sweep_cmd) {
      return run_sweep_w(sweep_flags, sweep_delta, sweep_lo, sweep_hi, sweep_count,
                         sweep_out);
    }
  } catch (const drops::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const drops::NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 1;
}
