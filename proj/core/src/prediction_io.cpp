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

#include "drops/prediction_io.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "drops/errors.hpp"

namespace drops {

namespace {

using nlohmann::json;

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view token, std::size_t row, const char* what) {
  double value{};
  const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
  if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) {
    throw ValidationError("row " + std::to_string(row) + ": bad " + what + " '" +
                          std::string(token) + "'");
  }
  return value;
}

long parse_int(std::string_view token, std::size_t row, const char* what) {
  long value{};
  const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
  if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) {
    throw ValidationError("row " + std::to_string(row) + ": bad " + what + " '" +
                          std::string(token) + "'");
  }
  return value;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

void strip_trailing_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

// Write through a temp file and rename so readers never observe partial
// output.
void atomic_write(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw ValidationError("cannot open '" + tmp.string() + "' for writing");
    }
    out << content;
    if (!out.flush()) {
      throw ValidationError("write to '" + tmp.string() + "' failed");
    }
  }
  std::filesystem::rename(tmp, path);
}

json simplex_to_json(const SimplexWeights& w) { return json(w.values()); }

SimplexWeights simplex_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.empty()) {
    throw ValidationError(std::string("adjustment file: ") + what + " must be a nonempty array");
  }
  return SimplexWeights(j.get<std::vector<double>>());
}

std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

PredictionDataset load_predictions(const std::filesystem::path& path,
                                   InputKind declared_kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ValidationError("cannot open prediction file '" + path.string() + "'");
  }

  std::string line;
  if (!std::getline(in, line)) {
    throw ValidationError("prediction file '" + path.string() + "' is empty");
  }
  strip_trailing_cr(line);
  const auto header = split_csv(line);

  const char score_prefix = declared_kind == InputKind::probabilities ? 'p' : 'l';
  std::size_t m = 0;
  while (m < header.size() && !header[m].empty() && header[m].front() == score_prefix) {
    const std::string expected = std::string(1, score_prefix) + std::to_string(m);
    if (header[m] != expected) break;
    ++m;
  }
  if (m < 2) {
    throw ValidationError("malformed header: expected columns " +
                          std::string(1, score_prefix) + "0.." +
                          std::string(1, score_prefix) + "{m-1},label[,attr], got '" +
                          line + "'");
  }
  if (m >= header.size() || header[m] != "label") {
    throw ValidationError("malformed header: missing 'label' column after scores");
  }
  bool has_attr = false;
  if (header.size() == m + 2) {
    if (header[m + 1] != "attr") {
      throw ValidationError("malformed header: trailing column must be 'attr'");
    }
    has_attr = true;
  } else if (header.size() != m + 1) {
    throw ValidationError("malformed header: unexpected trailing columns");
  }

  std::vector<double> scores;
  std::vector<std::int32_t> labels;
  std::vector<std::int32_t> attributes;
  const std::size_t columns = header.size();
  std::size_t row = 1;  // header was row 1
  while (std::getline(in, line)) {
    ++row;
    strip_trailing_cr(line);
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != columns) {
      throw ValidationError("row " + std::to_string(row) + ": expected " +
                            std::to_string(columns) + " columns, got " +
                            std::to_string(fields.size()));
    }
    for (std::size_t i = 0; i < m; ++i) {
      scores.push_back(parse_double(fields[i], row, "score"));
    }
    labels.push_back(static_cast<std::int32_t>(parse_int(fields[m], row, "label")));
    if (has_attr) {
      attributes.push_back(
          static_cast<std::int32_t>(parse_int(fields[m + 1], row, "attribute")));
    }
  }
  if (labels.empty()) {
    throw ValidationError("prediction file '" + path.string() + "' has no data rows");
  }

  try {
    return PredictionDataset::create(
        m, std::move(scores), std::move(labels),
        has_attr ? std::optional(std::move(attributes)) : std::nullopt,
        declared_kind);
  } catch (const ValidationError& e) {
    // Re-address dataset-level messages ("sample i") as file rows.
    const std::string msg = e.what();
    const std::string needle = "sample ";
    const std::size_t pos = msg.find(needle);
    if (pos != std::string::npos) {
      std::size_t idx = 0;
      const char* begin = msg.data() + pos + needle.size();
      std::from_chars(begin, msg.data() + msg.size(), idx);
      throw ValidationError("row " + std::to_string(idx + 2) + ": " + msg);
    }
    throw;
  }
}

void write_predictions(const std::filesystem::path& path,
                       const PredictionDataset& dataset) {
  std::ostringstream out;
  const char prefix = dataset.input_kind() == InputKind::probabilities ? 'p' : 'l';
  for (std::size_t i = 0; i < dataset.num_classes(); ++i) {
    out << prefix << i << ',';
  }
  out << "label";
  if (dataset.has_attributes()) out << ",attr";
  out << '\n';
  for (std::size_t i = 0; i < dataset.num_samples(); ++i) {
    for (double v : dataset.row(i)) out << format_double(v) << ',';
    out << dataset.label(i);
    if (dataset.has_attributes()) out << ',' << dataset.attribute(i);
    out << '\n';
  }
  atomic_write(path, out.str());
}

PosthocAdjustment AdjustmentFile::Entry::adjustment(double delta_train,
                                                    Divergence kind) const {
  return PosthocAdjustment::from_weights(g, priors, delta_train, kind);
}

AveragedScorer AdjustmentFile::Entry::averaged_scorer() const {
  if (g_trace.empty()) {
    throw ValidationError("adjustment file: averaged scorer requires a g_trace");
  }
  return AveragedScorer{g_trace, priors, ScorerMode::average};
}

AdjustmentFile AdjustmentFile::from_learn_result(const LearnResult& result,
                                                 double delta_train,
                                                 Divergence kind,
                                                 ScorerMode mode) {
  AdjustmentFile file;
  file.divergence = kind;
  file.delta_train = delta_train;
  file.scorer_mode = mode;
  file.created = timestamp_utc();
  Entry entry{std::nullopt, result.adjustment.priors, result.adjustment.weights,
              result.adjustment.multipliers, {}};
  if (mode == ScorerMode::average) entry.g_trace = result.scorer.g_trace;
  file.entries.push_back(std::move(entry));
  return file;
}

AdjustmentFile AdjustmentFile::from_group_result(const GroupLearnResult& result,
                                                 double delta_train,
                                                 Divergence kind,
                                                 ScorerMode mode) {
  AdjustmentFile file;
  file.divergence = kind;
  file.delta_train = delta_train;
  file.scorer_mode = mode;
  file.created = timestamp_utc();
  for (std::size_t a = 0; a < result.results.size(); ++a) {
    const LearnResult& r = result.results[a];
    Entry entry{result.mode == GroupMode::per_attribute
                    ? std::optional(static_cast<std::int32_t>(a))
                    : std::nullopt,
                r.adjustment.priors, r.adjustment.weights,
                r.adjustment.multipliers, {}};
    if (mode == ScorerMode::average) entry.g_trace = r.scorer.g_trace;
    file.entries.push_back(std::move(entry));
  }
  return file;
}

void write_adjustment(const std::filesystem::path& path, const AdjustmentFile& file) {
  json j;
  j["schema_version"] = file.schema_version;
  j["divergence"] = to_string(file.divergence);
  j["delta_train"] = file.delta_train;
  j["scorer_mode"] = to_string(file.scorer_mode);
  j["created"] = file.created;
  json entries = json::array();
  for (const auto& entry : file.entries) {
    json e;
    if (entry.attribute) {
      e["attribute"] = *entry.attribute;
    } else {
      e["attribute"] = nullptr;
    }
    e["priors"] = entry.priors.values();
    e["g"] = simplex_to_json(entry.g);
    e["multipliers"] = entry.multipliers;
    if (!entry.g_trace.empty()) {
      json trace = json::array();
      for (const auto& g : entry.g_trace) trace.push_back(simplex_to_json(g));
      e["g_trace"] = std::move(trace);
    }
    entries.push_back(std::move(e));
  }
  j["adjustments"] = std::move(entries);
  atomic_write(path, j.dump(2) + "\n");
}

AdjustmentFile read_adjustment(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ValidationError("cannot open adjustment file '" + path.string() + "'");
  }
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ValidationError("adjustment file '" + path.string() +
                          "' is not valid JSON: " + e.what());
  }
  try {
    AdjustmentFile file;
    file.schema_version = j.at("schema_version").get<int>();
    if (file.schema_version != 1) {
      throw ValidationError("unsupported adjustment schema version " +
                            std::to_string(file.schema_version));
    }
    file.divergence = divergence_from_string(j.at("divergence").get<std::string>());
    file.delta_train = j.at("delta_train").get<double>();
    file.scorer_mode = scorer_mode_from_string(j.at("scorer_mode").get<std::string>());
    file.created = j.value("created", "");
    for (const auto& e : j.at("adjustments")) {
      AdjustmentFile::Entry entry{
          std::nullopt, ClassPriors(e.at("priors").get<std::vector<double>>()),
          simplex_from_json(e.at("g"), "g"),
          e.at("multipliers").get<std::vector<double>>(),
          {}};
      if (e.contains("attribute") && !e.at("attribute").is_null()) {
        entry.attribute = e.at("attribute").get<std::int32_t>();
      }
      if (e.contains("g_trace")) {
        for (const auto& g : e.at("g_trace")) {
          entry.g_trace.push_back(simplex_from_json(g, "g_trace entry"));
        }
      }
      if (entry.multipliers.size() != entry.g.size()) {
        throw ValidationError("adjustment file: multipliers/g dimension mismatch");
      }
      for (std::size_t i = 0; i < entry.multipliers.size(); ++i) {
        const double expected = entry.g[i] / entry.priors[i];
        if (std::abs(entry.multipliers[i] - expected) >
            1e-12 * std::max(1.0, std::abs(expected))) {
          throw ValidationError(
              "adjustment file: multiplier " + std::to_string(i) +
              " is inconsistent with g/priors");
        }
      }
      file.entries.push_back(std::move(entry));
    }
    if (file.entries.empty()) {
      throw ValidationError("adjustment file: no adjustment entries");
    }
    return file;
  } catch (const json::exception& e) {
    throw ValidationError("adjustment file '" + path.string() +
                          "' is malformed: " + e.what());
  } catch (const std::invalid_argument& e) {
    throw ValidationError("adjustment file '" + path.string() +
                          "' is malformed: " + e.what());
  }
}

void write_curve_csv(const std::filesystem::path& path, const RobustCurve& curve) {
  std::ostringstream out;
  const std::size_t m = curve.points.empty() ? 0 : curve.points.front().minimizer.size();
  out << "delta,value";
  for (std::size_t i = 0; i < m; ++i) out << ",g_" << i;
  out << '\n';
  for (const auto& point : curve.points) {
    out << format_double(point.delta) << ',' << format_double(point.value);
    for (double v : point.minimizer.values()) out << ',' << format_double(v);
    out << '\n';
  }
  atomic_write(path, out.str());
}

void write_trace_csv(const std::filesystem::path& path, const SaddleTrace& trace) {
  std::ostringstream out;
  const std::size_t m = trace.rows.empty() ? 0 : trace.rows.front().g.size();
  out << "t,lambda,lagrangian";
  for (std::size_t i = 0; i < m; ++i) out << ",loss_" << i;
  for (std::size_t i = 0; i < m; ++i) out << ",g_" << i;
  out << '\n';
  for (const auto& row : trace.rows) {
    out << row.t << ',' << format_double(row.lambda) << ','
        << format_double(row.lagrangian);
    for (double v : row.per_class_loss) out << ',' << format_double(v);
    for (double v : row.g.values()) out << ',' << format_double(v);
    out << '\n';
  }
  atomic_write(path, out.str());
}

void write_labels_csv(const std::filesystem::path& path,
                      const std::vector<std::int32_t>& labels) {
  std::ostringstream out;
  out << "label\n";
  for (std::int32_t y : labels) out << y << '\n';
  atomic_write(path, out.str());
}

SimplexWeights load_target(const std::filesystem::path& path,
                           std::size_t expected_size) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ValidationError("cannot open target file '" + path.string() + "'");
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw ValidationError("target file '" + path.string() + "' is empty");
  }
  strip_trailing_cr(line);
  const auto fields = split_csv(line);
  std::vector<double> values;
  values.reserve(fields.size());
  for (const auto& f : fields) {
    values.push_back(parse_double(f, 1, "target weight"));
  }
  if (values.size() != expected_size) {
    throw ValidationError("target file has " + std::to_string(values.size()) +
                          " entries, expected " + std::to_string(expected_size));
  }
  try {
    return SimplexWeights(std::move(values));
  } catch (const std::invalid_argument& e) {
    throw ValidationError(std::string("target file: ") + e.what());
  }
}

}  // namespace drops
