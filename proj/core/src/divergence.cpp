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

#include "drops/divergence.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace drops {

namespace {

void check_dimensions(const DivergenceSpec& spec, const SimplexWeights& g) {
  if (g.size() != spec.target.size()) {
    throw std::invalid_argument("divergence: dimension mismatch between g and target");
  }
  if (g.size() < 2) {
    throw std::invalid_argument("divergence: need at least two classes");
  }
}

}  // namespace

std::string to_string(Divergence d) {
  return d == Divergence::kl ? "kl" : "rkl";
}

Divergence divergence_from_string(const std::string& name) {
  if (name == "kl") return Divergence::kl;
  if (name == "rkl" || name == "reverse_kl") return Divergence::reverse_kl;
  throw std::invalid_argument("unknown divergence '" + name + "' (expected kl|rkl)");
}

double divergence_value(const DivergenceSpec& spec, const SimplexWeights& g) {
  check_dimensions(spec, g);
  const auto& r = spec.target;
  double sum = 0.0;
  if (spec.kind == Divergence::kl) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (g[i] == 0.0) continue;  // 0 log 0 := 0
      if (r[i] == 0.0) return std::numeric_limits<double>::infinity();
      sum += g[i] * std::log(g[i] / r[i]);
    }
  } else {
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (r[i] == 0.0) continue;
      if (g[i] == 0.0) return std::numeric_limits<double>::infinity();
      sum += r[i] * std::log(r[i] / g[i]);
    }
  }
  // Clamp the tiny negative residue left by cancellation near g == r.
  return sum < 0.0 ? 0.0 : sum;
}

std::vector<double> divergence_gradient(const DivergenceSpec& spec,
                                        const SimplexWeights& g) {
  check_dimensions(spec, g);
  if (!g.full_support()) {
    throw std::invalid_argument(
        "divergence_gradient: undefined at the simplex boundary, floor g first");
  }
  const auto& r = spec.target;
  std::vector<double> grad(g.size());
  if (spec.kind == Divergence::kl) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (r[i] == 0.0) {
        throw std::invalid_argument("divergence_gradient: kl target must have full support");
      }
      grad[i] = std::log(g[i] / r[i]) + 1.0;
    }
  } else {
    for (std::size_t i = 0; i < g.size(); ++i) {
      grad[i] = -r[i] / g[i];
    }
  }
  return grad;
}

}  // namespace drops
