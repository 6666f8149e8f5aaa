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

#include <string>
#include <vector>

#include "drops/simplex.hpp"

namespace drops {

enum class Divergence { kl, reverse_kl };

std::string to_string(Divergence d);
Divergence divergence_from_string(const std::string& name);

// A divergence D(g, r) on the simplex together with its reference point r.
// The ambiguity set used throughout is {g : D(g, r) <= delta}.
struct DivergenceSpec {
  Divergence kind;
  SimplexWeights target;

  static DivergenceSpec kl(SimplexWeights target) {
    return {Divergence::kl, std::move(target)};
  }
  static DivergenceSpec reverse_kl(SimplexWeights target) {
    return {Divergence::reverse_kl, std::move(target)};
  }
  static DivergenceSpec kl_uniform(std::size_t m) {
    return {Divergence::kl, SimplexWeights::uniform(m)};
  }
  static DivergenceSpec reverse_kl_uniform(std::size_t m) {
    return {Divergence::reverse_kl, SimplexWeights::uniform(m)};
  }
};

/**
 * Divergence between g and the spec's target r.
 *
 * kl:         sum_i g_i log(g_i / r_i), with 0 log 0 := 0. Returns +infinity
 *             when some g_i > 0 has r_i = 0.
 * reverse_kl: sum_i r_i log(r_i / g_i), i.e. kl with swapped arguments.
 *             Returns +infinity when some g_i = 0 has r_i > 0.
 *
 * The result is >= 0 and equals 0 exactly when g == r. Infinity is the
 * plain IEEE +inf so callers can branch on std::isinf.
 */
double divergence_value(const DivergenceSpec& spec, const SimplexWeights& g);

/**
 * Gradient of divergence_value with respect to g on the interior of the
 * simplex.
 *
 * kl:         d/dg_i = log(g_i / r_i) + 1
 * reverse_kl: d/dg_i = -r_i / g_i
 *
 * Every g_i must be strictly positive; callers that walk the boundary are
 * expected to floor g first. Throws std::invalid_argument otherwise.
 */
std::vector<double> divergence_gradient(const DivergenceSpec& spec,
                                        const SimplexWeights& g);

}  // namespace drops
