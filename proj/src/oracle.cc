/*
 * Copyright 2026 The pkex Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "pkex/oracle.h"

#include <bit>
#include <string>
#include <vector>

#include "pkex/error.h"
#include "pkex/esp.h"

namespace pkex {

FeatureSet MaskToSet(CoalitionMask mask, std::size_t players) {
  FeatureSet set;
  for (std::size_t j = 0; j < players; ++j) {
    if (mask >> j & 1U) set.push_back(j);
  }
  return set;
}

Attribution ShapleyBruteForce(const ValueFunctionHandle& v) {
  const std::size_t d = v.players;
  if (d == 0) {
    throw Error(ErrorCode::kInvalidInput, "game needs at least one player");
  }
  if (d > kBruteForceMaxPlayers) {
    throw Error(ErrorCode::kResourceLimit,
                "brute-force Shapley values are limited to " +
                    std::to_string(kBruteForceMaxPlayers) + " features, got " +
                    std::to_string(d));
  }
  const CoalitionMask count = CoalitionMask{1} << d;
  std::vector<double> values(count);
  for (CoalitionMask s = 0; s < count; ++s) values[s] = v.eval(s);

  const ShapleyWeights w = ComputeShapleyWeights(d);
  Attribution out;
  out.phi = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
  for (std::size_t j = 0; j < d; ++j) {
    const CoalitionMask bit = CoalitionMask{1} << j;
    double phi = 0.0;
    for (CoalitionMask s = 0; s < count; ++s) {
      if (s & bit) continue;
      phi += w.mu[std::popcount(s)] * (values[s | bit] - values[s]);
    }
    out.phi[static_cast<Eigen::Index>(j)] = phi;
  }
  out.v_full = values[count - 1];
  out.v_empty = values[0];
  out.method = AttributionMethod::kOracle;
  return out;
}

}  // namespace pkex
