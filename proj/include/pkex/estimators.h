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

#ifndef PKEX_ESTIMATORS_H_
#define PKEX_ESTIMATORS_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pkex/attribution.h"
#include "pkex/oracle.h"

namespace pkex {

// Proper coalitions (neither empty nor full) with regression weights.
struct CoalitionSample {
  std::size_t players = 0;
  std::vector<CoalitionMask> masks;
  std::vector<double> weights;
};

inline constexpr std::size_t kMaxRegressionPlayers = 64;

// `count` masks: count / 2 draws plus their complements. Sizes follow the
// Shapley kernel, P(s) proportional to (d-1) / (s (d-s)); members are
// uniform given the size. Since the draws already follow the kernel, each
// mask gets weight 1 / count.
CoalitionSample SampleCoalitionsPaired(std::size_t players, std::size_t count,
                                       std::uint64_t seed);

// All 2^d - 2 proper coalitions with their Shapley kernel weights
// (d-1) / (C(d,s) s (d-s)).
CoalitionSample EnumerateCoalitions(std::size_t players);

// Weighted least squares v(S) ~ v({}) + sum_{j in S} phi_j subject to
// sum(phi) = v(all) - v({}). The constraint is eliminated by solving for the
// first d-1 values. Repeated masks are merged by adding their weights.
Attribution KernelShapRegression(const ValueFunctionHandle& v,
                                 const CoalitionSample& coalitions);

struct RelativeDeviation {
  double value = 0.0;
  // Features left out because their exact value is zero.
  std::size_t skipped = 0;
};

// sum_j |phi_j - phi_hat_j| / |phi_j|
RelativeDeviation ComputeRelativeDeviation(const Attribution& exact,
                                           const Attribution& approx);

}  // namespace pkex

#endif  // PKEX_ESTIMATORS_H_
