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

#ifndef PKEX_SRC_PRODUCT_GAME_H_
#define PKEX_SRC_PRODUCT_GAME_H_

#include <span>

#include <Eigen/Dense>

#include "pkex/esp.h"

namespace pkex::internal {

// Shapley values of the game v(S) = sum_b w[b] prod_{j in S} factors[j][b].
// The marginal contribution of j factors out as (factors[j] - 1) times the
// product over S, so
//   phi_j = sum_b w[b] (factors[j][b] - 1) sum_q mu(q) e_q(factors without j)[b].
// Every attribution in the library (model, MMD, HSIC) is a weighted sum of
// such products over rows or sample pairs.
Eigen::VectorXd ProductGameShapley(std::span<const Eigen::ArrayXd> factors,
                                   const Eigen::ArrayXd& weights,
                                   EspBackend backend,
                                   const ShapleyWeights& mu);

}  // namespace pkex::internal

#endif  // PKEX_SRC_PRODUCT_GAME_H_
