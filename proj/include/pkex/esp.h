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

#ifndef PKEX_ESP_H_
#define PKEX_ESP_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace pkex {

// Elementary symmetric polynomials of a collection of same-length arrays,
// evaluated elementwise: orders[q][i] = sum over q-subsets of the product of
// the i-th entries. Matrices are passed flattened.
struct EspTable {
  std::vector<Eigen::ArrayXd> orders;

  std::size_t max_order() const { return orders.empty() ? 0 : orders.size() - 1; }
};

// mu[q] = q! (d - q - 1)! / d!, the weight of a size-q coalition in the
// Shapley average of a d-player game.
struct ShapleyWeights {
  std::vector<double> mu;

  std::size_t players() const { return mu.size(); }
};

enum class EspBackend { kNewton, kStable };

std::string_view BackendName(EspBackend backend);

// Uses the multiplicative recurrence mu[q+1] = mu[q] (q+1) / (d-q-1).
ShapleyWeights ComputeShapleyWeights(std::size_t players);

// Newton's identities on elementwise power sums. Fast but loses accuracy as
// the collection grows. `length` is required only when `values` is empty.
EspTable EspNewton(std::span<const Eigen::ArrayXd> values,
                   std::size_t max_order,
                   std::optional<Eigen::Index> length = std::nullopt);

// Characteristic-polynomial coefficients of prod_i (t - z_i / s), built one
// factor at a time, with s the largest absolute entry over the collection
// (1 if everything is zero). Uses only multiply and subtract.
EspTable EspStable(std::span<const Eigen::ArrayXd> values,
                   std::size_t max_order,
                   std::optional<Eigen::Index> length = std::nullopt);

EspTable ComputeEsp(EspBackend backend, std::span<const Eigen::ArrayXd> values,
                    std::size_t max_order,
                    std::optional<Eigen::Index> length = std::nullopt);

// psi = sum_q mu[q] * e_q. Needs orders 0..d-1 for d = weights.players().
Eigen::ArrayXd WeightedEspSum(const EspTable& table,
                              const ShapleyWeights& weights);

}  // namespace pkex

#endif  // PKEX_ESP_H_
