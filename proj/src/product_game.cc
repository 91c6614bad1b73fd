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

#include "product_game.h"

#include <algorithm>
#include <vector>

#include "pkex/error.h"

namespace pkex::internal {

namespace {

void CheckFactors(std::span<const Eigen::ArrayXd> factors,
                  const Eigen::ArrayXd& weights, const ShapleyWeights& mu) {
  if (factors.empty() || mu.players() != factors.size()) {
    throw Error(ErrorCode::kInvalidInput,
                "product game needs one factor array per player");
  }
  for (const auto& f : factors) {
    if (f.size() != weights.size()) {
      throw Error(ErrorCode::kInvalidInput, "factor length mismatch");
    }
  }
}

// Leave-one-out ESPs recomputed for every j; O(d^3) per element.
Eigen::VectorXd PerFeatureRecursion(std::span<const Eigen::ArrayXd> factors,
                                    const Eigen::ArrayXd& weights,
                                    EspBackend backend,
                                    const ShapleyWeights& mu) {
  const std::size_t d = factors.size();
  Eigen::VectorXd phi(static_cast<Eigen::Index>(d));
  std::vector<Eigen::ArrayXd> others(d - 1);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t k = 0, slot = 0; k < d; ++k) {
      if (k != j) others[slot++] = factors[k];
    }
    const EspTable table = ComputeEsp(backend, others, d - 1, weights.size());
    const Eigen::ArrayXd psi = WeightedEspSum(table, mu);
    phi[static_cast<Eigen::Index>(j)] =
        (weights * (factors[j] - 1.0) * psi).sum();
  }
  return phi;
}

// psi_j = sum_q mu(q) e_q(Z_{-j}) from prefix and suffix sweeps.
//
// prefix[j][a] = e_a(z_0..z_{j-1}) / C(j, a), grown by the characteristic
// polynomial update written for binomially normalized coefficients.
// suffix g_j(a) = C(j, a) sum_b mu(a + b) e_b(z_{j+1}..z_{d-1}), swept
// backwards from g_{d-1}(a) = C(d-1, a) mu(a) = 1/d. Then
//   psi_j = sum_a prefix[j][a] g_j(a).
// Both updates are convex combinations, so nothing cancels or overflows for
// kernel values in [0, 1]. O(d^2) per element.
Eigen::VectorXd PrefixSuffixSweep(std::span<const Eigen::ArrayXd> factors,
                                  const Eigen::ArrayXd& weights) {
  const std::size_t d = factors.size();
  const Eigen::Index length = weights.size();
  std::vector<double> inv(d + 1, 0.0);
  for (std::size_t i = 1; i <= d; ++i) inv[i] = 1.0 / static_cast<double>(i);

  // Row j of the triangle starts at j (j + 1) / 2.
  std::vector<double> prefix(d * (d + 1) / 2);
  std::vector<double> g(d);
  std::vector<double> z(d);
  Eigen::VectorXd phi = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));

  for (Eigen::Index k = 0; k < length; ++k) {
    const double w = weights[k];
    if (w == 0.0) continue;
    for (std::size_t j = 0; j < d; ++j) z[j] = factors[j][k];

    prefix[0] = 1.0;
    for (std::size_t j = 0; j + 1 < d; ++j) {
      const double* cur = &prefix[j * (j + 1) / 2];
      double* next = &prefix[(j + 1) * (j + 2) / 2];
      const double zj = z[j];
      const double r = inv[j + 1];
      next[0] = cur[0];
      for (std::size_t a = 1; a <= j; ++a) {
        next[a] = (static_cast<double>(j + 1 - a) * cur[a] +
                   static_cast<double>(a) * zj * cur[a - 1]) * r;
      }
      next[j + 1] = zj * cur[j];
    }

    std::fill(g.begin(), g.end(), inv[d]);
    for (std::size_t j = d; j-- > 0;) {
      const double* row = &prefix[j * (j + 1) / 2];
      double psi = 0.0;
      for (std::size_t a = 0; a <= j; ++a) psi += row[a] * g[a];
      phi[static_cast<Eigen::Index>(j)] += w * (z[j] - 1.0) * psi;
      if (j == 0) break;
      const double zj = z[j];
      const double r = inv[j];
      for (std::size_t a = 0; a < j; ++a) {
        g[a] = (static_cast<double>(j - a) * g[a] +
                static_cast<double>(a + 1) * zj * g[a + 1]) * r;
      }
    }
  }
  return phi;
}

}  // namespace

Eigen::VectorXd ProductGameShapley(std::span<const Eigen::ArrayXd> factors,
                                   const Eigen::ArrayXd& weights,
                                   EspBackend backend,
                                   const ShapleyWeights& mu) {
  CheckFactors(factors, weights, mu);
  if (backend == EspBackend::kNewton) {
    return PerFeatureRecursion(factors, weights, backend, mu);
  }
  return PrefixSuffixSweep(factors, weights);
}

}  // namespace pkex::internal
