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

#ifndef PKEX_HSIC_H_
#define PKEX_HSIC_H_

#include <cstddef>
#include <cstdint>
#include <optional>

#include <Eigen/Dense>

#include "pkex/attribution.h"
#include "pkex/kernels.h"

namespace pkex {

// Features X with a product kernel, plus the Gram matrix L of whatever X is
// tested against (a target vector or a second multivariate sample).
struct HsicInput {
  FeatureMatrix x;
  ProductKernelSpec kernel_x;
  Eigen::MatrixXd target_gram;

  void Validate() const;
};

enum class TargetKernel { kRbf, kCategorical };

// Pairwise kernel matrix over the rows of `y` (n x p). The RBF variant uses
// per-column median-heuristic bandwidths; the categorical one is 1 where the
// rows are identical and 0 elsewhere.
Eigen::MatrixXd TargetGram(const Eigen::MatrixXd& y, TargetKernel kind,
                           std::uint64_t seed = 0);

// tr(K H L H) / (n - 1)^2 with H = I - 11^T / n.
double Hsic(const HsicInput& input);

// tr(H L H K_S) / (n - 1)^2; K_{} = 11^T so the empty set scores 0.
double HsicValueFunction(const HsicInput& input, const FeatureSet& subset);

struct HsicOptions {
  ExplainOptions explain;
  // The per-feature Gram path holds O(n^2 d) numbers.
  std::size_t max_features = 256;
};

// Exact Shapley values of HsicValueFunction; v_full is the statistic.
Attribution ExplainHsic(const HsicInput& input, const HsicOptions& options = {});

enum class BivariateSide { kBoth, kX, kZ };

struct BivariateAttribution {
  std::optional<Attribution> x;
  std::optional<Attribution> z;
};

// Two games over a paired sample (x_i, z_i): the features of X with the
// product Gram of Z held fixed, and the features of Z with that of X fixed.
// Both add up to the same HSIC(X, Z).
BivariateAttribution ExplainHsicBivariate(const FeatureMatrix& x,
                                          const FeatureMatrix& z,
                                          const ProductKernelSpec& kernel_x,
                                          const ProductKernelSpec& kernel_z,
                                          BivariateSide side = BivariateSide::kBoth,
                                          const HsicOptions& options = {});

}  // namespace pkex

#endif  // PKEX_HSIC_H_
