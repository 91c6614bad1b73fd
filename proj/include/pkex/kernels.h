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

#ifndef PKEX_KERNELS_H_
#define PKEX_KERNELS_H_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace pkex {

// n x d, one row per sample. Entries must be finite.
using FeatureMatrix = Eigen::MatrixXd;

// Zero-based feature indices.
using FeatureSet = std::vector<std::size_t>;

enum class BaseKernelKind { kRbf, kLaplacianRbf, kCauchy, kCategorical };

std::string_view KindName(BaseKernelKind kind);
BaseKernelKind KindFromName(std::string_view name);

// Univariate similarity. `bandwidth` is ignored for categorical kernels.
struct BaseKernelSpec {
  BaseKernelKind kind = BaseKernelKind::kRbf;
  double bandwidth = 1.0;

  void Validate() const;
  bool operator==(const BaseKernelSpec&) const = default;
};

// k(x, x') = prod_j k_j(x_j, x'_j); the product over an empty subset is 1.
struct ProductKernelSpec {
  std::vector<BaseKernelSpec> per_feature;

  std::size_t dim() const { return per_feature.size(); }
  void Validate() const;
  bool operator==(const ProductKernelSpec&) const = default;

  // Same kind on every feature with the given per-feature bandwidths.
  static ProductKernelSpec Uniform(BaseKernelKind kind,
                                   const Eigen::VectorXd& bandwidths);
  static ProductKernelSpec Isotropic(BaseKernelKind kind, double bandwidth,
                                     std::size_t dim);
};

// Throws kInvalidInput when any entry is non-finite or the matrix is empty.
void ValidateFeatureMatrix(const FeatureMatrix& x, std::string_view what);

double EvalBase(const BaseKernelSpec& spec, double a, double b);

namespace internal {

// EvalBase without argument checks, for inner loops over validated data.
inline double EvalBaseUnchecked(const BaseKernelSpec& spec, double a,
                                double b) {
  const double delta = a - b;
  switch (spec.kind) {
    case BaseKernelKind::kRbf:
      return std::exp(-(delta * delta) /
                      (2.0 * spec.bandwidth * spec.bandwidth));
    case BaseKernelKind::kLaplacianRbf:
      return std::exp(-std::abs(delta) / spec.bandwidth);
    case BaseKernelKind::kCauchy:
      return 1.0 / (1.0 + (delta * delta) / (spec.bandwidth * spec.bandwidth));
    case BaseKernelKind::kCategorical:
      return a == b ? 1.0 : 0.0;
  }
  return 0.0;
}

}  // namespace internal

// Product of the base kernels over `subset`; 1 for the empty subset.
double EvalProduct(const ProductKernelSpec& spec,
                   const Eigen::Ref<const Eigen::VectorXd>& x,
                   const Eigen::Ref<const Eigen::VectorXd>& x2,
                   const FeatureSet& subset);

// Full product kernel over all features.
double EvalProduct(const ProductKernelSpec& spec,
                   const Eigen::Ref<const Eigen::VectorXd>& x,
                   const Eigen::Ref<const Eigen::VectorXd>& x2);

// z_j with z_j[i] = k_j(X[i, j], x[j]).
Eigen::VectorXd FeatureKernelVector(const ProductKernelSpec& spec,
                                    std::size_t feature, const FeatureMatrix& x,
                                    const Eigen::Ref<const Eigen::VectorXd>& point);

// K_j with K_j[a, b] = k_j(X[a, j], X[b, j]). Symmetric with unit diagonal.
Eigen::MatrixXd FeatureKernelMatrix(const ProductKernelSpec& spec,
                                    std::size_t feature, const FeatureMatrix& x);

// Product Gram matrix between the rows of `a` and the rows of `b`.
Eigen::MatrixXd ProductGram(const ProductKernelSpec& spec,
                            const FeatureMatrix& a, const FeatureMatrix& b);

// Per-feature median of |X[i, j] - X[i', j]| over pairs i < i'. A zero median
// falls back to 1. Above kExactMedianMaxRows rows the median is estimated
// from kSubsampledPairs uniformly drawn pairs using `seed`.
Eigen::VectorXd MedianHeuristicBandwidths(const FeatureMatrix& x,
                                          std::uint64_t seed = 0);

// Median Euclidean distance between rows, same pair rules as above.
double MedianPairwiseDistance(const FeatureMatrix& x, std::uint64_t seed = 0);

inline constexpr std::size_t kExactMedianMaxRows = 20000;
inline constexpr std::size_t kSubsampledPairs = 10000;

}  // namespace pkex

#endif  // PKEX_KERNELS_H_
