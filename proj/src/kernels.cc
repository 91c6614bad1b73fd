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

#include "pkex/kernels.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "pkex/error.h"
#include "pkex/rng.h"

namespace pkex {
namespace {

void CheckFinite(double v, std::string_view what) {
  if (!std::isfinite(v)) {
    throw Error(ErrorCode::kInvalidInput,
                "non-finite value in " + std::string(what));
  }
}

double MedianInPlace(std::vector<double>& values) {
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  double median = values[mid];
  if (values.size() % 2 == 0) {
    const double lower =
        *std::max_element(values.begin(), values.begin() + mid);
    median = 0.5 * (lower + median);
  }
  return median;
}

// Calls fn(i, i') for the pairs that enter the median: all i < i' for small
// inputs, a seeded uniform sample of distinct pairs otherwise.
template <typename Fn>
void ForEachMedianPair(std::size_t n, std::uint64_t seed, Fn&& fn) {
  if (n <= kExactMedianMaxRows) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = i + 1; k < n; ++k) fn(i, k);
    }
    return;
  }
  CounterRng rng(seed);
  for (std::size_t s = 0; s < kSubsampledPairs; ++s) {
    const std::size_t i = rng.UniformInt(n);
    std::size_t k = rng.UniformInt(n - 1);
    if (k >= i) ++k;
    fn(i, k);
  }
}

}  // namespace

std::string_view KindName(BaseKernelKind kind) {
  switch (kind) {
    case BaseKernelKind::kRbf:
      return "rbf";
    case BaseKernelKind::kLaplacianRbf:
      return "laplacian_rbf";
    case BaseKernelKind::kCauchy:
      return "cauchy";
    case BaseKernelKind::kCategorical:
      return "categorical";
  }
  return "unknown";
}

BaseKernelKind KindFromName(std::string_view name) {
  if (name == "rbf") return BaseKernelKind::kRbf;
  if (name == "laplacian_rbf") return BaseKernelKind::kLaplacianRbf;
  if (name == "cauchy") return BaseKernelKind::kCauchy;
  if (name == "categorical") return BaseKernelKind::kCategorical;
  throw Error(ErrorCode::kInvalidSpec,
              "unknown kernel kind '" + std::string(name) + "'");
}

void BaseKernelSpec::Validate() const {
  if (kind == BaseKernelKind::kCategorical) return;
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
    throw Error(ErrorCode::kInvalidSpec,
                "bandwidth must be positive and finite for kernel '" +
                    std::string(KindName(kind)) + "'");
  }
}

void ProductKernelSpec::Validate() const {
  if (per_feature.empty()) {
    throw Error(ErrorCode::kInvalidSpec, "product kernel has no features");
  }
  for (const auto& base : per_feature) base.Validate();
}

ProductKernelSpec ProductKernelSpec::Uniform(BaseKernelKind kind,
                                             const Eigen::VectorXd& bandwidths) {
  ProductKernelSpec spec;
  spec.per_feature.reserve(bandwidths.size());
  for (Eigen::Index j = 0; j < bandwidths.size(); ++j) {
    spec.per_feature.push_back({kind, bandwidths[j]});
  }
  return spec;
}

ProductKernelSpec ProductKernelSpec::Isotropic(BaseKernelKind kind,
                                               double bandwidth,
                                               std::size_t dim) {
  return Uniform(kind, Eigen::VectorXd::Constant(
                           static_cast<Eigen::Index>(dim), bandwidth));
}

void ValidateFeatureMatrix(const FeatureMatrix& x, std::string_view what) {
  if (x.rows() == 0 || x.cols() == 0) {
    throw Error(ErrorCode::kInvalidInput,
                std::string(what) + " must have at least one row and column");
  }
  if (!x.allFinite()) {
    throw Error(ErrorCode::kInvalidInput,
                "non-finite entry in " + std::string(what));
  }
}

double EvalBase(const BaseKernelSpec& spec, double a, double b) {
  spec.Validate();
  CheckFinite(a, "kernel argument");
  CheckFinite(b, "kernel argument");
  return internal::EvalBaseUnchecked(spec, a, b);
}

double EvalProduct(const ProductKernelSpec& spec,
                   const Eigen::Ref<const Eigen::VectorXd>& x,
                   const Eigen::Ref<const Eigen::VectorXd>& x2,
                   const FeatureSet& subset) {
  const auto d = spec.dim();
  if (static_cast<std::size_t>(x.size()) != d ||
      static_cast<std::size_t>(x2.size()) != d) {
    throw Error(ErrorCode::kInvalidInput,
                "point dimension does not match kernel dimension");
  }
  double product = 1.0;
  for (const std::size_t j : subset) {
    if (j >= d) {
      throw Error(ErrorCode::kInvalidSubset,
                  "feature index " + std::to_string(j) + " out of range for d=" +
                      std::to_string(d));
    }
    product *= EvalBase(spec.per_feature[j], x[j], x2[j]);
  }
  return product;
}

double EvalProduct(const ProductKernelSpec& spec,
                   const Eigen::Ref<const Eigen::VectorXd>& x,
                   const Eigen::Ref<const Eigen::VectorXd>& x2) {
  FeatureSet all(spec.dim());
  for (std::size_t j = 0; j < all.size(); ++j) all[j] = j;
  return EvalProduct(spec, x, x2, all);
}

Eigen::VectorXd FeatureKernelVector(
    const ProductKernelSpec& spec, std::size_t feature, const FeatureMatrix& x,
    const Eigen::Ref<const Eigen::VectorXd>& point) {
  if (feature >= spec.dim() || static_cast<std::size_t>(x.cols()) != spec.dim() ||
      static_cast<std::size_t>(point.size()) != spec.dim()) {
    throw Error(ErrorCode::kInvalidInput,
                "dimension mismatch in feature kernel vector");
  }
  const auto& base = spec.per_feature[feature];
  base.Validate();
  CheckFinite(point[feature], "kernel argument");
  Eigen::VectorXd z(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    CheckFinite(x(i, feature), "kernel argument");
    z[i] = internal::EvalBaseUnchecked(base, x(i, feature), point[feature]);
  }
  return z;
}

Eigen::MatrixXd FeatureKernelMatrix(const ProductKernelSpec& spec,
                                    std::size_t feature,
                                    const FeatureMatrix& x) {
  if (feature >= spec.dim() ||
      static_cast<std::size_t>(x.cols()) != spec.dim()) {
    throw Error(ErrorCode::kInvalidInput,
                "dimension mismatch in feature kernel matrix");
  }
  const auto& base = spec.per_feature[feature];
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    k(a, a) = EvalBase(base, x(a, feature), x(a, feature));
    for (Eigen::Index b = a + 1; b < n; ++b) {
      k(a, b) = k(b, a) = EvalBase(base, x(a, feature), x(b, feature));
    }
  }
  return k;
}

Eigen::MatrixXd ProductGram(const ProductKernelSpec& spec,
                            const FeatureMatrix& a, const FeatureMatrix& b) {
  if (static_cast<std::size_t>(a.cols()) != spec.dim() ||
      static_cast<std::size_t>(b.cols()) != spec.dim()) {
    throw Error(ErrorCode::kInvalidInput,
                "dimension mismatch in product Gram matrix");
  }
  spec.Validate();
  ValidateFeatureMatrix(a, "kernel data");
  ValidateFeatureMatrix(b, "kernel data");
  Eigen::MatrixXd gram = Eigen::MatrixXd::Ones(a.rows(), b.rows());
  for (std::size_t j = 0; j < spec.dim(); ++j) {
    const auto& base = spec.per_feature[j];
    for (Eigen::Index c = 0; c < b.rows(); ++c) {
      for (Eigen::Index r = 0; r < a.rows(); ++r) {
        gram(r, c) *= internal::EvalBaseUnchecked(base, a(r, j), b(c, j));
      }
    }
  }
  return gram;
}

Eigen::VectorXd MedianHeuristicBandwidths(const FeatureMatrix& x,
                                          std::uint64_t seed) {
  const auto n = static_cast<std::size_t>(x.rows());
  if (n < 2) {
    throw Error(ErrorCode::kInsufficientData,
                "median heuristic needs at least two rows");
  }
  ValidateFeatureMatrix(x, "bandwidth data");
  Eigen::VectorXd sigma(x.cols());
  std::vector<double> dist;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    dist.clear();
    ForEachMedianPair(n, DeriveSeed(seed, j), [&](std::size_t a, std::size_t b) {
      dist.push_back(std::abs(x(a, j) - x(b, j)));
    });
    const double median = MedianInPlace(dist);
    sigma[j] = median > 0.0 ? median : 1.0;
  }
  return sigma;
}

double MedianPairwiseDistance(const FeatureMatrix& x, std::uint64_t seed) {
  const auto n = static_cast<std::size_t>(x.rows());
  if (n < 2) {
    throw Error(ErrorCode::kInsufficientData,
                "median heuristic needs at least two rows");
  }
  ValidateFeatureMatrix(x, "bandwidth data");
  std::vector<double> dist;
  ForEachMedianPair(n, seed, [&](std::size_t a, std::size_t b) {
    dist.push_back((x.row(a) - x.row(b)).norm());
  });
  const double median = MedianInPlace(dist);
  return median > 0.0 ? median : 1.0;
}

}  // namespace pkex
