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

#include "pkex/hsic.h"

#include <cmath>
#include <string>
#include <vector>

#include "pkex/error.h"
#include "pkex/parallel.h"
#include "product_game.h"

namespace pkex {
namespace {

// H L H by subtracting row and column means.
Eigen::MatrixXd DoubleCenter(const Eigen::MatrixXd& l) {
  const Eigen::VectorXd row_mean = l.rowwise().mean();
  const Eigen::RowVectorXd col_mean = l.colwise().mean();
  const double grand = l.mean();
  Eigen::MatrixXd m = l;
  m.colwise() -= row_mean;
  m.rowwise() -= col_mean;
  m.array() += grand;
  return m;
}

double Scale(Eigen::Index n) {
  const double nm1 = static_cast<double>(n - 1);
  return 1.0 / (nm1 * nm1);
}

}  // namespace

void HsicInput::Validate() const {
  if (x.rows() < 2) {
    throw Error(ErrorCode::kInsufficientData, "HSIC needs at least two rows");
  }
  ValidateFeatureMatrix(x, "feature matrix");
  kernel_x.Validate();
  if (kernel_x.dim() != static_cast<std::size_t>(x.cols())) {
    throw Error(ErrorCode::kInvalidInput,
                "kernel dimension does not match the feature matrix");
  }
  if (target_gram.rows() != x.rows() || target_gram.cols() != x.rows()) {
    throw Error(ErrorCode::kInvalidInput,
                "target Gram matrix must be " + std::to_string(x.rows()) + "x" +
                    std::to_string(x.rows()));
  }
  if (!target_gram.allFinite()) {
    throw Error(ErrorCode::kInvalidInput, "target Gram matrix is not finite");
  }
  const double asym = (target_gram - target_gram.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * std::max(1.0, target_gram.cwiseAbs().maxCoeff())) {
    throw Error(ErrorCode::kInvalidInput, "target Gram matrix is not symmetric");
  }
}

Eigen::MatrixXd TargetGram(const Eigen::MatrixXd& y, TargetKernel kind,
                           std::uint64_t seed) {
  if (y.rows() == 0 || y.cols() == 0) {
    throw Error(ErrorCode::kInvalidInput, "empty target");
  }
  if (y.rows() < 2) {
    throw Error(ErrorCode::kInsufficientData, "target needs at least two rows");
  }
  const ProductKernelSpec spec =
      kind == TargetKernel::kRbf
          ? ProductKernelSpec::Uniform(BaseKernelKind::kRbf,
                                       MedianHeuristicBandwidths(y, seed))
          : ProductKernelSpec::Isotropic(BaseKernelKind::kCategorical, 1.0,
                                         static_cast<std::size_t>(y.cols()));
  return ProductGram(spec, y, y);
}

double HsicValueFunction(const HsicInput& input, const FeatureSet& subset) {
  input.Validate();
  Eigen::MatrixXd k =
      Eigen::MatrixXd::Ones(input.x.rows(), input.x.rows());
  for (const std::size_t j : subset) {
    if (j >= input.kernel_x.dim()) {
      throw Error(ErrorCode::kInvalidSubset,
                  "feature index " + std::to_string(j) + " out of range");
    }
    k.array() *= FeatureKernelMatrix(input.kernel_x, j, input.x).array();
  }
  // tr(M K) = sum_ab M_ab K_ba, and K is symmetric.
  return Scale(input.x.rows()) *
         (DoubleCenter(input.target_gram).array() * k.array()).sum();
}

double Hsic(const HsicInput& input) {
  FeatureSet all(input.kernel_x.dim());
  for (std::size_t j = 0; j < all.size(); ++j) all[j] = j;
  return HsicValueFunction(input, all);
}

Attribution ExplainHsic(const HsicInput& input, const HsicOptions& options) {
  input.Validate();
  const std::size_t d = input.kernel_x.dim();
  if (d > options.max_features) {
    throw Error(ErrorCode::kResourceLimit,
                "HSIC attribution over " + std::to_string(d) +
                    " features exceeds the configured cap of " +
                    std::to_string(options.max_features) +
                    "; raise the cap or reduce the feature set");
  }
  const EspBackend backend = options.explain.backend;
  const ShapleyWeights mu = ComputeShapleyWeights(d);
  const Eigen::MatrixXd centered = DoubleCenter(input.target_gram);
  const Eigen::Index n = input.x.rows();
  const double scale = Scale(n);

  // Entry (a, b) of every K_j: diagonal entries are 1 in every factor and
  // add nothing to any phi_j, so only the strict upper triangle is visited,
  // with weight 2 M_ab for the two symmetric entries.
  std::vector<Eigen::VectorXd> row_phi(static_cast<std::size_t>(n - 1));
  ParallelFor(row_phi.size(), options.explain.threads, [&](std::size_t r) {
    const auto a = static_cast<Eigen::Index>(r);
    const Eigen::Index count = n - a - 1;
    Eigen::ArrayXd weights(count);
    for (Eigen::Index b = 0; b < count; ++b) {
      weights[b] = 2.0 * scale * centered(a, a + 1 + b);
    }
    std::vector<Eigen::ArrayXd> factors(d, Eigen::ArrayXd(count));
    for (std::size_t j = 0; j < d; ++j) {
      const auto& base = input.kernel_x.per_feature[j];
      const auto col = static_cast<Eigen::Index>(j);
      for (Eigen::Index b = 0; b < count; ++b) {
        factors[j][b] = internal::EvalBaseUnchecked(base, input.x(a, col),
                                                    input.x(a + 1 + b, col));
      }
    }
    row_phi[r] = internal::ProductGameShapley(factors, weights, backend, mu);
  });

  Attribution out;
  out.phi = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
  for (const auto& p : row_phi) out.phi += p;
  out.v_full = Hsic(input);
  out.v_empty = 0.0;
  out.method = ExactMethod(backend);
  return out;
}

BivariateAttribution ExplainHsicBivariate(const FeatureMatrix& x,
                                          const FeatureMatrix& z,
                                          const ProductKernelSpec& kernel_x,
                                          const ProductKernelSpec& kernel_z,
                                          BivariateSide side,
                                          const HsicOptions& options) {
  if (x.rows() != z.rows()) {
    throw Error(ErrorCode::kInvalidInput,
                "paired samples must have the same number of rows (" +
                    std::to_string(x.rows()) + " vs " +
                    std::to_string(z.rows()) + ")");
  }
  BivariateAttribution out;
  if (side != BivariateSide::kZ) {
    out.x = ExplainHsic({x, kernel_x, ProductGram(kernel_z, z, z)}, options);
  }
  if (side != BivariateSide::kX) {
    out.z = ExplainHsic({z, kernel_z, ProductGram(kernel_x, x, x)}, options);
  }
  return out;
}

}  // namespace pkex
