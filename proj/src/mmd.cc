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

#include "pkex/mmd.h"

#include <string>
#include <vector>

#include "pkex/error.h"
#include "pkex/parallel.h"
#include "product_game.h"

namespace pkex {
namespace {

enum class PairKind { kWithinX, kWithinZ, kCross };

// Pairs sharing a first row: (x_i, x_j>i), (z_i, z_j>i) or (x_i, z_*).
// The within-sample sums run over ordered pairs i != j, so each unordered
// pair carries twice its weight.
struct PairBlock {
  PairKind kind;
  Eigen::Index row;
};

std::vector<PairBlock> EnumerateBlocks(Eigen::Index n, Eigen::Index m) {
  std::vector<PairBlock> blocks;
  for (Eigen::Index i = 0; i + 1 < n; ++i) blocks.push_back({PairKind::kWithinX, i});
  for (Eigen::Index i = 0; i + 1 < m; ++i) blocks.push_back({PairKind::kWithinZ, i});
  for (Eigen::Index i = 0; i < n; ++i) blocks.push_back({PairKind::kCross, i});
  return blocks;
}

// Per-feature kernel values and estimator weights of every pair in a block.
void FillBlock(const TwoSample& s, const PairBlock& block,
               std::vector<Eigen::ArrayXd>& factors, Eigen::ArrayXd& weights) {
  const double n = static_cast<double>(s.x.rows());
  const double m = static_cast<double>(s.z.rows());
  const FeatureMatrix& left = block.kind == PairKind::kWithinZ ? s.z : s.x;
  const FeatureMatrix& right = block.kind == PairKind::kWithinX ? s.x : s.z;
  const Eigen::Index first = block.kind == PairKind::kCross ? 0 : block.row + 1;
  const Eigen::Index count = right.rows() - first;
  double w = 0.0;
  switch (block.kind) {
    case PairKind::kWithinX:
      w = 2.0 / (n * (n - 1.0));
      break;
    case PairKind::kWithinZ:
      w = 2.0 / (m * (m - 1.0));
      break;
    case PairKind::kCross:
      w = -2.0 / (n * m);
      break;
  }
  weights = Eigen::ArrayXd::Constant(count, w);
  const std::size_t d = s.kernel.dim();
  factors.resize(d);
  for (std::size_t q = 0; q < d; ++q) {
    const auto& base = s.kernel.per_feature[q];
    const auto col = static_cast<Eigen::Index>(q);
    const double a = left(block.row, col);
    factors[q].resize(count);
    for (Eigen::Index b = 0; b < count; ++b) {
      factors[q][b] = internal::EvalBaseUnchecked(base, a, right(first + b, col));
    }
  }
}

double BlockValue(const std::vector<Eigen::ArrayXd>& factors,
                  const Eigen::ArrayXd& weights, const FeatureSet& subset) {
  Eigen::ArrayXd prod = Eigen::ArrayXd::Ones(weights.size());
  for (const std::size_t q : subset) prod *= factors[q];
  return (weights * prod).sum();
}

}  // namespace

void TwoSample::Validate() const {
  if (x.rows() < 2 || z.rows() < 2) {
    throw Error(ErrorCode::kInsufficientData,
                "MMD needs at least two rows in each sample");
  }
  ValidateFeatureMatrix(x, "first sample");
  ValidateFeatureMatrix(z, "second sample");
  if (x.cols() != z.cols()) {
    throw Error(ErrorCode::kInvalidInput,
                "samples have different column counts (" +
                    std::to_string(x.cols()) + " vs " +
                    std::to_string(z.cols()) + ")");
  }
  kernel.Validate();
  if (kernel.dim() != static_cast<std::size_t>(x.cols())) {
    throw Error(ErrorCode::kInvalidInput,
                "kernel dimension does not match the samples");
  }
}

ProductKernelSpec PooledMedianKernel(const FeatureMatrix& x,
                                     const FeatureMatrix& z,
                                     BaseKernelKind kind, std::uint64_t seed) {
  if (x.cols() != z.cols()) {
    throw Error(ErrorCode::kInvalidInput,
                "samples have different column counts");
  }
  FeatureMatrix pooled(x.rows() + z.rows(), x.cols());
  pooled << x, z;
  return ProductKernelSpec::Uniform(kind, MedianHeuristicBandwidths(pooled, seed));
}

double MmdValueFunction(const TwoSample& sample, const FeatureSet& subset) {
  sample.Validate();
  for (const std::size_t q : subset) {
    if (q >= sample.kernel.dim()) {
      throw Error(ErrorCode::kInvalidSubset,
                  "feature index " + std::to_string(q) + " out of range");
    }
  }
  const auto blocks = EnumerateBlocks(sample.x.rows(), sample.z.rows());
  std::vector<Eigen::ArrayXd> factors;
  Eigen::ArrayXd weights;
  double total = 0.0;
  for (const auto& block : blocks) {
    FillBlock(sample, block, factors, weights);
    total += BlockValue(factors, weights, subset);
  }
  return total;
}

double MmdSquared(const TwoSample& sample) {
  FeatureSet all(sample.kernel.dim());
  for (std::size_t q = 0; q < all.size(); ++q) all[q] = q;
  return MmdValueFunction(sample, all);
}

Attribution ExplainMmd(const TwoSample& sample, const ExplainOptions& options) {
  sample.Validate();
  const std::size_t d = sample.kernel.dim();
  const EspBackend backend = options.backend;
  const ShapleyWeights mu = ComputeShapleyWeights(d);
  const auto blocks = EnumerateBlocks(sample.x.rows(), sample.z.rows());

  FeatureSet all(d);
  for (std::size_t q = 0; q < d; ++q) all[q] = q;

  std::vector<Eigen::VectorXd> block_phi(blocks.size());
  std::vector<double> block_value(blocks.size());
  ParallelFor(blocks.size(), options.threads, [&](std::size_t b) {
    std::vector<Eigen::ArrayXd> factors;
    Eigen::ArrayXd weights;
    FillBlock(sample, blocks[b], factors, weights);
    block_phi[b] = internal::ProductGameShapley(factors, weights, backend, mu);
    block_value[b] = BlockValue(factors, weights, all);
  });

  Attribution out;
  out.phi = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    out.phi += block_phi[b];
    out.v_full += block_value[b];
  }
  out.v_empty = 0.0;
  out.method = ExactMethod(backend);
  return out;
}

}  // namespace pkex
