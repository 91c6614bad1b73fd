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

#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "pkex/error.h"
#include "test_util.h"

namespace pkex {
namespace {

BaseKernelSpec Rbf(double sigma) { return {BaseKernelKind::kRbf, sigma}; }

TEST(EvalBase, ClosedForms) {
  EXPECT_EQ(EvalBase(Rbf(1.0), 0.0, 0.0), 1.0);
  EXPECT_NEAR(EvalBase(Rbf(1.0), 1.0, 0.0), std::exp(-0.5), 1e-15);
  EXPECT_NEAR(EvalBase({BaseKernelKind::kCauchy, 2.0}, 2.0, 0.0), 0.5, 1e-15);
  EXPECT_NEAR(EvalBase({BaseKernelKind::kLaplacianRbf, 2.0}, 1.0, 3.0),
              std::exp(-1.0), 1e-15);
  EXPECT_EQ(EvalBase({BaseKernelKind::kCategorical, 0.0}, 3.0, 3.0), 1.0);
  EXPECT_EQ(EvalBase({BaseKernelKind::kCategorical, 0.0}, 3.0, 4.0), 0.0);
}

TEST(EvalBase, SelfSimilarityAndRange) {
  CounterRng rng(7);
  for (auto kind : {BaseKernelKind::kRbf, BaseKernelKind::kLaplacianRbf,
                    BaseKernelKind::kCauchy}) {
    for (int t = 0; t < 200; ++t) {
      const BaseKernelSpec spec{kind, 0.1 + 3.0 * rng.Uniform()};
      const double a = 3.0 * rng.Normal();
      const double b = 3.0 * rng.Normal();
      EXPECT_EQ(EvalBase(spec, a, a), 1.0);
      const double k = EvalBase(spec, a, b);
      EXPECT_GT(k, 0.0);
      EXPECT_LE(k, 1.0);
    }
  }
}

TEST(EvalBase, Errors) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  try {
    EvalBase(Rbf(1.0), nan, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidInput);
  }
  try {
    EvalBase(Rbf(0.0), 1.0, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidSpec);
  }
  EXPECT_THROW(EvalBase({BaseKernelKind::kCauchy, -1.0}, 1.0, 0.0), Error);
  EXPECT_NO_THROW(EvalBase({BaseKernelKind::kCategorical, 0.0}, 1.0, 0.0));
}

TEST(EvalProduct, Examples) {
  const auto spec = ProductKernelSpec::Isotropic(BaseKernelKind::kRbf, 1.0, 2);
  const Eigen::Vector2d x(0.0, 0.0);
  const Eigen::Vector2d x2(1.0, 1.0);
  EXPECT_EQ(EvalProduct(spec, x, x2, {}), 1.0);
  EXPECT_NEAR(EvalProduct(spec, x, x2, {0, 1}), std::exp(-1.0), 1e-15);
  EXPECT_EQ(EvalProduct(spec, x2, x2, {0, 1}), 1.0);
  try {
    EvalProduct(spec, x, x2, {2});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidSubset);
  }
}

TEST(EvalProduct, Factorization) {
  CounterRng rng(11);
  for (int t = 0; t < 50; ++t) {
    const std::size_t d = 1 + rng.UniformInt(8);
    const auto spec = testing::RandomKernel(d, rng);
    const auto x = testing::RandomPoint(d, rng);
    const auto x2 = testing::RandomPoint(d, rng);
    const CoalitionMask s = rng.UniformInt(CoalitionMask{1} << d);
    EXPECT_EQ(EvalProduct(spec, x, x, MaskToSet(s, d)), 1.0);
    for (std::size_t j = 0; j < d; ++j) {
      if (s >> j & 1U) continue;
      const double with = EvalProduct(spec, x, x2, MaskToSet(s | (1ULL << j), d));
      const double without = EvalProduct(spec, x, x2, MaskToSet(s, d));
      EXPECT_NEAR(with, EvalBase(spec.per_feature[j], x[j], x2[j]) * without,
                  1e-15);
    }
  }
}

// prod_j k_j = sum over subsets S of prod_{j in S} (k_j - 1), by enumeration.
TEST(EvalProduct, SubsetExpansionIdentity) {
  CounterRng rng(12);
  for (std::size_t d = 1; d <= 10; ++d) {
    const auto spec = testing::RandomKernel(d, rng);
    const auto x = testing::RandomPoint(d, rng);
    const auto x2 = testing::RandomPoint(d, rng);
    double expansion = 0.0;
    for (CoalitionMask s = 0; s < (CoalitionMask{1} << d); ++s) {
      double term = 1.0;
      for (std::size_t j = 0; j < d; ++j) {
        if (s >> j & 1U) term *= EvalBase(spec.per_feature[j], x[j], x2[j]) - 1.0;
      }
      expansion += term;
    }
    const double direct = EvalProduct(spec, x, x2);
    EXPECT_NEAR(expansion, direct, 1e-10 * std::abs(direct)) << "d=" << d;
  }
}

TEST(FeatureKernelVector, Examples) {
  FeatureMatrix x(3, 1);
  x << 0.0, 1.0, 3.0;
  const auto spec = ProductKernelSpec::Isotropic(BaseKernelKind::kRbf, 1.0, 1);
  const Eigen::VectorXd z = FeatureKernelVector(spec, 0, x, Eigen::VectorXd::Zero(1));
  EXPECT_EQ(z[0], 1.0);
  EXPECT_NEAR(z[1], std::exp(-0.5), 1e-15);
  EXPECT_NEAR(z[2], std::exp(-4.5), 1e-15);

  FeatureMatrix single(1, 2);
  single << 0.3, -1.0;
  const auto spec2 = ProductKernelSpec::Isotropic(BaseKernelKind::kCauchy, 1.0, 2);
  EXPECT_EQ(FeatureKernelVector(spec2, 1, single, single.row(0).transpose())[0], 1.0);

  // Categorical codes A=0, B=1.
  FeatureMatrix cat(3, 1);
  cat << 0.0, 1.0, 0.0;
  const auto cspec = ProductKernelSpec::Isotropic(BaseKernelKind::kCategorical, 1.0, 1);
  const Eigen::VectorXd c = FeatureKernelVector(cspec, 0, cat, Eigen::VectorXd::Zero(1));
  EXPECT_EQ(c, Eigen::Vector3d(1.0, 0.0, 1.0));

  EXPECT_THROW(FeatureKernelVector(spec, 0, x, Eigen::VectorXd::Zero(2)), Error);
  EXPECT_THROW(FeatureKernelVector(spec, 1, x, Eigen::VectorXd::Zero(1)), Error);
}

TEST(FeatureKernelMatrix, Examples) {
  const auto spec = ProductKernelSpec::Isotropic(BaseKernelKind::kRbf, 1.0, 1);
  FeatureMatrix two(2, 1);
  two << 0.0, 1.0;
  const Eigen::MatrixXd k = FeatureKernelMatrix(spec, 0, two);
  EXPECT_EQ(k(0, 0), 1.0);
  EXPECT_EQ(k(1, 1), 1.0);
  EXPECT_NEAR(k(0, 1), std::exp(-0.5), 1e-15);
  EXPECT_EQ(k(0, 1), k(1, 0));

  const FeatureMatrix constant = FeatureMatrix::Constant(4, 1, 2.5);
  EXPECT_EQ(FeatureKernelMatrix(spec, 0, constant), Eigen::MatrixXd::Ones(4, 4));

  CounterRng rng(3);
  const FeatureMatrix random = testing::RandomMatrix(9, 1, rng);
  const Eigen::MatrixXd kr = FeatureKernelMatrix(spec, 0, random);
  EXPECT_EQ(kr, kr.transpose());
  EXPECT_EQ(kr.diagonal(), Eigen::VectorXd::Ones(9));
}

TEST(ProductGram, MatchesPairwiseProducts) {
  CounterRng rng(5);
  const auto spec = testing::RandomKernel(4, rng);
  const FeatureMatrix a = testing::RandomMatrix(5, 4, rng);
  const FeatureMatrix b = testing::RandomMatrix(3, 4, rng);
  const Eigen::MatrixXd g = ProductGram(spec, a, b);
  for (Eigen::Index r = 0; r < 5; ++r) {
    for (Eigen::Index c = 0; c < 3; ++c) {
      EXPECT_NEAR(g(r, c), EvalProduct(spec, a.row(r).transpose(), b.row(c).transpose()),
                  1e-15);
    }
  }
}

TEST(MedianHeuristic, Examples) {
  FeatureMatrix x(3, 3);
  x << 0.0, 5.0, 0.0,
       1.0, 5.0, 2.0,
       3.0, 5.0, 2.0;
  const Eigen::VectorXd sigma = MedianHeuristicBandwidths(x);
  EXPECT_EQ(sigma[0], 2.0);
  EXPECT_EQ(sigma[1], 1.0);  // constant column falls back to 1
  EXPECT_EQ(sigma[2], 2.0);  // distances {2, 2, 0}

  FeatureMatrix pair(2, 1);
  pair << 0.0, 2.0;
  EXPECT_EQ(MedianHeuristicBandwidths(pair)[0], 2.0);

  FeatureMatrix one(1, 1);
  one << 0.0;
  try {
    MedianHeuristicBandwidths(one);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInsufficientData);
  }
}

TEST(MedianHeuristic, EvenCountAveragesMiddlePair) {
  FeatureMatrix x(4, 1);
  x << 0.0, 1.0, 3.0, 7.0;  // distances {1,3,7,2,6,4}: median (3 + 4) / 2
  EXPECT_EQ(MedianHeuristicBandwidths(x)[0], 3.5);
}

TEST(MedianHeuristic, SubsampledAboveRowLimitIsSeeded) {
  CounterRng rng(9);
  const FeatureMatrix x = testing::RandomMatrix(
      static_cast<Eigen::Index>(kExactMedianMaxRows) + 5, 1, rng);
  const double a = MedianHeuristicBandwidths(x, 1)[0];
  EXPECT_EQ(a, MedianHeuristicBandwidths(x, 1)[0]);
  // Median |N(0,1) - N(0,1)| = sqrt(2) * 0.6745.
  EXPECT_NEAR(a, std::sqrt(2.0) * 0.67449, 0.05);
}

}  // namespace
}  // namespace pkex
