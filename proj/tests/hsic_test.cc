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

#include <gtest/gtest.h>

#include "pkex/error.h"
#include "pkex/esp.h"
#include "pkex/oracle.h"
#include "test_util.h"

namespace pkex {
namespace {

Eigen::MatrixXd Centering(Eigen::Index n) {
  return Eigen::MatrixXd::Identity(n, n) -
         Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
}

TEST(TargetGram, Examples) {
  const Eigen::MatrixXd constant = Eigen::MatrixXd::Constant(4, 1, 3.0);
  EXPECT_EQ(TargetGram(constant, TargetKernel::kCategorical), Eigen::MatrixXd::Ones(4, 4));

  Eigen::MatrixXd y(2, 1);
  y << 0.0, 1.0;  // single distance 1: median bandwidth 1
  const Eigen::MatrixXd l = TargetGram(y, TargetKernel::kRbf);
  EXPECT_EQ(l(0, 0), 1.0);
  EXPECT_NEAR(l(0, 1), std::exp(-0.5), 1e-15);
  EXPECT_EQ(l, l.transpose());

  Eigen::MatrixXd labels(3, 1);
  labels << 0.0, 1.0, 0.0;
  const Eigen::MatrixXd c = TargetGram(labels, TargetKernel::kCategorical);
  EXPECT_EQ(c(0, 2), 1.0);
  EXPECT_EQ(c(0, 1), 0.0);

  EXPECT_THROW(TargetGram(Eigen::MatrixXd(0, 1), TargetKernel::kRbf), Error);
}

TEST(Hsic, ConstantTargetGivesZero) {
  CounterRng rng(1);
  HsicInput in = testing::RandomHsicInput(6, 3, rng);
  in.target_gram = Eigen::MatrixXd::Ones(6, 6);
  EXPECT_NEAR(Hsic(in), 0.0, 1e-15);
  const Attribution a = ExplainHsic(in);
  EXPECT_TRUE((a.phi.array() == 0.0).all());
}

TEST(Hsic, TwoSampleClosedForm) {
  CounterRng rng(2);
  HsicInput in = testing::RandomHsicInput(2, 3, rng);
  in.target_gram << 1.0, 0.3, 0.3, 1.0;
  const Eigen::MatrixXd k = ProductGram(in.kernel_x, in.x, in.x);
  const double want = (k(0, 0) + k(1, 1) - k(0, 1) - k(1, 0)) *
                      (in.target_gram(0, 0) + in.target_gram(1, 1) -
                       in.target_gram(0, 1) - in.target_gram(1, 0)) / 4.0;
  EXPECT_NEAR(Hsic(in), want, 1e-15);
}

TEST(Hsic, MatchesExplicitTraceAndIsNonNegative) {
  CounterRng rng(3);
  for (int t = 0; t < 20; ++t) {
    const HsicInput in = testing::RandomHsicInput(3 + rng.UniformInt(10), 4, rng);
    const Eigen::Index n = in.x.rows();
    const Eigen::MatrixXd h = Centering(n);
    const Eigen::MatrixXd k = ProductGram(in.kernel_x, in.x, in.x);
    const double want = (k * h * in.target_gram * h).trace() /
                        static_cast<double>((n - 1) * (n - 1));
    EXPECT_NEAR(Hsic(in), want, 1e-13);
    EXPECT_GE(Hsic(in), -1e-12);
  }
}

TEST(HsicValueFunction, EmptyFullSingle) {
  CounterRng rng(4);
  const HsicInput in = testing::RandomHsicInput(7, 3, rng);
  EXPECT_NEAR(HsicValueFunction(in, {}), 0.0, 1e-15);
  EXPECT_EQ(HsicValueFunction(in, {0, 1, 2}), Hsic(in));
  const Eigen::MatrixXd h = Centering(7);
  const double single = (h * in.target_gram * h * FeatureKernelMatrix(in.kernel_x, 1, in.x))
                             .trace() / 36.0;
  EXPECT_NEAR(HsicValueFunction(in, {1}), single, 1e-14);
  EXPECT_THROW(HsicValueFunction(in, {3}), Error);
}

TEST(ExplainHsic, SingleFeatureTakesEverything) {
  CounterRng rng(5);
  const HsicInput in = testing::RandomHsicInput(6, 1, rng);
  EXPECT_NEAR(ExplainHsic(in).phi[0], Hsic(in), 1e-15);
}

TEST(ExplainHsic, MatchesBruteForce) {
  CounterRng rng(6);
  for (std::size_t d = 1; d <= 10; ++d) {
    for (int rep = 0; rep < 3; ++rep) {
      const HsicInput in = testing::RandomHsicInput(8, d, rng);
      const Attribution oracle = ShapleyBruteForce(testing::HsicGame(in));
      for (auto backend : {EspBackend::kNewton, EspBackend::kStable}) {
        const Attribution a = ExplainHsic(in, {{backend, 1}});
        EXPECT_LE(testing::MaxAbsDiff(a.phi, oracle.phi), 1e-8) << "d=" << d;
      }
    }
  }
}

// phi_j from the dense matrix formula, with H applied explicitly inside the
// loop and matrix ESPs over the flattened Gram matrices.
TEST(ExplainHsic, MatchesDenseTraceFormula) {
  CounterRng rng(7);
  const std::size_t d = 5;
  const HsicInput in = testing::RandomHsicInput(9, d, rng);
  const Eigen::Index n = 9;
  const Eigen::MatrixXd h = Centering(n);
  std::vector<Eigen::ArrayXd> flat;
  for (std::size_t j = 0; j < d; ++j) {
    const Eigen::MatrixXd kj = FeatureKernelMatrix(in.kernel_x, j, in.x);
    flat.push_back(Eigen::Map<const Eigen::ArrayXd>(kj.data(), n * n));
  }
  const ShapleyWeights mu = ComputeShapleyWeights(d);
  const Attribution a = ExplainHsic(in);
  for (std::size_t j = 0; j < d; ++j) {
    std::vector<Eigen::ArrayXd> others;
    for (std::size_t k = 0; k < d; ++k) {
      if (k != j) others.push_back(flat[k]);
    }
    const Eigen::ArrayXd psi = WeightedEspSum(EspStable(others, d - 1), mu);
    const Eigen::ArrayXd inner = (flat[j] - 1.0) * psi;
    const Eigen::MatrixXd m = Eigen::Map<const Eigen::MatrixXd>(inner.data(), n, n);
    const double phi = (h * in.target_gram * h * m).trace() / 64.0;
    EXPECT_NEAR(a.phi[static_cast<Eigen::Index>(j)], phi, 1e-12);
  }
}

TEST(ExplainHsic, EfficiencyAndDuplicatedFeatures) {
  CounterRng rng(8);
  HsicInput in = testing::RandomHsicInput(10, 4, rng);
  FeatureMatrix wide(10, 5);
  wide << in.x, in.x.col(2);
  in.x = wide;
  in.kernel_x.per_feature.push_back(in.kernel_x.per_feature[2]);
  const Attribution a = ExplainHsic(in);
  EXPECT_NEAR(a.phi.sum(), Hsic(in), 1e-8 * std::abs(Hsic(in)));
  EXPECT_NEAR(a.phi[2], a.phi[4], 1e-8);
}

TEST(ExplainHsic, FeatureCapIsEnforced) {
  CounterRng rng(9);
  const HsicInput in = testing::RandomHsicInput(4, 6, rng);
  HsicOptions options;
  options.max_features = 5;
  try {
    ExplainHsic(in, options);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kResourceLimit);
  }
}

TEST(ExplainHsic, PermutedTargetKeepsAttributionsSmall) {
  CounterRng rng(10);
  const Eigen::Index n = 40;
  HsicInput in;
  in.x = testing::RandomMatrix(n, 4, rng);
  in.kernel_x = testing::RandomKernel(4, rng);
  Eigen::MatrixXd y(n, 1);
  for (Eigen::Index i = 0; i < n; ++i) y(i, 0) = in.x.row(i).sum() + 0.3 * rng.Normal();
  in.target_gram = TargetGram(y, TargetKernel::kRbf);
  const double dependent = Hsic(in);

  double sum_abs_phi = 0.0;
  double sum_hsic = 0.0;
  const int reps = 100;
  for (int r = 0; r < reps; ++r) {
    for (Eigen::Index i = n - 1; i > 0; --i) {
      std::swap(y(i, 0), y(static_cast<Eigen::Index>(rng.UniformInt(i + 1)), 0));
    }
    in.target_gram = TargetGram(y, TargetKernel::kRbf);
    const Attribution a = ExplainHsic(in, {{EspBackend::kStable, 1}});
    EXPECT_NEAR(a.phi.sum(), a.v_full, 1e-8 * std::abs(a.v_full) + 1e-15);
    sum_abs_phi += a.phi.cwiseAbs().mean();
    sum_hsic += std::abs(a.v_full);
  }
  EXPECT_LE(sum_abs_phi / reps, sum_hsic / reps);
  EXPECT_LT(sum_hsic / reps, dependent);
}

TEST(ExplainHsicBivariate, TwoGamesShareTheStatistic) {
  CounterRng rng(11);
  const FeatureMatrix x = testing::RandomMatrix(8, 3, rng);
  FeatureMatrix z(8, 2);
  z.col(0) = x.col(0) + 0.2 * testing::RandomMatrix(8, 1, rng);
  z.col(1) = testing::RandomMatrix(8, 1, rng);
  const auto kx = testing::RandomKernel(3, rng);
  const auto kz = testing::RandomKernel(2, rng);
  const auto both = ExplainHsicBivariate(x, z, kx, kz);
  ASSERT_TRUE(both.x && both.z);
  EXPECT_NEAR(both.x->v_full, both.z->v_full, 1e-14);
  EXPECT_NEAR(both.x->phi.sum(), both.x->v_full, 1e-8 * both.x->v_full);
  EXPECT_NEAR(both.z->phi.sum(), both.z->v_full, 1e-8 * both.z->v_full);

  const auto swapped = ExplainHsicBivariate(z, x, kz, kx);
  EXPECT_LE(testing::MaxAbsDiff(swapped.x->phi, both.z->phi), 1e-14);
  EXPECT_LE(testing::MaxAbsDiff(swapped.z->phi, both.x->phi), 1e-14);

  const auto only_x = ExplainHsicBivariate(x, z, kx, kz, BivariateSide::kX);
  EXPECT_TRUE(only_x.x.has_value());
  EXPECT_FALSE(only_x.z.has_value());

  const auto single = ExplainHsicBivariate(x, z.leftCols(1), kx,
                                           ProductKernelSpec{{kz.per_feature[0]}});
  EXPECT_NEAR(single.z->phi[0], single.z->v_full, 1e-14);

  EXPECT_THROW(ExplainHsicBivariate(x, z.topRows(5), kx, kz), Error);
}

}  // namespace
}  // namespace pkex
