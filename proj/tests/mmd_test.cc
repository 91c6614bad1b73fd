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

#include <cmath>

#include <gtest/gtest.h>

#include "pkex/error.h"
#include "pkex/oracle.h"
#include "test_util.h"

namespace pkex {
namespace {

TEST(MmdSquared, IdenticalSamplesGiveZero) {
  TwoSample s;
  s.x.resize(4, 2);
  s.x << 0.5, -1.0, 0.5, -1.0, 0.5, -1.0, 0.5, -1.0;
  s.z = s.x;
  s.kernel = ProductKernelSpec::Isotropic(BaseKernelKind::kRbf, 1.0, 2);
  EXPECT_EQ(MmdSquared(s), 0.0);
  const Attribution a = ExplainMmd(s);
  EXPECT_TRUE((a.phi.array() == 0.0).all());
}

TEST(MmdSquared, HandEvaluation) {
  TwoSample s;
  s.x = FeatureMatrix::Zero(2, 1);
  s.z = FeatureMatrix::Ones(2, 1);
  s.kernel = ProductKernelSpec::Isotropic(BaseKernelKind::kRbf, 1.0, 1);
  EXPECT_NEAR(MmdSquared(s), 2.0 - 2.0 * std::exp(-0.5), 1e-15);
  EXPECT_NEAR(MmdSquared(s), 0.78694, 1e-5);
}

TEST(MmdSquared, SymmetricInSamples) {
  CounterRng rng(1);
  const TwoSample s = testing::RandomTwoSample(5, 7, 3, rng);
  const TwoSample swapped{s.z, s.x, s.kernel};
  EXPECT_NEAR(MmdSquared(s), MmdSquared(swapped), 1e-15);
}

TEST(MmdSquared, Errors) {
  TwoSample s;
  s.x = FeatureMatrix::Zero(1, 1);
  s.z = FeatureMatrix::Zero(3, 1);
  s.kernel = ProductKernelSpec::Isotropic(BaseKernelKind::kRbf, 1.0, 1);
  try {
    MmdSquared(s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInsufficientData);
  }
  s.x = FeatureMatrix::Zero(3, 2);
  EXPECT_THROW(MmdSquared(s), Error);
}

TEST(MmdValueFunction, EmptyFullAndRestriction) {
  CounterRng rng(2);
  const TwoSample s = testing::RandomTwoSample(6, 4, 2, rng);
  EXPECT_NEAR(MmdValueFunction(s, {}), 0.0, 1e-15);
  EXPECT_EQ(MmdValueFunction(s, {0, 1}), MmdSquared(s));
  TwoSample first;
  first.x = s.x.leftCols(1);
  first.z = s.z.leftCols(1);
  first.kernel.per_feature = {s.kernel.per_feature[0]};
  EXPECT_NEAR(MmdValueFunction(s, {0}), MmdSquared(first), 1e-15);
}

TEST(ExplainMmd, SingleFeatureTakesEverything) {
  CounterRng rng(3);
  const TwoSample s = testing::RandomTwoSample(5, 6, 1, rng);
  const Attribution a = ExplainMmd(s);
  EXPECT_NEAR(a.phi[0], MmdSquared(s), 1e-15);
  EXPECT_EQ(a.v_empty, 0.0);
}

TEST(ExplainMmd, MatchesBruteForce) {
  CounterRng rng(4);
  for (std::size_t d = 1; d <= 10; ++d) {
    for (int rep = 0; rep < 3; ++rep) {
      const TwoSample s = testing::RandomTwoSample(6, 6, d, rng);
      const Attribution oracle = ShapleyBruteForce(testing::MmdGame(s));
      for (auto backend : {EspBackend::kNewton, EspBackend::kStable}) {
        const Attribution a = ExplainMmd(s, {backend, 1});
        EXPECT_LE(testing::MaxAbsDiff(a.phi, oracle.phi), 1e-8) << "d=" << d;
        EXPECT_NEAR(a.v_full, oracle.v_full, 1e-12);
      }
    }
  }
}

TEST(ExplainMmd, Efficiency) {
  CounterRng rng(5);
  for (std::size_t d : {2u, 15u, 40u}) {
    const TwoSample s = testing::RandomTwoSample(9, 7, d, rng);
    const Attribution a = ExplainMmd(s, {EspBackend::kStable, 1});
    const double mmd = MmdSquared(s);
    EXPECT_NEAR(a.phi.sum(), mmd, 1e-8 * std::abs(mmd)) << "d=" << d;
    EXPECT_NEAR(a.v_full, mmd, 1e-12 * std::abs(mmd));
  }
}

TEST(ExplainMmd, SampleSymmetry) {
  CounterRng rng(6);
  const TwoSample s = testing::RandomTwoSample(8, 5, 6, rng);
  const Attribution a = ExplainMmd(s);
  const Attribution b = ExplainMmd({s.z, s.x, s.kernel});
  EXPECT_LE(testing::MaxAbsDiff(a.phi, b.phi), 1e-12);
}

TEST(ExplainMmd, DuplicatedFeatureSplitsEqually) {
  CounterRng rng(7);
  const TwoSample s = testing::RandomTwoSample(7, 7, 4, rng);
  TwoSample dup;
  dup.x.resize(7, 5);
  dup.z.resize(7, 5);
  dup.x << s.x, s.x.col(1);
  dup.z << s.z, s.z.col(1);
  dup.kernel = s.kernel;
  dup.kernel.per_feature.push_back(s.kernel.per_feature[1]);
  const Attribution a = ExplainMmd(dup);
  EXPECT_NEAR(a.phi[1], a.phi[4], 1e-8);
}

TEST(ExplainMmd, ThreadCountDoesNotChangeResult) {
  CounterRng rng(8);
  const TwoSample s = testing::RandomTwoSample(20, 15, 5, rng);
  const Attribution one = ExplainMmd(s, {EspBackend::kStable, 1});
  const Attribution many = ExplainMmd(s, {EspBackend::kStable, 3});
  EXPECT_EQ(one.phi, many.phi);
  EXPECT_EQ(one.v_full, many.v_full);
}

TEST(PooledMedianKernel, UsesBothSamples) {
  FeatureMatrix x(2, 1);
  x << 0.0, 0.0;
  FeatureMatrix z(2, 1);
  z << 4.0, 4.0;
  // Pooled distances {0, 4, 4, 4, 4, 0}: median 4.
  const auto spec = PooledMedianKernel(x, z);
  EXPECT_EQ(spec.per_feature[0].bandwidth, 4.0);
  EXPECT_EQ(spec.per_feature[0].kind, BaseKernelKind::kRbf);
}

}  // namespace
}  // namespace pkex
