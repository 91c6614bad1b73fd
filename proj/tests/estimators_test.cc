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

#include "pkex/estimators.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "pkex/error.h"
#include "pkex/model.h"
#include "test_util.h"

namespace pkex {
namespace {

ValueFunctionHandle AdditiveGame(const std::vector<double>& c, double base) {
  return {[c, base](CoalitionMask s) {
            double v = base;
            for (std::size_t j = 0; j < c.size(); ++j) {
              if (s >> j & 1U) v += c[j];
            }
            return v;
          },
          c.size()};
}

TEST(SampleCoalitionsPaired, PairsAreComplementsAndProper) {
  for (std::size_t d : {2u, 3u, 10u, 50u, 64u}) {
    const auto sample = SampleCoalitionsPaired(d, 200, 42);
    ASSERT_EQ(sample.masks.size(), 200u);
    const CoalitionMask full = d == 64 ? ~0ULL : (1ULL << d) - 1;
    for (std::size_t k = 0; k < sample.masks.size(); k += 2) {
      EXPECT_EQ(sample.masks[k] ^ sample.masks[k + 1], full);
      EXPECT_EQ(sample.masks[k] & sample.masks[k + 1], 0u);
    }
    for (const auto m : sample.masks) {
      EXPECT_NE(m, 0u);
      EXPECT_NE(m, full);
    }
  }
}

TEST(SampleCoalitionsPaired, TwoFeaturesYieldBothSingletons) {
  const auto sample = SampleCoalitionsPaired(2, 2, 7);
  const std::set<CoalitionMask> masks(sample.masks.begin(), sample.masks.end());
  EXPECT_EQ(masks, (std::set<CoalitionMask>{1, 2}));
}

TEST(SampleCoalitionsPaired, DeterministicAndValidated) {
  const auto a = SampleCoalitionsPaired(12, 100, 5);
  const auto b = SampleCoalitionsPaired(12, 100, 5);
  EXPECT_EQ(a.masks, b.masks);
  EXPECT_NE(a.masks, SampleCoalitionsPaired(12, 100, 6).masks);
  EXPECT_THROW(SampleCoalitionsPaired(12, 101, 5), Error);
  EXPECT_THROW(SampleCoalitionsPaired(1, 10, 5), Error);
}

TEST(SampleCoalitionsPaired, SizesFollowShapleyKernel) {
  const std::size_t d = 6;
  const auto sample = SampleCoalitionsPaired(d, 200000, 9);
  std::vector<double> freq(d, 0.0);
  for (std::size_t k = 0; k < sample.masks.size(); k += 2) {
    freq[std::popcount(sample.masks[k])] += 1.0;
  }
  double norm = 0.0;
  for (std::size_t s = 1; s < d; ++s) norm += 1.0 / (s * (d - s));
  for (std::size_t s = 1; s < d; ++s) {
    const double expected = (1.0 / (s * (d - s))) / norm;
    EXPECT_NEAR(freq[s] / 100000.0, expected, 0.01) << "s=" << s;
  }
}

TEST(KernelShapRegression, CompleteDesignIsExact) {
  CounterRng rng(1);
  for (std::size_t d = 2; d <= 8; ++d) {
    const FittedModel m = testing::RandomModel(15, d, rng);
    const Eigen::VectorXd x = testing::RandomPoint(d, rng);
    const auto game = testing::ModelGame(m, x);
    const Attribution exact = ShapleyBruteForce(game);
    const Attribution fit = KernelShapRegression(game, EnumerateCoalitions(d));
    EXPECT_LE(testing::MaxAbsDiff(fit.phi, exact.phi), 1e-8) << "d=" << d;
    EXPECT_EQ(fit.method, AttributionMethod::kRegression);
  }
}

TEST(KernelShapRegression, AdditiveGameRecoveredFromAnySample) {
  const std::vector<double> c = {1.0, -0.5, 2.0, 0.0, 3.5, -1.5};
  const auto game = AdditiveGame(c, 0.75);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const Attribution a = KernelShapRegression(game, SampleCoalitionsPaired(6, 40, seed));
    for (std::size_t j = 0; j < c.size(); ++j) EXPECT_NEAR(a.phi[j], c[j], 1e-10);
    EXPECT_NEAR(a.phi.sum(), a.v_full - a.v_empty, 1e-12);
  }
}

TEST(KernelShapRegression, RankDeficientDesignIsReported) {
  const auto game = AdditiveGame({1, 2, 3, 4, 5, 6, 7, 8}, 0.0);
  try {
    KernelShapRegression(game, SampleCoalitionsPaired(8, 2, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kRankDeficient);
    EXPECT_TRUE(e.IsNumerical());
  }
}

TEST(KernelShapRegression, DeterministicUnderSeed) {
  CounterRng rng(2);
  const FittedModel m = testing::RandomModel(20, 10, rng);
  const Eigen::VectorXd x = testing::RandomPoint(10, rng);
  const auto game = testing::ModelGame(m, x);
  const Attribution a = KernelShapRegression(game, SampleCoalitionsPaired(10, 200, 3));
  const Attribution b = KernelShapRegression(game, SampleCoalitionsPaired(10, 200, 3));
  EXPECT_EQ(a.phi, b.phi);
}

TEST(KernelShapRegression, DuplicateMasksAccumulateWeight) {
  CounterRng rng(3);
  const FittedModel m = testing::RandomModel(10, 4, rng);
  const auto game = testing::ModelGame(m, testing::RandomPoint(4, rng));
  CoalitionSample merged = EnumerateCoalitions(4);
  CoalitionSample split = merged;
  // Same total weight per mask, spread over two copies.
  split.masks.insert(split.masks.end(), merged.masks.begin(), merged.masks.end());
  split.weights.insert(split.weights.end(), merged.weights.begin(), merged.weights.end());
  for (auto& w : split.weights) w *= 0.5;
  EXPECT_LE(testing::MaxAbsDiff(KernelShapRegression(game, merged).phi,
                                KernelShapRegression(game, split).phi),
            1e-12);
}

TEST(RelativeDeviation, Examples) {
  Attribution exact;
  exact.phi = Eigen::Vector2d(1.0, 2.0);
  Attribution approx;
  approx.phi = Eigen::Vector2d(1.1, 1.8);
  EXPECT_NEAR(ComputeRelativeDeviation(exact, approx).value, 0.2, 1e-15);
  EXPECT_EQ(ComputeRelativeDeviation(exact, exact).value, 0.0);

  Attribution se = exact;
  Attribution sa = approx;
  se.phi *= -3.0;
  sa.phi *= -3.0;
  EXPECT_NEAR(ComputeRelativeDeviation(se, sa).value, 0.2, 1e-15);

  exact.phi = Eigen::Vector3d(0.0, 1.0, 2.0);
  approx.phi = Eigen::Vector3d(0.5, 1.1, 1.8);
  const auto r = ComputeRelativeDeviation(exact, approx);
  EXPECT_EQ(r.skipped, 1u);
  EXPECT_NEAR(r.value, 0.2, 1e-15);
}

}  // namespace
}  // namespace pkex
