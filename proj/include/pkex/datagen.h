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

#ifndef PKEX_DATAGEN_H_
#define PKEX_DATAGEN_H_

#include <cstddef>
#include <cstdint>
#include <string_view>

#include <Eigen/Dense>

#include "pkex/kernels.h"

namespace pkex {

// All generators draw from CounterRng(seed) in row-major order, so outputs
// are reproducible bit for bit from the seed.

struct LinearData {
  FeatureMatrix x;
  Eigen::VectorXd y;
  Eigen::VectorXd weights;
};

// x ~ N(0, I); w ~ N(0, I) drawn first; y = x w + N(0, noise_sigma^2).
LinearData GenLinear(std::size_t n, std::size_t d, double noise_sigma,
                     std::uint64_t seed);

enum class NonlinearTask { kPoly5, kPoly10, kSqExp };

NonlinearTask NonlinearTaskFromName(std::string_view name);

struct NonlinearData {
  FeatureMatrix x;
  Eigen::VectorXd y;
  FeatureSet active;
};

// Only the first ceil(d / 3) features drive the target. Polynomial tasks use
// (sum of active features)^degree divided by its sample standard deviation;
// kSqExp uses exp(sum of x_i^2 / |S|) over the active set.
NonlinearData GenNonlinear(NonlinearTask task, std::size_t n, std::size_t d,
                           std::uint64_t seed);

struct SamplePair {
  FeatureMatrix x;
  FeatureMatrix z;
};

// First d/2 columns standard normal in both samples; the remaining columns
// are standard normal in x and Student-t(dof) in z.
SamplePair GenMmdPair(std::size_t n, std::size_t d, double dof,
                      std::uint64_t seed);

inline constexpr double kDefaultStudentDof = 3.0;

}  // namespace pkex

#endif  // PKEX_DATAGEN_H_
