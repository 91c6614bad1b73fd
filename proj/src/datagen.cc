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

#include "pkex/datagen.h"

#include <cmath>
#include <string>

#include "pkex/error.h"
#include "pkex/rng.h"

namespace pkex {
namespace {

void CheckSizes(std::size_t n, std::size_t d) {
  if (n == 0 || d == 0) {
    throw Error(ErrorCode::kInvalidInput, "generator sizes must be positive");
  }
}

FeatureMatrix StandardNormal(std::size_t n, std::size_t d, CounterRng& rng) {
  FeatureMatrix x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    for (Eigen::Index c = 0; c < x.cols(); ++c) x(r, c) = rng.Normal();
  }
  return x;
}

}  // namespace

LinearData GenLinear(std::size_t n, std::size_t d, double noise_sigma,
                     std::uint64_t seed) {
  CheckSizes(n, d);
  if (!(noise_sigma >= 0.0)) {
    throw Error(ErrorCode::kInvalidInput, "noise sigma must be >= 0");
  }
  CounterRng rng(seed);
  LinearData out;
  out.weights.resize(static_cast<Eigen::Index>(d));
  for (auto& w : out.weights) w = rng.Normal();
  out.x = StandardNormal(n, d, rng);
  out.y = out.x * out.weights;
  for (auto& y : out.y) y += noise_sigma * rng.Normal();
  return out;
}

NonlinearTask NonlinearTaskFromName(std::string_view name) {
  if (name == "poly5") return NonlinearTask::kPoly5;
  if (name == "poly10") return NonlinearTask::kPoly10;
  if (name == "sqexp") return NonlinearTask::kSqExp;
  throw Error(ErrorCode::kInvalidInput,
              "unknown nonlinear task '" + std::string(name) + "'");
}

NonlinearData GenNonlinear(NonlinearTask task, std::size_t n, std::size_t d,
                           std::uint64_t seed) {
  CheckSizes(n, d);
  if (d < 3) {
    throw Error(ErrorCode::kInvalidInput, "nonlinear tasks need d >= 3");
  }
  CounterRng rng(seed);
  NonlinearData out;
  out.x = StandardNormal(n, d, rng);
  const std::size_t active = (d + 2) / 3;
  for (std::size_t j = 0; j < active; ++j) out.active.push_back(j);
  const auto head = out.x.leftCols(static_cast<Eigen::Index>(active));

  if (task == NonlinearTask::kSqExp) {
    out.y = (head.array().square().rowwise().sum() /
             static_cast<double>(active)).exp().matrix();
    return out;
  }
  const double degree = task == NonlinearTask::kPoly5 ? 5.0 : 10.0;
  out.y = head.rowwise().sum().array().pow(degree).matrix();
  if (n > 1) {
    const double mean = out.y.mean();
    const double sd = std::sqrt((out.y.array() - mean).square().sum() /
                                static_cast<double>(n - 1));
    if (sd > 0.0) out.y /= sd;
  }
  return out;
}

SamplePair GenMmdPair(std::size_t n, std::size_t d, double dof,
                      std::uint64_t seed) {
  CheckSizes(n, d);
  if (n < 2) throw Error(ErrorCode::kInvalidInput, "need at least two rows");
  if (d % 2 != 0) {
    throw Error(ErrorCode::kInvalidInput, "feature count must be even");
  }
  if (!(dof > 2.0)) {
    throw Error(ErrorCode::kInvalidInput,
                "Student-t degrees of freedom must exceed 2");
  }
  CounterRng rng(seed);
  SamplePair out;
  out.x = StandardNormal(n, d, rng);
  out.z.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  const auto half = static_cast<Eigen::Index>(d / 2);
  for (Eigen::Index r = 0; r < out.z.rows(); ++r) {
    for (Eigen::Index c = 0; c < out.z.cols(); ++c) {
      out.z(r, c) = c < half ? rng.Normal() : rng.StudentT(dof);
    }
  }
  return out;
}

}  // namespace pkex
