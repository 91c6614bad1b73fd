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

#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "pkex/error.h"
#include "pkex/rng.h"

namespace pkex {
namespace {

void CheckPlayers(std::size_t d) {
  if (d < 2) {
    throw Error(ErrorCode::kInvalidInput,
                "coalition sampling needs at least two features");
  }
  if (d > kMaxRegressionPlayers) {
    throw Error(ErrorCode::kResourceLimit,
                "regression baseline supports at most " +
                    std::to_string(kMaxRegressionPlayers) + " features");
  }
}

CoalitionMask FullMask(std::size_t d) {
  return d == 64 ? ~CoalitionMask{0} : (CoalitionMask{1} << d) - 1;
}

double LogChoose(std::size_t n, std::size_t k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace

CoalitionSample SampleCoalitionsPaired(std::size_t players, std::size_t count,
                                       std::uint64_t seed) {
  CheckPlayers(players);
  if (count < 2 || count % 2 != 0) {
    throw Error(ErrorCode::kInvalidInput,
                "paired sampling needs an even coalition count >= 2, got " +
                    std::to_string(count));
  }
  const std::size_t d = players;
  std::vector<double> cdf(d - 1);
  double total = 0.0;
  for (std::size_t s = 1; s < d; ++s) {
    total += static_cast<double>(d - 1) / static_cast<double>(s * (d - s));
    cdf[s - 1] = total;
  }
  for (auto& c : cdf) c /= total;

  CounterRng rng(seed);
  CoalitionSample out;
  out.players = d;
  out.masks.reserve(count);
  std::vector<std::size_t> order(d);
  const CoalitionMask full = FullMask(d);
  for (std::size_t draw = 0; draw < count / 2; ++draw) {
    const double u = rng.Uniform();
    std::size_t size = 1;
    while (size < d - 1 && u > cdf[size - 1]) ++size;
    std::iota(order.begin(), order.end(), std::size_t{0});
    CoalitionMask mask = 0;
    for (std::size_t k = 0; k < size; ++k) {
      const std::size_t pick = k + rng.UniformInt(d - k);
      std::swap(order[k], order[pick]);
      mask |= CoalitionMask{1} << order[k];
    }
    out.masks.push_back(mask);
    out.masks.push_back(full & ~mask);
  }
  out.weights.assign(count, 1.0 / static_cast<double>(count));
  return out;
}

CoalitionSample EnumerateCoalitions(std::size_t players) {
  CheckPlayers(players);
  if (players > 30) {
    throw Error(ErrorCode::kResourceLimit,
                "full coalition enumeration is limited to 30 features");
  }
  const std::size_t d = players;
  CoalitionSample out;
  out.players = d;
  const CoalitionMask full = FullMask(d);
  for (CoalitionMask s = 1; s < full; ++s) {
    const auto size = static_cast<std::size_t>(std::popcount(s));
    out.masks.push_back(s);
    out.weights.push_back(static_cast<double>(d - 1) /
                          (std::exp(LogChoose(d, size)) *
                           static_cast<double>(size * (d - size))));
  }
  return out;
}

Attribution KernelShapRegression(const ValueFunctionHandle& v,
                                 const CoalitionSample& coalitions) {
  const std::size_t d = v.players;
  if (coalitions.players != d) {
    throw Error(ErrorCode::kInvalidInput,
                "coalition sample and value function disagree on d");
  }
  if (coalitions.masks.empty() ||
      coalitions.masks.size() != coalitions.weights.size()) {
    throw Error(ErrorCode::kInvalidInput, "empty coalition sample");
  }
  CheckPlayers(d);
  const CoalitionMask full = FullMask(d);

  std::map<CoalitionMask, double> merged;
  for (std::size_t k = 0; k < coalitions.masks.size(); ++k) {
    const CoalitionMask s = coalitions.masks[k];
    if (s == 0 || s == full || (s & ~full) != 0) {
      throw Error(ErrorCode::kInvalidInput,
                  "coalition sample contains an improper mask");
    }
    merged[s] += coalitions.weights[k];
  }

  const double v_empty = v.eval(0);
  const double v_full = v.eval(full);
  const double delta = v_full - v_empty;
  const std::size_t last = d - 1;

  const auto rows = static_cast<Eigen::Index>(merged.size());
  const auto cols = static_cast<Eigen::Index>(d - 1);
  Eigen::MatrixXd design(rows, cols);
  Eigen::VectorXd target(rows);
  Eigen::Index r = 0;
  for (const auto& [mask, weight] : merged) {
    const double root = std::sqrt(weight);
    const double in_last = static_cast<double>(mask >> last & 1U);
    for (std::size_t j = 0; j < last; ++j) {
      design(r, static_cast<Eigen::Index>(j)) =
          root * (static_cast<double>(mask >> j & 1U) - in_last);
    }
    target[r] = root * (v.eval(mask) - v_empty - in_last * delta);
    ++r;
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < cols) {
    throw Error(ErrorCode::kRankDeficient,
                "coalition design has rank " + std::to_string(qr.rank()) +
                    " but " + std::to_string(cols) +
                    " free coefficients; sample more coalitions");
  }
  const Eigen::VectorXd head = qr.solve(target);

  Attribution out;
  out.phi.resize(static_cast<Eigen::Index>(d));
  out.phi.head(cols) = head;
  out.phi[cols] = delta - head.sum();
  out.v_full = v_full;
  out.v_empty = v_empty;
  out.method = AttributionMethod::kRegression;
  return out;
}

RelativeDeviation ComputeRelativeDeviation(const Attribution& exact,
                                           const Attribution& approx) {
  if (exact.phi.size() != approx.phi.size()) {
    throw Error(ErrorCode::kInvalidInput,
                "attributions have different feature counts");
  }
  RelativeDeviation out;
  for (Eigen::Index j = 0; j < exact.phi.size(); ++j) {
    if (exact.phi[j] == 0.0) {
      ++out.skipped;
      continue;
    }
    out.value += std::abs(exact.phi[j] - approx.phi[j]) / std::abs(exact.phi[j]);
  }
  return out;
}

}  // namespace pkex
