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

#include "pkex/esp.h"

#include <cmath>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "pkex/error.h"

namespace pkex {
namespace {

Eigen::Index CheckShapes(std::span<const Eigen::ArrayXd> values,
                         std::size_t max_order,
                         std::optional<Eigen::Index> length) {
  if (max_order > values.size()) {
    throw Error(ErrorCode::kInvalidInput,
                "ESP order " + std::to_string(max_order) +
                    " exceeds collection size " +
                    std::to_string(values.size()));
  }
  if (values.empty()) {
    if (!length) {
      throw Error(ErrorCode::kInvalidInput,
                  "empty ESP collection needs an explicit array length");
    }
    return *length;
  }
  const Eigen::Index size = values.front().size();
  if (length && *length != size) {
    throw Error(ErrorCode::kInvalidInput, "ESP array length mismatch");
  }
  for (const auto& v : values) {
    if (v.size() != size) {
      throw Error(ErrorCode::kInvalidInput,
                  "ESP inputs must all have the same shape");
    }
  }
  return size;
}

// The alternating recursion cancels heavily, so it runs in extended
// precision and rounds once at the end.
using WideFloat = boost::multiprecision::cpp_bin_float_100;
constexpr std::size_t kNewtonQuadMaxSize = 24;

template <typename T>
void NewtonRecursion(std::span<const Eigen::ArrayXd> values,
                     std::size_t max_order, EspTable& table) {
  const std::size_t p = values.size();
  std::vector<T> z(p);
  std::vector<T> powers(p);
  std::vector<T> power_sums(max_order);  // power_sums[r - 1] = sum_i z_i^r
  std::vector<T> e(max_order + 1);
  for (Eigen::Index k = 0; k < table.orders[0].size(); ++k) {
    for (std::size_t i = 0; i < p; ++i) {
      z[i] = static_cast<T>(values[i][k]);
      powers[i] = z[i];
    }
    for (std::size_t r = 1; r <= max_order; ++r) {
      T sum = 0;
      for (std::size_t i = 0; i < p; ++i) {
        sum += powers[i];
        if (r < max_order) powers[i] *= z[i];
      }
      power_sums[r - 1] = sum;
    }
    e[0] = 1;
    for (std::size_t q = 1; q <= max_order; ++q) {
      T acc = 0;
      for (std::size_t r = 1; r <= q; ++r) {
        if (r % 2 == 1) {
          acc += e[q - r] * power_sums[r - 1];
        } else {
          acc -= e[q - r] * power_sums[r - 1];
        }
      }
      e[q] = acc / static_cast<T>(q);
      table.orders[q][k] = static_cast<double>(e[q]);
    }
  }
}

}  // namespace

std::string_view BackendName(EspBackend backend) {
  return backend == EspBackend::kNewton ? "newton" : "stable";
}

ShapleyWeights ComputeShapleyWeights(std::size_t players) {
  if (players == 0) {
    throw Error(ErrorCode::kInvalidInput, "Shapley weights need d >= 1");
  }
  ShapleyWeights w;
  w.mu.resize(players);
  const double d = static_cast<double>(players);
  w.mu[0] = 1.0 / d;
  for (std::size_t q = 0; q + 1 < players; ++q) {
    const double qd = static_cast<double>(q);
    w.mu[q + 1] = w.mu[q] * (qd + 1.0) / (d - qd - 1.0);
  }
  return w;
}

EspTable EspNewton(std::span<const Eigen::ArrayXd> values,
                   std::size_t max_order, std::optional<Eigen::Index> length) {
  const Eigen::Index size = CheckShapes(values, max_order, length);
  EspTable table;
  table.orders.assign(max_order + 1, Eigen::ArrayXd::Ones(size));
  if (max_order == 0) return table;
  if (values.size() <= kNewtonQuadMaxSize) {
    NewtonRecursion<__float128>(values, max_order, table);
  } else {
    NewtonRecursion<WideFloat>(values, max_order, table);
  }
  return table;
}

EspTable EspStable(std::span<const Eigen::ArrayXd> values,
                   std::size_t max_order, std::optional<Eigen::Index> length) {
  const Eigen::Index size = CheckShapes(values, max_order, length);
  const std::size_t p = values.size();

  double scale = 0.0;
  for (const auto& v : values) {
    if (v.size() > 0) scale = std::max(scale, v.abs().maxCoeff());
  }
  if (scale == 0.0) scale = 1.0;
  const double inv_scale = 1.0 / scale;

  // coeff[k] is the coefficient of t^k; the leading one stays 1.
  std::vector<Eigen::ArrayXd> coeff(p + 1, Eigen::ArrayXd::Zero(size));
  coeff[0].setOnes();
  Eigen::ArrayXd z(size);
  for (std::size_t i = 1; i <= p; ++i) {
    z = values[i - 1] * inv_scale;
    coeff[i] = coeff[i - 1];
    for (std::size_t k = i - 1; k >= 1; --k) {
      coeff[k] = coeff[k - 1] - z * coeff[k];
    }
    coeff[0] = -z * coeff[0];
  }

  EspTable table;
  table.orders.reserve(max_order + 1);
  double scale_power = 1.0;
  for (std::size_t q = 0; q <= max_order; ++q) {
    const double sign = (q % 2 == 0) ? 1.0 : -1.0;
    table.orders.push_back(coeff[p - q] * (sign * scale_power));
    scale_power *= scale;
  }
  return table;
}

EspTable ComputeEsp(EspBackend backend, std::span<const Eigen::ArrayXd> values,
                    std::size_t max_order, std::optional<Eigen::Index> length) {
  return backend == EspBackend::kNewton
             ? EspNewton(values, max_order, length)
             : EspStable(values, max_order, length);
}

Eigen::ArrayXd WeightedEspSum(const EspTable& table,
                              const ShapleyWeights& weights) {
  if (table.orders.size() != weights.players()) {
    throw Error(ErrorCode::kInvalidInput,
                "ESP table has " + std::to_string(table.orders.size()) +
                    " orders but the weights cover " +
                    std::to_string(weights.players()) + " players");
  }
  Eigen::ArrayXd psi = table.orders[0] * weights.mu[0];
  for (std::size_t q = 1; q < table.orders.size(); ++q) {
    psi += table.orders[q] * weights.mu[q];
  }
  return psi;
}

}  // namespace pkex
