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

#ifndef PKEX_RNG_H_
#define PKEX_RNG_H_

#include <cstddef>
#include <cstdint>
#include <optional>

namespace pkex {

// Counter-based 64-bit generator. Output i is the SplitMix64 finalizer
// applied to seed + (i + 1) * 0x9E3779B97F4A7C15, so any stream position can
// be reproduced from (seed, counter) alone. Derived variates use only
// portable arithmetic (no std:: distributions) so draws are identical across
// standard libraries.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t counter = 0)
      : seed_(seed), counter_(counter) {}

  std::uint64_t NextU64();

  // Uniform on the open interval (0, 1).
  double Uniform();

  // Uniform integer in [0, bound). bound must be positive.
  std::uint64_t UniformInt(std::uint64_t bound);

  // Standard normal via Box-Muller; the second variate of each pair is cached.
  double Normal();

  // Gamma(shape, 1) via Marsaglia-Tsang.
  double Gamma(double shape);

  // Student-t with `dof` degrees of freedom: N / sqrt(chi2(dof) / dof).
  double StudentT(double dof);

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_;
  std::optional<double> cached_normal_;
};

// Derives an independent seed for sub-stream `stream` of `seed`.
std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t stream);

}  // namespace pkex

#endif  // PKEX_RNG_H_
