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

#ifndef PKEX_ORACLE_H_
#define PKEX_ORACLE_H_

#include <cstddef>
#include <cstdint>
#include <functional>

#include "pkex/attribution.h"
#include "pkex/kernels.h"

namespace pkex {

// Bit j of the mask set means feature j is in the coalition.
using CoalitionMask = std::uint64_t;

// Set function over the coalitions of `players` features. Must be
// deterministic.
struct ValueFunctionHandle {
  std::function<double(CoalitionMask)> eval;
  std::size_t players = 0;
};

FeatureSet MaskToSet(CoalitionMask mask, std::size_t players);

inline constexpr std::size_t kBruteForceMaxPlayers = 20;

// Shapley values straight from the definition. Evaluates every one of the
// 2^d coalitions exactly once.
Attribution ShapleyBruteForce(const ValueFunctionHandle& v);

}  // namespace pkex

#endif  // PKEX_ORACLE_H_
