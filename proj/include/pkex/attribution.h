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

#ifndef PKEX_ATTRIBUTION_H_
#define PKEX_ATTRIBUTION_H_

#include <cstddef>
#include <string_view>

#include <Eigen/Dense>

#include "pkex/esp.h"

namespace pkex {

enum class AttributionMethod {
  kExactNewton,
  kExactStable,
  kOracle,
  kRegression,
  kNormalized,
};

std::string_view MethodName(AttributionMethod method);
AttributionMethod MethodFromName(std::string_view name);

// Per-feature Shapley values of one game. Efficiency:
// phi.sum() == v_full - v_empty.
struct Attribution {
  Eigen::VectorXd phi;
  double v_full = 0.0;
  double v_empty = 0.0;
  AttributionMethod method = AttributionMethod::kExactStable;

  // |sum(phi) - (v_full - v_empty)|
  double EfficiencyGap() const;
};

AttributionMethod ExactMethod(EspBackend backend);

struct ExplainOptions {
  EspBackend backend = EspBackend::kStable;
  // Worker threads for batched or pair-blocked work; 0 = all cores.
  int threads = 0;
};

}  // namespace pkex

#endif  // PKEX_ATTRIBUTION_H_
