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

#include "pkex/attribution.h"

#include <cmath>
#include <string>

#include "pkex/error.h"

namespace pkex {

std::string_view MethodName(AttributionMethod method) {
  switch (method) {
    case AttributionMethod::kExactNewton:
      return "exact_newton";
    case AttributionMethod::kExactStable:
      return "exact_stable";
    case AttributionMethod::kOracle:
      return "oracle";
    case AttributionMethod::kRegression:
      return "regression";
    case AttributionMethod::kNormalized:
      return "normalized";
  }
  return "unknown";
}

AttributionMethod MethodFromName(std::string_view name) {
  for (auto m : {AttributionMethod::kExactNewton, AttributionMethod::kExactStable,
                 AttributionMethod::kOracle, AttributionMethod::kRegression,
                 AttributionMethod::kNormalized}) {
    if (MethodName(m) == name) return m;
  }
  throw Error(ErrorCode::kSchema,
              "unknown attribution method '" + std::string(name) + "'");
}

double Attribution::EfficiencyGap() const {
  return std::abs(phi.sum() - (v_full - v_empty));
}

AttributionMethod ExactMethod(EspBackend backend) {
  return backend == EspBackend::kNewton ? AttributionMethod::kExactNewton
                                        : AttributionMethod::kExactStable;
}

}  // namespace pkex
