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

#include "pkex/error.h"

namespace pkex {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidInput:
      return "invalid_input";
    case ErrorCode::kInvalidSpec:
      return "invalid_spec";
    case ErrorCode::kInvalidSubset:
      return "invalid_subset";
    case ErrorCode::kInsufficientData:
      return "insufficient_data";
    case ErrorCode::kResourceLimit:
      return "resource_limit";
    case ErrorCode::kRankDeficient:
      return "rank_deficient";
    case ErrorCode::kIllConditioned:
      return "ill_conditioned";
    case ErrorCode::kParse:
      return "parse_error";
    case ErrorCode::kSchema:
      return "schema_error";
  }
  return "unknown";
}

}  // namespace pkex
