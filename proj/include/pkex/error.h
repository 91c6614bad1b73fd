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

#ifndef PKEX_ERROR_H_
#define PKEX_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace pkex {

enum class ErrorCode {
  kInvalidInput,
  kInvalidSpec,
  kInvalidSubset,
  kInsufficientData,
  kResourceLimit,
  kRankDeficient,
  kIllConditioned,
  kParse,
  kSchema,
};

std::string_view ErrorCodeName(ErrorCode code);

// All library failures are reported through this exception. The code lets
// front ends separate bad input from numerical breakdown.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

  // True for failures caused by the numbers rather than by the input shape.
  bool IsNumerical() const {
    return code_ == ErrorCode::kRankDeficient ||
           code_ == ErrorCode::kIllConditioned;
  }

 private:
  ErrorCode code_;
};

}  // namespace pkex

#endif  // PKEX_ERROR_H_
