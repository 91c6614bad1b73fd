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

#ifndef PKEX_MODEL_IO_H_
#define PKEX_MODEL_IO_H_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "pkex/attribution.h"
#include "pkex/kernels.h"
#include "pkex/model.h"

namespace pkex {

inline constexpr int kModelSchemaVersion = 1;

// Kernel ridge regression: alpha = (K + ridge I)^{-1} y with K the product
// Gram of x, bias 0. Throws kIllConditioned when the reciprocal condition
// estimate of K + ridge I is below 1e-12.
FittedModel FitKrr(const FeatureMatrix& x, const Eigen::VectorXd& y,
                   const ProductKernelSpec& kernel, double ridge);

// A CSV file split into feature columns and an optional target column.
struct Table {
  std::vector<std::string> feature_names;
  FeatureMatrix x;
  std::string target_name;
  std::optional<Eigen::VectorXd> target;
  // Non-numeric targets are coded 0, 1, ... in order of first appearance.
  bool target_categorical = false;
  std::vector<std::string> target_levels;
};

// Header row required. Every feature cell must parse as a finite number.
// A file holding only the target column yields zero feature columns.
Table ParseTable(std::istream& in,
                 std::optional<std::string_view> target_column = std::nullopt,
                 std::string_view source = "<stream>");
Table LoadTable(const std::filesystem::path& path,
                std::optional<std::string_view> target_column = std::nullopt);

// Writes with 17 significant digits so values read back bit-exactly.
void WriteTable(std::ostream& out, const std::vector<std::string>& names,
                const Eigen::MatrixXd& values);
void SaveTable(const std::filesystem::path& path,
               const std::vector<std::string>& names,
               const Eigen::MatrixXd& values);

nlohmann::json KernelToJson(const ProductKernelSpec& spec);
ProductKernelSpec KernelFromJson(const nlohmann::json& j);

nlohmann::json AttributionToJson(const Attribution& a);
Attribution AttributionFromJson(const nlohmann::json& j);

// {"schema_version":1, "alpha":[...], "bias":b, "kernel":{...},
//  "train_X": [[...], ...] | "relative/or/absolute.csv"}
nlohmann::json ModelToJson(const FittedModel& model);
// `base_dir` resolves a relative train_X path.
FittedModel ModelFromJson(const nlohmann::json& j,
                          const std::filesystem::path& base_dir = {});

void SaveModel(const FittedModel& model, const std::filesystem::path& path);
FittedModel LoadModel(const std::filesystem::path& path);

}  // namespace pkex

#endif  // PKEX_MODEL_IO_H_
