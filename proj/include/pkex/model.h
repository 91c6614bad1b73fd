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

#ifndef PKEX_MODEL_H_
#define PKEX_MODEL_H_

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "pkex/attribution.h"
#include "pkex/kernels.h"

namespace pkex {

// Decision function f(x) = sum_i alpha_i k(x, X_i) + bias with a product
// kernel k. Covers SVM/SVR duals, kernel ridge and GP posterior means.
struct FittedModel {
  Eigen::VectorXd alpha;
  FeatureMatrix train_x;
  ProductKernelSpec kernel;
  double bias = 0.0;

  std::size_t rows() const { return static_cast<std::size_t>(train_x.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(train_x.cols()); }

  void Validate() const;
  double Predict(const Eigen::Ref<const Eigen::VectorXd>& x) const;
};

// v_x(S) = alpha^T k_S(X_S, x_S). The bias is not part of the game, so
// v_x(all) = f(x) - bias and v_x({}) = sum(alpha).
double ValueFunction(const FittedModel& model,
                     const Eigen::Ref<const Eigen::VectorXd>& x,
                     const FeatureSet& subset);

// Value of the empty coalition, sum(alpha).
double BaselineValue(const FittedModel& model);

// Exact Shapley values of v_x in O(n d^2).
Attribution ExplainInstance(const FittedModel& model,
                            const Eigen::Ref<const Eigen::VectorXd>& x,
                            EspBackend backend = EspBackend::kStable);

// One attribution per row of `points`; rows are explained in parallel.
std::vector<Attribution> ExplainBatch(const FittedModel& model,
                                      const FeatureMatrix& points,
                                      const ExplainOptions& options = {});

// Shifts every phi_j by v_empty / d so the values add up to v_full, i.e. the
// game with k_{} = 0. The baseline is split equally over the d features.
Attribution NormalizedAttribution(const Attribution& attribution);

}  // namespace pkex

#endif  // PKEX_MODEL_H_
