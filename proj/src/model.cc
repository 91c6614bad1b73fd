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

#include "pkex/model.h"

#include <cmath>
#include <string>

#include "pkex/error.h"
#include "pkex/parallel.h"
#include "product_game.h"

namespace pkex {
namespace {

void CheckPoint(const FittedModel& model,
                const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (static_cast<std::size_t>(x.size()) != model.dim()) {
    throw Error(ErrorCode::kInvalidInput,
                "instance has " + std::to_string(x.size()) +
                    " features but the model expects " +
                    std::to_string(model.dim()));
  }
  if (!x.allFinite()) {
    throw Error(ErrorCode::kInvalidInput, "instance has non-finite entries");
  }
}

}  // namespace

void FittedModel::Validate() const {
  ValidateFeatureMatrix(train_x, "training matrix");
  kernel.Validate();
  if (kernel.dim() != dim()) {
    throw Error(ErrorCode::kInvalidInput,
                "kernel has " + std::to_string(kernel.dim()) +
                    " features but the training matrix has " +
                    std::to_string(dim()));
  }
  if (static_cast<std::size_t>(alpha.size()) != rows()) {
    throw Error(ErrorCode::kInvalidInput,
                "alpha has " + std::to_string(alpha.size()) +
                    " entries but there are " + std::to_string(rows()) +
                    " training rows");
  }
  if (!alpha.allFinite() || !std::isfinite(bias)) {
    throw Error(ErrorCode::kInvalidInput, "non-finite model coefficients");
  }
}

double FittedModel::Predict(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  CheckPoint(*this, x);
  Eigen::ArrayXd k = Eigen::ArrayXd::Ones(train_x.rows());
  for (std::size_t j = 0; j < dim(); ++j) {
    k *= FeatureKernelVector(kernel, j, train_x, x).array();
  }
  return alpha.dot(k.matrix()) + bias;
}

double ValueFunction(const FittedModel& model,
                     const Eigen::Ref<const Eigen::VectorXd>& x,
                     const FeatureSet& subset) {
  CheckPoint(model, x);
  Eigen::ArrayXd k = Eigen::ArrayXd::Ones(model.train_x.rows());
  for (const std::size_t j : subset) {
    if (j >= model.dim()) {
      throw Error(ErrorCode::kInvalidSubset,
                  "feature index " + std::to_string(j) + " out of range");
    }
    k *= FeatureKernelVector(model.kernel, j, model.train_x, x).array();
  }
  return model.alpha.dot(k.matrix());
}

double BaselineValue(const FittedModel& model) { return model.alpha.sum(); }

Attribution ExplainInstance(const FittedModel& model,
                            const Eigen::Ref<const Eigen::VectorXd>& x,
                            EspBackend backend) {
  CheckPoint(model, x);
  const std::size_t d = model.dim();
  std::vector<Eigen::ArrayXd> z;
  z.reserve(d);
  Eigen::ArrayXd full = Eigen::ArrayXd::Ones(model.train_x.rows());
  for (std::size_t j = 0; j < d; ++j) {
    z.push_back(FeatureKernelVector(model.kernel, j, model.train_x, x).array());
    full *= z.back();
  }
  Attribution out;
  out.phi = internal::ProductGameShapley(z, model.alpha.array(), backend,
                                         ComputeShapleyWeights(d));
  out.v_full = model.alpha.dot(full.matrix());
  out.v_empty = BaselineValue(model);
  out.method = ExactMethod(backend);
  return out;
}

std::vector<Attribution> ExplainBatch(const FittedModel& model,
                                      const FeatureMatrix& points,
                                      const ExplainOptions& options) {
  model.Validate();
  if (static_cast<std::size_t>(points.cols()) != model.dim()) {
    throw Error(ErrorCode::kInvalidInput,
                "data has " + std::to_string(points.cols()) +
                    " columns but the model expects " +
                    std::to_string(model.dim()));
  }
  std::vector<Attribution> out(static_cast<std::size_t>(points.rows()));
  ParallelFor(out.size(), options.threads, [&](std::size_t i) {
    const Eigen::VectorXd x = points.row(static_cast<Eigen::Index>(i));
    out[i] = ExplainInstance(model, x, options.backend);
  });
  return out;
}

Attribution NormalizedAttribution(const Attribution& attribution) {
  Attribution out = attribution;
  const auto d = static_cast<double>(attribution.phi.size());
  out.phi.array() += attribution.v_empty / d;
  out.v_empty = 0.0;
  out.method = AttributionMethod::kNormalized;
  return out;
}

}  // namespace pkex
