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

#ifndef PKEX_MMD_H_
#define PKEX_MMD_H_

#include <cstdint>

#include "pkex/attribution.h"
#include "pkex/kernels.h"

namespace pkex {

// Two samples with a shared column schema and a product kernel over it.
struct TwoSample {
  FeatureMatrix x;
  FeatureMatrix z;
  ProductKernelSpec kernel;

  // Needs >= 2 rows on each side and matching dimensions.
  void Validate() const;
};

// Kernel spec of the given kind whose bandwidths come from the median
// heuristic on the pooled rows of x and z.
ProductKernelSpec PooledMedianKernel(const FeatureMatrix& x,
                                     const FeatureMatrix& z,
                                     BaseKernelKind kind = BaseKernelKind::kRbf,
                                     std::uint64_t seed = 0);

// 1/(n(n-1)) sum_{i!=j} k(x_i, x_j) + 1/(m(m-1)) sum_{i!=j} k(z_i, z_j)
//   - 2/(nm) sum_{i,j} k(x_i, z_j).
// Can be negative.
double MmdSquared(const TwoSample& sample);

// The same estimator with k restricted to `subset`; zero for the empty set.
double MmdValueFunction(const TwoSample& sample, const FeatureSet& subset);

// Exact Shapley values of MmdValueFunction. Pairs are processed in row
// blocks whose partial sums are reduced in a fixed order, so results do not
// depend on the thread count. v_full is the statistic and v_empty is 0.
Attribution ExplainMmd(const TwoSample& sample,
                       const ExplainOptions& options = {});

}  // namespace pkex

#endif  // PKEX_MMD_H_
