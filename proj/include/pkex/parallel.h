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

#ifndef PKEX_PARALLEL_H_
#define PKEX_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace pkex {

// 0 means "all available cores".
int ResolveThreadCount(int requested);

// Runs fn(i) for i in [0, count) on up to `threads` workers. Work items are
// handed out in contiguous chunks; callers write results into per-index
// slots so the outcome never depends on the schedule.
void ParallelFor(std::size_t count, int threads,
                 const std::function<void(std::size_t)>& fn);

}  // namespace pkex

#endif  // PKEX_PARALLEL_H_
