// Copyright 2026 The AGSENet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef AGSENET_PARALLEL_H_
#define AGSENET_PARALLEL_H_

#include <cstdint>
#include <functional>

namespace agsenet {

// Worker cap: AGSENET_THREADS if set to a positive integer, otherwise the
// hardware concurrency. SetMaxThreads overrides both.
int MaxThreads();
void SetMaxThreads(int n);

// Runs fn(i) for i in [0, n). Iterations are split into contiguous chunks
// over at most MaxThreads() threads; callers must only write disjoint
// outputs per index, which keeps results independent of the thread count.
void ParallelFor(int64_t n, const std::function<void(int64_t)>& fn);

}  // namespace agsenet

#endif  // AGSENET_PARALLEL_H_
