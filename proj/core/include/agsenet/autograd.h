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

#ifndef AGSENET_AUTOGRAD_H_
#define AGSENET_AUTOGRAD_H_

#include <cstddef>
#include <memory>
#include <vector>

#include "agsenet/tensor.h"

namespace agsenet {

// Ordered record of the operations reachable from a scalar root, in
// topological order (inputs before outputs). Running it replays the
// adjoints in reverse order and then releases the graph, so a tape built
// over an already-consumed graph is rejected.
class GradTape {
 public:
  explicit GradTape(const Tensor& root);

  // Number of recorded op nodes.
  size_t size() const { return order_.size(); }

  // Seeds d(root)/d(root) = 1 and accumulates gradients into every reachable
  // tensor that requires grad. Leaf gradients accumulate across calls;
  // intermediate gradients are freed afterwards.
  void Backward();

 private:
  Tensor root_;
  std::vector<std::shared_ptr<internal::TensorImpl>> order_;
  bool ran_ = false;
};

// Shorthand for GradTape(loss).Backward().
void Backward(const Tensor& loss);

}  // namespace agsenet

#endif  // AGSENET_AUTOGRAD_H_
