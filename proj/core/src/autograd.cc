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

#include "agsenet/autograd.h"

#include <unordered_set>
#include <utility>

#include "agsenet/errors.h"

namespace agsenet {

using internal::TensorImpl;

GradTape::GradTape(const Tensor& root) : root_(root) {
  if (!root.defined()) throw GradError("backward on an undefined tensor");
  if (root.numel() != 1) {
    throw GradError("backward needs a scalar loss, got shape " +
                    ShapeToString(root.shape()));
  }
  if (root.impl()->consumed) {
    throw GradError(
        "backward already ran over this graph; run a new forward pass first");
  }
  if (!root.requires_grad()) {
    throw GradError("loss does not depend on any tensor that requires grad");
  }

  // Iterative post-order DFS; graphs here are thousands of nodes deep.
  std::unordered_set<const TensorImpl*> visited;
  std::vector<std::pair<std::shared_ptr<TensorImpl>, size_t>> stack;
  stack.emplace_back(root.shared_impl(), 0);
  visited.insert(root.impl());
  while (!stack.empty()) {
    auto& [impl, next] = stack.back();
    const auto& node = impl->grad_fn;
    if (node && next < node->inputs.size()) {
      std::shared_ptr<TensorImpl> child = node->inputs[next++];
      if (visited.insert(child.get()).second) stack.emplace_back(child, 0);
      continue;
    }
    if (node) order_.push_back(impl);
    stack.pop_back();
  }
}

void GradTape::Backward() {
  if (ran_ || root_.impl()->consumed) {
    throw GradError(
        "backward already ran over this graph; run a new forward pass first");
  }
  ran_ = true;
  root_.impl()->MutableGrad()[0] += 1.0f;
  for (auto it = order_.rbegin(); it != order_.rend(); ++it) {
    TensorImpl& impl = **it;
    if (impl.grad.empty()) continue;
    impl.grad_fn->backward(impl.data, impl.grad);
  }
  for (auto& impl : order_) {
    impl->grad_fn.reset();
    impl->consumed = true;
    impl->grad.clear();
    impl->grad.shrink_to_fit();
  }
  order_.clear();
}

void Backward(const Tensor& loss) { GradTape(loss).Backward(); }

}  // namespace agsenet
