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

#ifndef AGSENET_TENSOR_H_
#define AGSENET_TENSOR_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace agsenet {

using Shape = std::vector<int64_t>;

// Tensor storage starts on a 64-byte boundary. Vectorized reductions split
// their work by the start address, so without this the same computation
// could round differently from one allocation to the next.
template <class T>
struct AlignedAllocator {
  using value_type = T;
  static constexpr std::align_val_t kAlignment{64};

  AlignedAllocator() = default;
  template <class U>
  AlignedAllocator(const AlignedAllocator<U>&) {}

  T* allocate(size_t n) { return static_cast<T*>(::operator new(n * sizeof(T), kAlignment)); }
  void deallocate(T* p, size_t) { ::operator delete(p, kAlignment); }

  template <class U>
  bool operator==(const AlignedAllocator<U>&) const { return true; }
};
using FloatBuffer = std::vector<float, AlignedAllocator<float>>;

int64_t NumElements(const Shape& shape);
std::string ShapeToString(const Shape& shape);

namespace internal {
struct TensorImpl;
struct GradNode;
}  // namespace internal

// Dense row-major float32 tensor with reference semantics. Copies of a
// Tensor share storage; use Clone() for a deep copy. Feature maps use NCHW.
//
// A tensor that requires grad records, on creation by an op, the node that
// produced it. Backward() walks those nodes in reverse topological order.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape, float fill = 0.0f);
  Tensor(Shape shape, std::vector<float> values);

  // Wraps existing storage; used by the op layer.
  explicit Tensor(std::shared_ptr<internal::TensorImpl> impl)
      : impl_(std::move(impl)) {}

  static Tensor Scalar(float value);

  bool defined() const { return impl_ != nullptr; }
  const Shape& shape() const;
  int rank() const { return static_cast<int>(shape().size()); }
  // Negative indices count from the back.
  int64_t dim(int i) const;
  int64_t numel() const;

  std::span<float> data();
  std::span<const float> data() const;
  float item() const;
  float at(std::initializer_list<int64_t> index) const;

  bool requires_grad() const;
  Tensor& set_requires_grad(bool on);
  // True for tensors not produced by a recorded op (parameters, inputs).
  bool is_leaf() const;

  bool has_grad() const;
  // Gradient buffer, allocated zero-filled on first access.
  std::span<float> grad();
  std::span<const float> grad() const;
  void ZeroGrad();
  void ClearGrad();

  // Deep copy of the values; the copy is a leaf with requires_grad off.
  Tensor Clone() const;
  // Same storage, cut out of the graph.
  Tensor Detach() const;

  // Assigns values in place (shapes must match). Keeps graph membership.
  void CopyFrom(const Tensor& other);
  void Fill(float value);

  bool SameStorage(const Tensor& other) const { return impl_ == other.impl_; }

  internal::TensorImpl* impl() const { return impl_.get(); }
  const std::shared_ptr<internal::TensorImpl>& shared_impl() const {
    return impl_;
  }

 private:
  std::shared_ptr<internal::TensorImpl> impl_;
};

// Disables graph recording on the current thread for its lifetime.
class NoGradGuard {
 public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool previous_;
};

bool GradModeEnabled();

// Returns false if any element is NaN or infinite.
bool AllFinite(const Tensor& t);

namespace internal {

struct GradNode {
  const char* name = "";
  std::vector<std::shared_ptr<TensorImpl>> inputs;
  // Receives the forward output values and the output gradient.
  std::function<void(std::span<const float> out, std::span<const float> dout)>
      backward;
};

struct TensorImpl {
  Shape shape;
  FloatBuffer data;
  FloatBuffer grad;
  bool requires_grad = false;
  // Set once a backward pass has run through this tensor's node.
  bool consumed = false;
  std::shared_ptr<GradNode> grad_fn;

  std::span<float> MutableGrad();
};

using BackwardFn = std::function<void(std::span<const float> out,
                                      std::span<const float> dout)>;

// Builds an op result. When grad mode is on and any input requires grad the
// result joins the graph with `backward` as its adjoint.
Tensor MakeResult(Shape shape, FloatBuffer values,
                  std::vector<Tensor> inputs, const char* name,
                  BackwardFn backward);

// Gradient sink for an op input during backward: empty when the input does
// not take gradients.
std::span<float> GradSink(const Tensor& t);

}  // namespace internal
}  // namespace agsenet

#endif  // AGSENET_TENSOR_H_
