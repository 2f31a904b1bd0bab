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

#include "agsenet/tensor.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "agsenet/errors.h"

namespace agsenet {
namespace {
thread_local bool g_grad_enabled = true;
}  // namespace

int64_t NumElements(const Shape& shape) {
  int64_t n = 1;
  for (int64_t d : shape) {
    if (d < 0) throw DimensionError("negative dimension in " + ShapeToString(shape));
    n *= d;
  }
  return n;
}

std::string ShapeToString(const Shape& shape) {
  std::ostringstream os;
  os << '[';
  for (size_t i = 0; i < shape.size(); ++i) {
    if (i) os << 'x';
    os << shape[i];
  }
  os << ']';
  return os.str();
}

Tensor::Tensor(Shape shape, float fill)
    : impl_(std::make_shared<internal::TensorImpl>()) {
  const int64_t n = NumElements(shape);
  impl_->shape = std::move(shape);
  impl_->data.assign(static_cast<size_t>(n), fill);
}

Tensor::Tensor(Shape shape, std::vector<float> values)
    : impl_(std::make_shared<internal::TensorImpl>()) {
  const int64_t n = NumElements(shape);
  if (static_cast<int64_t>(values.size()) != n) {
    throw DimensionError("tensor of shape " + ShapeToString(shape) + " needs " +
                         std::to_string(n) + " values, got " +
                         std::to_string(values.size()));
  }
  impl_->shape = std::move(shape);
  impl_->data.assign(values.begin(), values.end());
}

Tensor Tensor::Scalar(float value) { return Tensor(Shape{1}, value); }

const Shape& Tensor::shape() const { return impl_->shape; }

int64_t Tensor::dim(int i) const {
  const int r = rank();
  if (i < 0) i += r;
  if (i < 0 || i >= r) {
    throw DimensionError("dim index " + std::to_string(i) + " out of range for " +
                         ShapeToString(shape()));
  }
  return impl_->shape[static_cast<size_t>(i)];
}

int64_t Tensor::numel() const {
  return static_cast<int64_t>(impl_->data.size());
}

std::span<float> Tensor::data() { return impl_->data; }
std::span<const float> Tensor::data() const { return impl_->data; }

float Tensor::item() const {
  if (numel() != 1) {
    throw DimensionError("item() on tensor of shape " + ShapeToString(shape()));
  }
  return impl_->data[0];
}

float Tensor::at(std::initializer_list<int64_t> index) const {
  if (static_cast<int>(index.size()) != rank()) {
    throw DimensionError("index rank mismatch for " + ShapeToString(shape()));
  }
  int64_t offset = 0;
  int axis = 0;
  for (int64_t i : index) {
    const int64_t d = impl_->shape[static_cast<size_t>(axis++)];
    if (i < 0 || i >= d) throw DimensionError("index out of range");
    offset = offset * d + i;
  }
  return impl_->data[static_cast<size_t>(offset)];
}

bool Tensor::requires_grad() const { return impl_ && impl_->requires_grad; }

Tensor& Tensor::set_requires_grad(bool on) {
  if (!is_leaf()) {
    throw GradError("requires_grad can only be toggled on leaf tensors");
  }
  impl_->requires_grad = on;
  return *this;
}

bool Tensor::is_leaf() const { return impl_->grad_fn == nullptr; }

bool Tensor::has_grad() const {
  return !impl_->grad.empty() || impl_->data.empty();
}

std::span<float> Tensor::grad() { return impl_->MutableGrad(); }

std::span<const float> Tensor::grad() const { return impl_->MutableGrad(); }

void Tensor::ZeroGrad() {
  if (!impl_->grad.empty()) std::fill(impl_->grad.begin(), impl_->grad.end(), 0.0f);
}

void Tensor::ClearGrad() {
  impl_->grad.clear();
  impl_->grad.shrink_to_fit();
}

Tensor Tensor::Clone() const {
  auto impl = std::make_shared<internal::TensorImpl>();
  impl->shape = impl_->shape;
  impl->data = impl_->data;
  return Tensor(std::move(impl));
}

Tensor Tensor::Detach() const {
  auto impl = std::make_shared<internal::TensorImpl>();
  impl->shape = impl_->shape;
  impl->data = impl_->data;
  return Tensor(std::move(impl));
}

void Tensor::CopyFrom(const Tensor& other) {
  if (other.shape() != shape()) {
    throw DimensionError("CopyFrom shape mismatch: " + ShapeToString(shape()) +
                         " vs " + ShapeToString(other.shape()));
  }
  std::copy(other.data().begin(), other.data().end(), impl_->data.begin());
}

void Tensor::Fill(float value) {
  std::fill(impl_->data.begin(), impl_->data.end(), value);
}

NoGradGuard::NoGradGuard() : previous_(g_grad_enabled) { g_grad_enabled = false; }
NoGradGuard::~NoGradGuard() { g_grad_enabled = previous_; }

bool GradModeEnabled() { return g_grad_enabled; }

bool AllFinite(const Tensor& t) {
  return std::all_of(t.data().begin(), t.data().end(),
                     [](float v) { return std::isfinite(v); });
}

namespace internal {

std::span<float> TensorImpl::MutableGrad() {
  if (grad.size() != data.size()) grad.assign(data.size(), 0.0f);
  return grad;
}

Tensor MakeResult(Shape shape, FloatBuffer values,
                  std::vector<Tensor> inputs, const char* name,
                  BackwardFn backward) {
  if (static_cast<int64_t>(values.size()) != NumElements(shape)) {
    throw DimensionError(std::string("op '") + name + "' produced " +
                         std::to_string(values.size()) + " values for shape " +
                         ShapeToString(shape));
  }
  auto impl = std::make_shared<TensorImpl>();
  impl->shape = std::move(shape);
  impl->data = std::move(values);
  Tensor out(std::move(impl));
  if (!g_grad_enabled) return out;
  bool any = false;
  for (const Tensor& t : inputs) {
    if (t.defined() && t.requires_grad()) {
      if (t.impl()->consumed) {
        throw GradError(std::string("op '") + name +
                        "' consumes a tensor whose graph was already released "
                        "by backward; rerun the forward pass");
      }
      any = true;
    }
  }
  if (!any) return out;
  auto node = std::make_shared<GradNode>();
  node->name = name;
  for (Tensor& t : inputs) {
    if (t.defined() && t.requires_grad()) node->inputs.push_back(t.shared_impl());
  }
  node->backward = std::move(backward);
  out.impl()->requires_grad = true;
  out.impl()->grad_fn = std::move(node);
  return out;
}

std::span<float> GradSink(const Tensor& t) {
  if (!t.defined() || !t.requires_grad()) return {};
  return t.impl()->MutableGrad();
}

}  // namespace internal
}  // namespace agsenet
