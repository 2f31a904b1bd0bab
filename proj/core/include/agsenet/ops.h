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

#ifndef AGSENET_OPS_H_
#define AGSENET_OPS_H_

#include <cstdint>
#include <vector>

#include "agsenet/tensor.h"

namespace agsenet {

struct Conv2dOptions {
  int stride = 1;
  int padding = 0;
  int dilation = 1;
};

// Cross-correlation. x: [N,Cin,H,W], weight: [Cout,Cin,kH,kW],
// bias: [Cout] or undefined. Output extent per axis is
// floor((H + 2p - d(k-1) - 1) / s) + 1.
Tensor Conv2d(const Tensor& x, const Tensor& weight, const Tensor& bias,
              const Conv2dOptions& options = {});

// 2x2 max pooling with stride 2, ceil mode (trailing odd rows/cols form
// partial windows).
Tensor MaxPool2x2(const Tensor& x);

// Bilinear resize with half-pixel centers (align_corners = false).
Tensor UpsampleBilinear(const Tensor& x, int64_t out_h, int64_t out_w);

Tensor Relu(const Tensor& x);
Tensor Sigmoid(const Tensor& x);

// Batch normalization over (N,H,W) per channel. In training mode the batch
// statistics normalize and the running buffers are updated in place with
// running = (1 - momentum) * running + momentum * batch (unbiased variance).
struct BatchNormOptions {
  bool training = true;
  float momentum = 0.1f;
  float eps = 1e-5f;
};
Tensor BatchNorm(const Tensor& x, const Tensor& gamma, const Tensor& beta,
                 Tensor& running_mean, Tensor& running_var,
                 const BatchNormOptions& options);

Tensor Softmax(const Tensor& x, int axis);

// [M,K] x [K,N] -> [M,N], or batched [B,M,K] x [B,K,N] -> [B,M,N].
Tensor MatMul(const Tensor& a, const Tensor& b);

// [N,C,H,W] -> [N,C,1,1].
Tensor GlobalAvgPool(const Tensor& x);

Tensor Concat(const std::vector<Tensor>& xs, int axis);
std::vector<Tensor> Split(const Tensor& x, int axis,
                          const std::vector<int64_t>& sizes);

// Elementwise with broadcasting over size-1 dimensions (equal ranks).
Tensor Add(const Tensor& a, const Tensor& b);
Tensor Sub(const Tensor& a, const Tensor& b);
Tensor Mul(const Tensor& a, const Tensor& b);

// x * alpha where alpha holds one element; differentiable in both.
Tensor Scale(const Tensor& x, const Tensor& alpha);
Tensor MulConstant(const Tensor& x, float c);

Tensor Reshape(const Tensor& x, Shape shape);

// Scalar reductions, accumulated in double.
Tensor Sum(const Tensor& x);
Tensor Mean(const Tensor& x);
// Sum of one-element tensors.
Tensor AddScalars(const std::vector<Tensor>& terms);

// Channel-wise reductions, [N,C,H,W] -> [N,1,H,W].
Tensor ChannelMax(const Tensor& x);
Tensor ChannelMean(const Tensor& x);

// Criss-cross aggregation with single-channel query/key maps.
// q, k: [N,1,H,W]; v: [N,C,H,W]. For every pixel u the footprint is its
// whole row plus the rest of its column (H + W - 1 positions); weights are
// softmax(q[u] * k[j]) over that footprint and the result is the weighted
// sum of v. No residual is added here.
Tensor CrissCrossAggregate(const Tensor& q, const Tensor& k, const Tensor& v);

}  // namespace agsenet

#endif  // AGSENET_OPS_H_
