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

#ifndef AGSENET_LAYERS_H_
#define AGSENET_LAYERS_H_

#include <cstdint>
#include <string>

#include "agsenet/ops.h"
#include "agsenet/params.h"
#include "agsenet/rng.h"
#include "agsenet/tensor.h"

namespace agsenet {

struct ConvSpec {
  int64_t in_channels = 0;
  int64_t out_channels = 0;
  int kernel = 3;
  int dilation = 1;
  bool bias = true;
};

// Convolution with "same" padding (dilation * (kernel - 1) / 2) and stride 1.
// Weights and bias use Kaiming-uniform with a = sqrt(5), i.e. bound
// 1/sqrt(fan_in), the stock initializer of common frameworks.
class Conv2dLayer {
 public:
  Conv2dLayer() = default;
  Conv2dLayer(ParamStore& store, const std::string& prefix, const ConvSpec& spec,
              Rng& rng);

  Tensor Forward(const Tensor& x) const;

  const ConvSpec& spec() const { return spec_; }
  Tensor weight() const { return weight_; }
  Tensor bias() const { return bias_; }

 private:
  ConvSpec spec_;
  Tensor weight_;
  Tensor bias_;
};

class BatchNorm2dLayer {
 public:
  BatchNorm2dLayer() = default;
  BatchNorm2dLayer(ParamStore& store, const std::string& prefix, int64_t channels);

  Tensor Forward(const Tensor& x, bool training) const;

 private:
  Tensor gamma_, beta_;
  mutable Tensor running_mean_, running_var_;
};

// conv3x3 (or dilated) -> BN -> ReLU, the REBNCONV unit of RSU blocks.
class ConvBnRelu {
 public:
  ConvBnRelu() = default;
  ConvBnRelu(ParamStore& store, const std::string& prefix, const ConvSpec& spec,
             Rng& rng);

  Tensor Forward(const Tensor& x, bool training) const;

 private:
  Conv2dLayer conv_;
  BatchNorm2dLayer bn_;
};

// Fills `t` with U(-bound, bound) draws from `rng`.
void FillUniform(Tensor& t, float bound, Rng& rng);

}  // namespace agsenet

#endif  // AGSENET_LAYERS_H_
