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

#include "agsenet/layers.h"

#include <cmath>

#include "agsenet/errors.h"

namespace agsenet {

void FillUniform(Tensor& t, float bound, Rng& rng) {
  for (float& v : t.data()) {
    v = static_cast<float>(rng.Uniform(-bound, bound));
  }
}

Conv2dLayer::Conv2dLayer(ParamStore& store, const std::string& prefix,
                         const ConvSpec& spec, Rng& rng)
    : spec_(spec) {
  if (spec.in_channels < 1 || spec.out_channels < 1 || spec.kernel < 1 ||
      spec.dilation < 1 || spec.kernel % 2 == 0) {
    throw ConfigError("conv layer '" + prefix +
                      "' needs positive channels and an odd kernel size");
  }
  const int64_t fan_in = spec.in_channels * spec.kernel * spec.kernel;
  const float bound = static_cast<float>(1.0 / std::sqrt(static_cast<double>(fan_in)));
  const std::string init = "kaiming_uniform(fan_in=" + std::to_string(fan_in) + ")";
  Tensor w({spec.out_channels, spec.in_channels, spec.kernel, spec.kernel});
  FillUniform(w, bound, rng);
  weight_ = store.Add(prefix + ".weight", w, ParamKind::kTrainable, init);
  if (spec.bias) {
    Tensor b({spec.out_channels});
    FillUniform(b, bound, rng);
    bias_ = store.Add(prefix + ".bias", b, ParamKind::kTrainable, init);
  }
}

Tensor Conv2dLayer::Forward(const Tensor& x) const {
  Conv2dOptions options;
  options.dilation = spec_.dilation;
  options.padding = spec_.dilation * (spec_.kernel - 1) / 2;
  return Conv2d(x, weight_, bias_, options);
}

BatchNorm2dLayer::BatchNorm2dLayer(ParamStore& store, const std::string& prefix,
                                   int64_t channels) {
  gamma_ = store.Add(prefix + ".gamma", Tensor({channels}, 1.0f),
                     ParamKind::kTrainable, "ones");
  beta_ = store.Add(prefix + ".beta", Tensor({channels}, 0.0f),
                    ParamKind::kTrainable, "zeros");
  running_mean_ = store.Add(prefix + ".running_mean", Tensor({channels}, 0.0f),
                            ParamKind::kBuffer, "zeros");
  running_var_ = store.Add(prefix + ".running_var", Tensor({channels}, 1.0f),
                           ParamKind::kBuffer, "ones");
}

Tensor BatchNorm2dLayer::Forward(const Tensor& x, bool training) const {
  BatchNormOptions options;
  options.training = training;
  return BatchNorm(x, gamma_, beta_, running_mean_, running_var_, options);
}

ConvBnRelu::ConvBnRelu(ParamStore& store, const std::string& prefix,
                       const ConvSpec& spec, Rng& rng)
    : conv_(store, prefix + ".conv", spec, rng),
      bn_(store, prefix + ".bn", spec.out_channels) {}

Tensor ConvBnRelu::Forward(const Tensor& x, bool training) const {
  return Relu(bn_.Forward(conv_.Forward(x), training));
}

}  // namespace agsenet
