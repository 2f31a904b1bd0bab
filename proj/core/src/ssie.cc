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

#include "agsenet/ssie.h"

#include "agsenet/errors.h"
#include "agsenet/ops.h"

namespace agsenet {

SpatialAttention::SpatialAttention(ParamStore& store, const std::string& prefix,
                                   Rng& rng)
    : conv_(store, prefix + ".conv", {2, 1, kKernel, 1, true}, rng) {}

Tensor SpatialAttention::Forward(const Tensor& x) const {
  if (x.rank() != 4) {
    throw DimensionError("spatial attention expects [N,C,H,W], got " +
                         ShapeToString(x.shape()));
  }
  return Sigmoid(conv_.Forward(Concat({ChannelMax(x), ChannelMean(x)}, 1)));
}

Ssie::Ssie(ParamStore& store, const std::string& prefix, Rng& rng)
    : noise_(store, prefix + ".noise", rng), edge_(store, prefix + ".edge", rng) {}

Tensor Ssie::Fuse(const Tensor& f_high, const Tensor& f_low,
                  const SsieOptions& options, SsieTrace* trace) const {
  if (f_high.shape() != f_low.shape() || f_high.rank() != 4) {
    throw DimensionError("ssie inputs must share one [N,C,H,W] shape, got " +
                         ShapeToString(f_high.shape()) + " and " +
                         ShapeToString(f_low.shape()));
  }
  const Tensor noise_in = Sub(f_high, f_low);
  const Tensor edge_in = Mul(f_high, f_low);
  Tensor noise_gate, edge_gate;
  if (options.forced_gate) {
    const Shape gate_shape{f_high.dim(0), 1, f_high.dim(2), f_high.dim(3)};
    noise_gate = Tensor(gate_shape, *options.forced_gate);
    edge_gate = Tensor(gate_shape, *options.forced_gate);
  } else {
    noise_gate = noise_.Forward(noise_in);
    edge_gate = edge_.Forward(edge_in);
  }
  if (trace != nullptr) {
    *trace = SsieTrace{noise_in, edge_in, noise_gate, edge_gate};
  }
  const Tensor high = Add(Mul(noise_gate, f_high), Mul(edge_gate, f_high));
  const Tensor low = Add(Mul(noise_gate, f_low), Mul(edge_gate, f_low));
  return Concat({high, low}, 1);
}

}  // namespace agsenet
