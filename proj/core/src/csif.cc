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

#include "agsenet/csif.h"

#include "agsenet/errors.h"
#include "agsenet/ops.h"

namespace agsenet {
namespace {

void RequireChannels(const Tensor& x, int64_t channels, const char* what) {
  if (x.rank() != 4 || x.dim(1) != channels) {
    throw DimensionError(std::string(what) + " expects [N," +
                         std::to_string(channels) + ",H,W], got " +
                         ShapeToString(x.shape()));
  }
}

}  // namespace

Scip::Scip(ParamStore& store, const std::string& prefix, int64_t channels,
           Rng& rng)
    : query_(store, prefix + ".query", {channels, 1, 1, 1, true}, rng),
      key_(store, prefix + ".key", {channels, 1, 1, 1, true}, rng),
      value_(store, prefix + ".value", {channels, channels, 1, 1, true}, rng) {}

Tensor Scip::Forward(const Tensor& x) const {
  RequireChannels(x, value_.spec().in_channels, "scip");
  const Tensor agg =
      CrissCrossAggregate(query_.Forward(x), key_.Forward(x), value_.Forward(x));
  return Add(x, agg);
}

Csii::Csii(ParamStore& store, const std::string& prefix, int64_t channels, Rng& rng)
    : query_(store, prefix + ".query", {channels, channels, 1, 1, true}, rng),
      key_(store, prefix + ".key", {channels, channels, 1, 1, true}, rng),
      value_(store, prefix + ".value", {channels, channels, 1, 1, true}, rng) {
  alpha_ = store.Add(prefix + ".alpha", Tensor::Scalar(0.0f),
                     ParamKind::kTrainable, "zeros");
}

Tensor Csii::Forward(const Tensor& x, CsiiTrace* trace) const {
  const int64_t c = value_.spec().in_channels;
  RequireChannels(x, c, "csii");
  const int64_t n = x.dim(0), h = x.dim(2), w = x.dim(3);
  const Tensor q = Reshape(GlobalAvgPool(query_.Forward(x)), {n, c, 1});
  const Tensor k = Reshape(GlobalAvgPool(key_.Forward(x)), {n, 1, c});
  const Tensor attention = Softmax(MatMul(q, k), 2);
  const Tensor v = Reshape(value_.Forward(x), {n, c, h * w});
  const Tensor p = Reshape(MatMul(attention, v), {n, c, h, w});
  if (trace != nullptr) {
    trace->attention = attention;
    trace->value = v;
  }
  return Add(Scale(p, alpha_), x);
}

Csif::Csif(ParamStore& store, const std::string& prefix, int64_t channels, Rng& rng)
    : scip_(store, prefix + ".scip", channels, rng),
      csii_(store, prefix + ".csii", channels, rng) {}

Tensor Csif::Forward(const Tensor& x, CsiiTrace* trace) const {
  return csii_.Forward(scip_.Forward(x), trace);
}

}  // namespace agsenet
