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

#include "agsenet/rsu.h"

#include <algorithm>

#include "agsenet/errors.h"

namespace agsenet {

std::string RsuConfig::Name() const {
  return "RSU-" + std::to_string(depth) + (dilated ? "D" : "");
}

int64_t RsuConfig::MinSide() const {
  return dilated ? 1 : (int64_t{1} << (depth - 2));
}

void RsuConfig::Validate() const {
  if (depth < 2) throw ConfigError(Name() + ": depth must be at least 2");
  if (in_channels < 1 || mid_channels < 1 || out_channels < 1) {
    throw ConfigError(Name() + ": channel counts must be positive");
  }
}

std::vector<int> RsuBlock::DescentDilations() const {
  std::vector<int> d;
  for (int i = 0; i < config_.depth - 1; ++i) {
    d.push_back(config_.dilated ? (1 << i) : 1);
  }
  d.push_back(config_.dilated ? (1 << (config_.depth - 1)) : 2);
  return d;
}

RsuBlock::RsuBlock(ParamStore& store, const std::string& prefix,
                   const RsuConfig& config, Rng& rng)
    : config_(config), prefix_(prefix) {
  config.Validate();
  const int64_t cin = config.in_channels;
  const int64_t mid = config.mid_channels;
  const int64_t cout = config.out_channels;
  const std::vector<int> dil = DescentDilations();
  const int levels = config.depth - 1;

  input_ = ConvBnRelu(store, prefix + ".in", {cin, cout, 3, 1, true}, rng);
  for (int i = 0; i < levels; ++i) {
    down_.emplace_back(store, prefix + ".down" + std::to_string(i + 1),
                       ConvSpec{i == 0 ? cout : mid, mid, 3, dil[i], true}, rng);
  }
  bottom_ = ConvBnRelu(store, prefix + ".bottom",
                       {mid, mid, 3, dil[static_cast<size_t>(levels)], true}, rng);
  for (int i = levels - 1; i >= 0; --i) {
    up_.emplace_back(store, prefix + ".up" + std::to_string(i + 1),
                     ConvSpec{2 * mid, i == 0 ? cout : mid, 3, dil[i], true}, rng);
  }
  fuse_ = ConvBnRelu(store, prefix + ".fuse", {2 * cout, cout, 1, 1, true}, rng);
}

Tensor RsuBlock::Forward(const Tensor& x, bool training) const {
  if (x.rank() != 4 || x.dim(1) != config_.in_channels) {
    throw DimensionError(prefix_ + " (" + config_.Name() + ") expects [N," +
                         std::to_string(config_.in_channels) + ",H,W], got " +
                         ShapeToString(x.shape()));
  }
  const int64_t side = std::min(x.dim(2), x.dim(3));
  if (side < config_.MinSide()) {
    throw ConfigError(prefix_ + " (" + config_.Name() + ") needs spatial size >= " +
                      std::to_string(config_.MinSide()) + " for its " +
                      std::to_string(config_.depth - 2) + " poolings, got " +
                      std::to_string(x.dim(2)) + "x" + std::to_string(x.dim(3)));
  }

  const Tensor f1 = input_.Forward(x, training);
  std::vector<Tensor> skips;
  Tensor h = f1;
  const size_t levels = down_.size();
  for (size_t i = 0; i < levels; ++i) {
    if (i > 0 && !config_.dilated) h = MaxPool2x2(h);
    h = down_[i].Forward(h, training);
    skips.push_back(h);
  }
  Tensor d = bottom_.Forward(h, training);
  for (size_t j = 0; j < levels; ++j) {
    const Tensor& skip = skips[levels - 1 - j];
    if (d.dim(2) != skip.dim(2) || d.dim(3) != skip.dim(3)) {
      d = UpsampleBilinear(d, skip.dim(2), skip.dim(3));
    }
    d = up_[j].Forward(Concat({d, skip}, 1), training);
  }
  return fuse_.Forward(Concat({f1, d}, 1), training);
}

}  // namespace agsenet
