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

#ifndef AGSENET_RSU_H_
#define AGSENET_RSU_H_

#include <cstdint>
#include <string>
#include <vector>

#include "agsenet/layers.h"

namespace agsenet {

// One row of the encoder/decoder configuration table.
struct RsuConfig {
  int depth = 4;  // L
  int64_t in_channels = 0;
  int64_t mid_channels = 0;
  int64_t out_channels = 0;
  bool dilated = false;  // RSU-LD: dilation instead of pooling

  // "RSU-7", "RSU-4D", ...
  std::string Name() const;
  // Smallest spatial side the block accepts: 2^(L-2) for RSU-L, 1 for RSU-LD.
  int64_t MinSide() const;
  void Validate() const;
};

// Residual U-block.
//
//   F1  = ReLU(BN(conv3x3(x)))                       [Cout]
//   F2  = inner U-net on F1                          [Cout]
//   out = ReLU(BN(conv1x1(Cat(F1, F2))))             [Cout]
//
// RSU-L: descent convs at levels 1..L-1 with a 2x2 max-pool between
// consecutive levels (L-2 halvings), then a dilation-2 bottom conv. Each
// ascent level concatenates the skip, upsamples bilinearly to the skip's
// size where the resolution changed, and convolves.
// RSU-LD: same wiring without pooling; descent dilations 1,2,4,... and a
// bottom dilation of 2^(L-1), mirrored on ascent.
class RsuBlock {
 public:
  RsuBlock() = default;
  RsuBlock(ParamStore& store, const std::string& prefix, const RsuConfig& config,
           Rng& rng);

  // x: [N, Cin, H, W] -> [N, Cout, H, W].
  Tensor Forward(const Tensor& x, bool training) const;

  const RsuConfig& config() const { return config_; }
  const std::string& prefix() const { return prefix_; }
  // Dilation rates of the descent convs followed by the bottom conv.
  std::vector<int> DescentDilations() const;

 private:
  RsuConfig config_;
  std::string prefix_;
  ConvBnRelu input_;
  std::vector<ConvBnRelu> down_;  // L-1 descent convs
  ConvBnRelu bottom_;
  std::vector<ConvBnRelu> up_;    // L-1 ascent convs, deepest first
  ConvBnRelu fuse_;
};

}  // namespace agsenet

#endif  // AGSENET_RSU_H_
