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

#ifndef AGSENET_MODEL_H_
#define AGSENET_MODEL_H_

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "agsenet/csif.h"
#include "agsenet/params.h"
#include "agsenet/rsu.h"
#include "agsenet/ssie.h"

namespace agsenet {

inline constexpr int kEncoderStages = 6;
inline constexpr int kDecoderStages = 5;
inline constexpr int kSideOutputs = 6;
// Five 2x2 poolings between the six encoder stages.
inline constexpr int64_t kSpatialDivisor = 32;
inline constexpr int64_t kMinInputSide = 64;

struct ModelConfig {
  std::array<RsuConfig, kEncoderStages> encoder;
  // decoder[i] is Decoder i+1 (Decoder 1 runs at full resolution).
  std::array<RsuConfig, kDecoderStages> decoder;
  bool use_csif = true;
  bool use_ssie = true;

  // The published encoder/decoder table.
  static ModelConfig Default();
  // Ablation base: CSIF replaced by identity, SSIE by plain concatenation.
  static ModelConfig Baseline();
};

struct SaliencyOutputs {
  // Probability maps from Decoder 1..5 then Encoder 6, each [N,1,H,W] at
  // input resolution.
  std::vector<Tensor> side;
  // 1x1-conv fusion of the six side logits, through a sigmoid.
  Tensor fused;
};

// Full network. Each encoder stage is RSU (+ CSIF); its output is both the
// skip for the symmetric decoder level and, after a 2x2 max-pool, the input
// of the next stage. Decoder i consumes SSIE(up(deeper), skip_i), or a plain
// concatenation when SSIE is disabled.
class AgseNet {
 public:
  explicit AgseNet(const ModelConfig& config = ModelConfig::Default(),
                   uint64_t seed = 0);

  // image: [N,3,H,W] with H, W >= 64 and divisible by 32.
  SaliencyOutputs Forward(const Tensor& image, bool training) const;

  // Throws ConfigError if the input shape violates the precondition.
  static void CheckInputShape(const Shape& shape);

  const ModelConfig& config() const { return config_; }
  ParamStore& params() { return store_; }
  const ParamStore& params() const { return store_; }

  // Trainable scalars in the network.
  int64_t CountParameters() const { return agsenet::CountParameters(store_); }

  void FreezeSsie(bool frozen);
  static constexpr const char* kSsiePrefix = "ssie";

 private:
  ModelConfig config_;
  ParamStore store_;
  std::vector<RsuBlock> encoder_;
  std::vector<Csif> csif_;
  std::vector<RsuBlock> decoder_;
  std::vector<Ssie> ssie_;
  std::vector<Conv2dLayer> side_heads_;  // Decoder 1..5, Encoder 6
  Conv2dLayer fuse_head_;
};

}  // namespace agsenet

#endif  // AGSENET_MODEL_H_
