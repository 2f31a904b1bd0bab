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

#include "agsenet/model.h"

#include <algorithm>

#include "agsenet/errors.h"
#include "agsenet/ops.h"

namespace agsenet {

ModelConfig ModelConfig::Default() {
  ModelConfig c;
  c.encoder = {RsuConfig{7, 3, 16, 64, false},   RsuConfig{6, 64, 16, 64, false},
               RsuConfig{5, 64, 16, 64, false},  RsuConfig{4, 64, 16, 64, false},
               RsuConfig{4, 64, 32, 128, true},  RsuConfig{4, 128, 32, 128, true}};
  c.decoder = {RsuConfig{7, 128, 16, 64, false}, RsuConfig{6, 128, 16, 64, false},
               RsuConfig{5, 128, 16, 64, false}, RsuConfig{4, 128, 16, 64, false},
               RsuConfig{4, 256, 32, 64, true}};
  return c;
}

ModelConfig ModelConfig::Baseline() {
  ModelConfig c = Default();
  c.use_csif = false;
  c.use_ssie = false;
  return c;
}

void AgseNet::CheckInputShape(const Shape& shape) {
  if (shape.size() != 4 || shape[1] != 3) {
    throw DimensionError("model input must be [N,3,H,W], got " + ShapeToString(shape));
  }
  for (int axis : {2, 3}) {
    const int64_t s = shape[static_cast<size_t>(axis)];
    if (s < kMinInputSide || s % kSpatialDivisor != 0) {
      throw ConfigError("input " + ShapeToString(shape) +
                        ": height and width must be >= 64 and divisible by 32; "
                        "resize to e.g. " +
                        std::to_string(std::max<int64_t>(
                            kMinInputSide,
                            (s + kSpatialDivisor / 2) / kSpatialDivisor * kSpatialDivisor)));
    }
  }
}

AgseNet::AgseNet(const ModelConfig& config, uint64_t seed) : config_(config) {
  Rng rng(seed);
  for (int i = 0; i < kEncoderStages; ++i) {
    const std::string stage = "enc" + std::to_string(i + 1);
    encoder_.emplace_back(store_, stage + ".rsu", config.encoder[i], rng);
    if (config.use_csif) {
      csif_.emplace_back(store_, stage + ".csif", config.encoder[i].out_channels, rng);
    }
  }
  for (int i = kDecoderStages - 1; i >= 0; --i) {
    const std::string stage = "dec" + std::to_string(i + 1);
    if (config.use_ssie) ssie_.emplace_back(store_, std::string(kSsiePrefix) + "." + stage, rng);
    decoder_.emplace_back(store_, stage + ".rsu", config.decoder[i], rng);
  }
  // Registration ran deepest-first; index by decoder number from here on.
  std::reverse(decoder_.begin(), decoder_.end());
  std::reverse(ssie_.begin(), ssie_.end());

  for (int i = 0; i < kDecoderStages; ++i) {
    side_heads_.emplace_back(store_, "side" + std::to_string(i + 1),
                             ConvSpec{config.decoder[i].out_channels, 1, 3, 1, true}, rng);
  }
  side_heads_.emplace_back(
      store_, "side6",
      ConvSpec{config.encoder[kEncoderStages - 1].out_channels, 1, 3, 1, true}, rng);
  fuse_head_ = Conv2dLayer(store_, "fuse", {kSideOutputs, 1, 1, 1, true}, rng);

  for (int i = 0; i < kDecoderStages; ++i) {
    const int64_t deeper = i == kDecoderStages - 1
                               ? config.encoder[kEncoderStages - 1].out_channels
                               : config.decoder[i + 1].out_channels;
    const int64_t skip = config.encoder[i].out_channels;
    if (deeper != skip || config.decoder[i].in_channels != deeper + skip) {
      throw ConfigError("decoder " + std::to_string(i + 1) + " expects " +
                        std::to_string(config.decoder[i].in_channels) +
                        " input channels but receives " + std::to_string(deeper) +
                        " + " + std::to_string(skip));
    }
  }
}

void AgseNet::FreezeSsie(bool frozen) {
  store_.SetFrozen(std::string(kSsiePrefix) + ".", frozen);
}

SaliencyOutputs AgseNet::Forward(const Tensor& image, bool training) const {
  CheckInputShape(image.shape());
  const int64_t h = image.dim(2), w = image.dim(3);

  std::vector<Tensor> skips;
  Tensor x = image;
  for (int i = 0; i < kEncoderStages; ++i) {
    if (i > 0) x = MaxPool2x2(x);
    x = encoder_[static_cast<size_t>(i)].Forward(x, training);
    if (config_.use_csif) x = csif_[static_cast<size_t>(i)].Forward(x);
    skips.push_back(x);
  }

  std::vector<Tensor> stage_out(kDecoderStages);
  Tensor deeper = skips[kEncoderStages - 1];
  for (int i = kDecoderStages - 1; i >= 0; --i) {
    const Tensor& skip = skips[static_cast<size_t>(i)];
    const Tensor up = UpsampleBilinear(deeper, skip.dim(2), skip.dim(3));
    const Tensor fused = config_.use_ssie ? ssie_[static_cast<size_t>(i)].Fuse(up, skip)
                                          : Concat({up, skip}, 1);
    deeper = decoder_[static_cast<size_t>(i)].Forward(fused, training);
    stage_out[static_cast<size_t>(i)] = deeper;
  }

  std::vector<Tensor> logits;
  for (int i = 0; i < kSideOutputs; ++i) {
    const Tensor& feat = i < kDecoderStages ? stage_out[static_cast<size_t>(i)]
                                            : skips[kEncoderStages - 1];
    Tensor s = side_heads_[static_cast<size_t>(i)].Forward(feat);
    if (s.dim(2) != h || s.dim(3) != w) s = UpsampleBilinear(s, h, w);
    logits.push_back(s);
  }

  SaliencyOutputs out;
  out.fused = Sigmoid(fuse_head_.Forward(Concat(logits, 1)));
  for (const Tensor& l : logits) out.side.push_back(Sigmoid(l));
  return out;
}

}  // namespace agsenet
