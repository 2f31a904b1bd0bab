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

#ifndef AGSENET_LOSS_H_
#define AGSENET_LOSS_H_

#include <vector>

#include "agsenet/model.h"
#include "agsenet/params.h"
#include "agsenet/tensor.h"

namespace agsenet {

inline constexpr float kBceClamp = 1e-7f;
inline constexpr float kDiceSmoothing = 1.0f;

// Mean over all pixels of -[t ln p + (1-t) ln(1-p)], p clamped to
// [1e-7, 1 - 1e-7]. Differentiable in pred; the gradient is zero where the
// clamp is active.
Tensor BceLoss(const Tensor& pred, const Tensor& target);

// 1 - (2 sum(p t) + eps) / (sum p + sum t + eps), eps = 1, over the whole
// tensor.
Tensor DiceLoss(const Tensor& pred, const Tensor& target);

// Learnable weights of the hybrid loss, shared by every supervised map.
class LossScales {
 public:
  // Registers "loss.gamma" and "loss.delta" (both 1.0) in `store`.
  explicit LossScales(ParamStore& store);

  Tensor gamma() const { return gamma_; }
  Tensor delta() const { return delta_; }

 private:
  Tensor gamma_, delta_;
};

// gamma * BCE + delta * DICE.
Tensor HybridLoss(const Tensor& pred, const Tensor& target, const LossScales& scales);

struct LossBreakdown {
  Tensor total;
  // Per-term values in order side 1..6 then fused.
  std::vector<double> bce;
  std::vector<double> dice;
  int terms() const { return static_cast<int>(bce.size()); }
};

// Deep supervision: hybrid loss of each of the six side maps plus the fused
// map (seven equally weighted terms).
LossBreakdown TotalLoss(const SaliencyOutputs& outputs, const Tensor& target,
                        const LossScales& scales);

}  // namespace agsenet

#endif  // AGSENET_LOSS_H_
