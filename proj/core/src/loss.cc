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

#include "agsenet/loss.h"

#include <algorithm>
#include <cmath>

#include "agsenet/errors.h"
#include "agsenet/ops.h"

namespace agsenet {
namespace {

void RequireSameShape(const Tensor& pred, const Tensor& target, const char* what) {
  if (pred.shape() != target.shape()) {
    throw DimensionError(std::string(what) + ": prediction " +
                         ShapeToString(pred.shape()) + " vs target " +
                         ShapeToString(target.shape()));
  }
  if (pred.numel() == 0) throw DimensionError(std::string(what) + " on empty maps");
}

}  // namespace

Tensor BceLoss(const Tensor& pred, const Tensor& target) {
  RequireSameShape(pred, target, "bce_loss");
  const float lo = kBceClamp, hi = 1.0f - kBceClamp;
  const float* p = pred.data().data();
  const float* t = target.data().data();
  const size_t n = pred.data().size();
  double total = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double pc = std::clamp(p[i], lo, hi);
    total -= t[i] * std::log(pc) + (1.0 - t[i]) * std::log(1.0 - pc);
  }
  const double count = static_cast<double>(n);
  return internal::MakeResult(
      {1}, {static_cast<float>(total / count)}, {pred, target}, "bce_loss",
      [pred, target, lo, hi, count](std::span<const float>, std::span<const float> dout) {
        std::span<float> dp = internal::GradSink(pred);
        std::span<float> dt = internal::GradSink(target);
        const float* p = pred.data().data();
        const float* t = target.data().data();
        const double g = dout[0] / count;
        for (size_t i = 0; i < pred.data().size(); ++i) {
          const double pc = std::clamp(p[i], lo, hi);
          if (!dp.empty() && p[i] >= lo && p[i] <= hi) {
            dp[i] += static_cast<float>(g * (-t[i] / pc + (1.0 - t[i]) / (1.0 - pc)));
          }
          if (!dt.empty()) {
            dt[i] += static_cast<float>(g * (std::log(1.0 - pc) - std::log(pc)));
          }
        }
      });
}

Tensor DiceLoss(const Tensor& pred, const Tensor& target) {
  RequireSameShape(pred, target, "dice_loss");
  const float* p = pred.data().data();
  const float* t = target.data().data();
  double inter = 0.0, sum_p = 0.0, sum_t = 0.0;
  for (size_t i = 0; i < pred.data().size(); ++i) {
    inter += static_cast<double>(p[i]) * t[i];
    sum_p += p[i];
    sum_t += t[i];
  }
  const double eps = kDiceSmoothing;
  const double num = 2.0 * inter + eps;
  const double den = sum_p + sum_t + eps;
  return internal::MakeResult(
      {1}, {static_cast<float>(1.0 - num / den)}, {pred, target}, "dice_loss",
      [pred, target, num, den](std::span<const float>, std::span<const float> dout) {
        std::span<float> dp = internal::GradSink(pred);
        std::span<float> dt = internal::GradSink(target);
        const float* p = pred.data().data();
        const float* t = target.data().data();
        const double g = dout[0];
        for (size_t i = 0; i < pred.data().size(); ++i) {
          if (!dp.empty()) dp[i] += static_cast<float>(-g * (2.0 * t[i] * den - num) / (den * den));
          if (!dt.empty()) dt[i] += static_cast<float>(-g * (2.0 * p[i] * den - num) / (den * den));
        }
      });
}

LossScales::LossScales(ParamStore& store) {
  gamma_ = store.Add("loss.gamma", Tensor::Scalar(1.0f), ParamKind::kTrainable, "ones");
  delta_ = store.Add("loss.delta", Tensor::Scalar(1.0f), ParamKind::kTrainable, "ones");
}

Tensor HybridLoss(const Tensor& pred, const Tensor& target, const LossScales& scales) {
  return AddScalars({Scale(BceLoss(pred, target), scales.gamma()),
                     Scale(DiceLoss(pred, target), scales.delta())});
}

LossBreakdown TotalLoss(const SaliencyOutputs& outputs, const Tensor& target,
                        const LossScales& scales) {
  if (outputs.side.size() != kSideOutputs || !outputs.fused.defined()) {
    throw DimensionError("total loss needs 6 side maps and a fused map");
  }
  LossBreakdown out;
  std::vector<Tensor> terms;
  std::vector<const Tensor*> maps;
  for (const Tensor& s : outputs.side) maps.push_back(&s);
  maps.push_back(&outputs.fused);
  for (const Tensor* m : maps) {
    const Tensor bce = BceLoss(*m, target);
    const Tensor dice = DiceLoss(*m, target);
    out.bce.push_back(bce.item());
    out.dice.push_back(dice.item());
    terms.push_back(Scale(bce, scales.gamma()));
    terms.push_back(Scale(dice, scales.delta()));
  }
  out.total = AddScalars(terms);
  return out;
}

}  // namespace agsenet
