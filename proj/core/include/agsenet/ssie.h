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

#ifndef AGSENET_SSIE_H_
#define AGSENET_SSIE_H_

#include <optional>
#include <string>

#include "agsenet/layers.h"

namespace agsenet {

// Spatial attention gate: Cat(max_c x, mean_c x) -> conv7x7 (2 -> 1) ->
// sigmoid. [N,C,H,W] -> [N,1,H,W] with values in (0,1).
class SpatialAttention {
 public:
  static constexpr int kKernel = 7;

  SpatialAttention() = default;
  SpatialAttention(ParamStore& store, const std::string& prefix, Rng& rng);

  Tensor Forward(const Tensor& x) const;

  const Conv2dLayer& conv() const { return conv_; }

 private:
  Conv2dLayer conv_;
};

struct SsieOptions {
  // Replaces both attention gates with this constant (wiring checks).
  std::optional<float> forced_gate;
};

// Intermediate maps of one fusion, for inspection.
struct SsieTrace {
  Tensor noise_input;  // F_n = f_h - f_l
  Tensor edge_input;   // F_e = f_h * f_l
  Tensor noise_gate;   // SA_n(F_n)
  Tensor edge_gate;    // SA_e(F_e)
};

// Fuses an upsampled deep feature f_h with the symmetric shallow feature
// f_l (same shape [N,C,H,W]):
//   F'_h = SA_n(f_h - f_l) * f_h + SA_e(f_h * f_l) * f_h
//   F'_l = SA_n(f_h - f_l) * f_l + SA_e(f_h * f_l) * f_l
//   out  = Cat(F'_h, F'_l)                               [N,2C,H,W]
// The two gates do not share weights.
class Ssie {
 public:
  Ssie() = default;
  Ssie(ParamStore& store, const std::string& prefix, Rng& rng);

  Tensor Fuse(const Tensor& f_high, const Tensor& f_low,
              const SsieOptions& options = {}, SsieTrace* trace = nullptr) const;

  const SpatialAttention& noise_attention() const { return noise_; }
  const SpatialAttention& edge_attention() const { return edge_; }

 private:
  SpatialAttention noise_;
  SpatialAttention edge_;
};

}  // namespace agsenet

#endif  // AGSENET_SSIE_H_
