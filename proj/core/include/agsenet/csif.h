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

#ifndef AGSENET_CSIF_H_
#define AGSENET_CSIF_H_

#include <cstdint>
#include <string>

#include "agsenet/layers.h"

namespace agsenet {

// Spatial context perception: criss-cross attention whose query and key
// projections are collapsed to a single channel. Output = x + aggregate.
class Scip {
 public:
  Scip() = default;
  Scip(ParamStore& store, const std::string& prefix, int64_t channels, Rng& rng);

  Tensor Forward(const Tensor& x) const;

  const Conv2dLayer& query() const { return query_; }
  const Conv2dLayer& key() const { return key_; }
  const Conv2dLayer& value() const { return value_; }

 private:
  Conv2dLayer query_;  // C -> 1
  Conv2dLayer key_;    // C -> 1
  Conv2dLayer value_;  // C -> C
};

// Intermediate values of one CSII pass, for inspection.
struct CsiiTrace {
  Tensor attention;  // [N, C, C], rows sum to 1
  Tensor value;      // [N, C, H*W]
};

// Channel similarity interaction:
//   Q' = Gap(conv1x1(x)) as C x 1, K' = Gap(conv1x1(x)) as 1 x C
//   A  = row-wise softmax(Q' K')            (C x C)
//   P  = A V, V = conv1x1(x) as C x HW
//   F  = alpha * P + x
class Csii {
 public:
  Csii() = default;
  Csii(ParamStore& store, const std::string& prefix, int64_t channels, Rng& rng);

  Tensor Forward(const Tensor& x, CsiiTrace* trace = nullptr) const;

  Tensor alpha() const { return alpha_; }

 private:
  Conv2dLayer query_, key_, value_;
  Tensor alpha_;  // [1], zero at init
};

// Channel saliency information focus: Csii(Scip(x)). Shape preserving.
class Csif {
 public:
  Csif() = default;
  Csif(ParamStore& store, const std::string& prefix, int64_t channels, Rng& rng);

  Tensor Forward(const Tensor& x, CsiiTrace* trace = nullptr) const;

  const Scip& scip() const { return scip_; }
  const Csii& csii() const { return csii_; }

 private:
  Scip scip_;
  Csii csii_;
};

}  // namespace agsenet

#endif  // AGSENET_CSIF_H_
