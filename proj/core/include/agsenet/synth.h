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

#ifndef AGSENET_SYNTH_H_
#define AGSENET_SYNTH_H_

#include <array>
#include <cstdint>
#include <vector>

#include "agsenet/data.h"

namespace agsenet {

struct SceneSpec {
  int64_t height = 64;
  int64_t width = 64;
  int n_puddles = 2;
  uint64_t seed = 0;
};

// Axis-aligned ellipse in pixel coordinates (pixel (x, y) covers
// [x, x+1) x [y, y+1); its center is at (x + 0.5, y + 0.5)).
struct Ellipse {
  double cx = 0, cy = 0;
  double rx = 0, ry = 0;

  bool Contains(double x, double y) const;
  double Area() const;
};

// Synthetic road scene: a colored background above the horizon, a gray
// textured road below it, and `n_puddles` non-overlapping elliptical puddles
// on the road. Puddle pixels show the vertically mirrored background blended
// with a smoothed road tone. The mask marks exactly the pixels whose centers
// fall inside an ellipse. Depth is a planar-ground ramp (metres).
// `ellipses`, when given, receives the puddle geometry.
Sample SynthScene(const SceneSpec& spec, std::vector<Ellipse>* ellipses = nullptr);

// Row index of the horizon for a scene of the given height.
int64_t SceneHorizon(int64_t height);

struct FogParams {
  double beta = 0.0;                                // 1/m, >= 0
  std::array<double, 3> light = {1.0, 1.0, 1.0};  // per channel, in [0,1]

  void Validate() const;
};

// Atmospheric scattering: I = R t + L (1 - t), t = exp(-beta * depth).
// Requires sample.depth. The mask and depth are passed through unchanged.
Sample SynthFog(const Sample& sample, const FogParams& fog);

}  // namespace agsenet

#endif  // AGSENET_SYNTH_H_
