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

#include "agsenet/synth.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "agsenet/errors.h"
#include "agsenet/rng.h"

namespace agsenet {
namespace {

constexpr int kPlacementAttempts = 500;
constexpr double kFarDepth = 200.0;

float Clamp01(double v) { return static_cast<float>(std::clamp(v, 0.0, 1.0)); }

// Reflects row index r into [0, n).
int64_t Mirror(int64_t r, int64_t n) {
  const int64_t period = 2 * n;
  r %= period;
  if (r < 0) r += period;
  return r < n ? r : period - 1 - r;
}

bool BoxesOverlap(const Ellipse& a, const Ellipse& b) {
  constexpr double kGap = 1.0;
  return std::abs(a.cx - b.cx) < a.rx + b.rx + kGap &&
         std::abs(a.cy - b.cy) < a.ry + b.ry + kGap;
}

}  // namespace

bool Ellipse::Contains(double x, double y) const {
  const double dx = (x - cx) / rx, dy = (y - cy) / ry;
  return dx * dx + dy * dy <= 1.0;
}

double Ellipse::Area() const { return std::numbers::pi * rx * ry; }

int64_t SceneHorizon(int64_t height) { return (height * 3) / 8; }

Sample SynthScene(const SceneSpec& spec, std::vector<Ellipse>* ellipses) {
  if (spec.height < 16 || spec.width < 16) {
    throw ConfigError("synthetic scenes need at least 16x16 pixels, got " +
                      std::to_string(spec.height) + "x" + std::to_string(spec.width));
  }
  if (spec.n_puddles < 0) throw ConfigError("n_puddles must be >= 0");
  const int64_t h = spec.height, w = spec.width, plane = h * w;
  const int64_t horizon = SceneHorizon(h);
  Rng rng(spec.seed);

  Sample s;
  s.id = "synth_" + std::to_string(spec.seed);
  s.image = Tensor({1, 3, h, w});
  s.mask = Tensor({1, 1, h, w});
  s.depth = Tensor({1, 1, h, w});
  std::span<float> img = s.image.data();

  // Background: sky gradient with a few colored blocks (buildings, trees).
  const double sky_top[3] = {rng.Uniform(0.35, 0.6), rng.Uniform(0.55, 0.8),
                             rng.Uniform(0.8, 1.0)};
  for (int64_t y = 0; y < horizon; ++y) {
    const double t = static_cast<double>(y) / std::max<int64_t>(1, horizon - 1);
    for (int64_t x = 0; x < w; ++x) {
      for (int c = 0; c < 3; ++c) {
        img[c * plane + y * w + x] = Clamp01(sky_top[c] * (1.0 - 0.3 * t));
      }
    }
  }
  const int blocks = 3 + static_cast<int>(rng.Below(4));
  for (int b = 0; b < blocks; ++b) {
    const int64_t bw = std::max<int64_t>(2, static_cast<int64_t>(rng.Uniform(0.1, 0.3) * w));
    const int64_t bh = std::max<int64_t>(2, static_cast<int64_t>(rng.Uniform(0.3, 0.9) * horizon));
    const int64_t x0 = static_cast<int64_t>(rng.Below(static_cast<uint64_t>(w - bw + 1)));
    const double color[3] = {rng.Uniform(0.1, 0.9), rng.Uniform(0.1, 0.9),
                             rng.Uniform(0.1, 0.9)};
    for (int64_t y = horizon - bh; y < horizon; ++y) {
      for (int64_t x = x0; x < x0 + bw; ++x) {
        for (int c = 0; c < 3; ++c) img[c * plane + y * w + x] = static_cast<float>(color[c]);
      }
    }
  }

  // Road: gray with per-pixel grain.
  const double road_tone = rng.Uniform(0.35, 0.5);
  for (int64_t y = horizon; y < h; ++y) {
    for (int64_t x = 0; x < w; ++x) {
      const double v = road_tone + rng.Uniform(-0.08, 0.08);
      for (int c = 0; c < 3; ++c) img[c * plane + y * w + x] = Clamp01(v);
    }
  }

  // Puddles: bounding boxes strictly inside the road and pairwise separated.
  std::vector<Ellipse> placed;
  const double road_h = static_cast<double>(h - horizon);
  for (int p = 0; p < spec.n_puddles; ++p) {
    bool ok = false;
    for (int attempt = 0; attempt < kPlacementAttempts && !ok; ++attempt) {
      Ellipse e;
      e.rx = rng.Uniform(0.08, 0.18) * w;
      e.ry = rng.Uniform(0.08, 0.18) * road_h;
      e.cx = rng.Uniform(e.rx + 1.0, w - e.rx - 1.0);
      e.cy = rng.Uniform(horizon + e.ry + 1.0, h - e.ry - 1.0);
      ok = std::none_of(placed.begin(), placed.end(),
                        [&e](const Ellipse& o) { return BoxesOverlap(e, o); });
      if (ok) placed.push_back(e);
    }
    if (!ok) {
      throw ConfigError("cannot place " + std::to_string(spec.n_puddles) +
                        " puddles in a " + std::to_string(h) + "x" + std::to_string(w) +
                        " scene; use fewer puddles or a larger size");
    }
  }

  std::span<float> mask = s.mask.data();
  const std::vector<float> base(img.begin(), img.end());
  constexpr double kReflection = 0.7;
  for (const Ellipse& e : placed) {
    const int64_t y0 = static_cast<int64_t>(std::floor(e.cy - e.ry));
    const int64_t y1 = static_cast<int64_t>(std::ceil(e.cy + e.ry));
    const int64_t x0 = static_cast<int64_t>(std::floor(e.cx - e.rx));
    const int64_t x1 = static_cast<int64_t>(std::ceil(e.cx + e.rx));
    for (int64_t y = std::max<int64_t>(0, y0); y <= std::min(h - 1, y1); ++y) {
      // Reflection of the scene about the horizon line.
      const int64_t src_y = Mirror(2 * horizon - 1 - y, horizon);
      for (int64_t x = std::max<int64_t>(0, x0); x <= std::min(w - 1, x1); ++x) {
        if (!e.Contains(x + 0.5, y + 0.5)) continue;
        mask[y * w + x] = 1.0f;
        for (int c = 0; c < 3; ++c) {
          const double reflected = base[c * plane + src_y * w + x];
          img[c * plane + y * w + x] =
              Clamp01(kReflection * reflected + (1.0 - kReflection) * road_tone * 0.8);
        }
      }
    }
  }

  // Planar ground seen from a camera at the horizon row; the background is
  // placed at a fixed far distance.
  std::span<float> depth = s.depth->data();
  for (int64_t y = 0; y < h; ++y) {
    const double d =
        y < horizon ? kFarDepth
                    : std::min(kFarDepth, 1.5 * static_cast<double>(h) / (y - horizon + 1));
    std::fill(depth.begin() + y * w, depth.begin() + (y + 1) * w, static_cast<float>(d));
  }

  if (ellipses != nullptr) *ellipses = placed;
  return s;
}

void FogParams::Validate() const {
  if (!(beta >= 0.0) || !std::isfinite(beta)) {
    throw ConfigError("fog beta must be a finite value >= 0");
  }
  for (double l : light) {
    if (!(l >= 0.0 && l <= 1.0)) throw ConfigError("atmospheric light must lie in [0,1]");
  }
}

Sample SynthFog(const Sample& sample, const FogParams& fog) {
  fog.Validate();
  if (!sample.depth) {
    throw ConfigError("fog synthesis needs a depth map for sample '" + sample.id + "'");
  }
  ValidateSample(sample);
  Sample out;
  out.id = sample.id;
  out.mask = sample.mask.Clone();
  out.depth = sample.depth->Clone();
  out.image = sample.image.Clone();
  if (fog.beta == 0.0) return out;
  const int64_t plane = sample.height() * sample.width();
  std::span<const float> depth = sample.depth->data();
  std::span<float> img = out.image.data();
  for (int64_t p = 0; p < plane; ++p) {
    const double t = std::exp(-fog.beta * depth[p]);
    for (int c = 0; c < 3; ++c) {
      float& v = img[c * plane + p];
      v = Clamp01(v * t + fog.light[c] * (1.0 - t));
    }
  }
  return out;
}

}  // namespace agsenet
