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

#include <Eigen/Core>

#include <algorithm>
#include <cstring>
#include <string>
#include <vector>

#include "agsenet/errors.h"
#include "agsenet/ops.h"
#include "agsenet/parallel.h"

namespace agsenet {
namespace {

using RowMatrix =
    Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatMap = Eigen::Map<RowMatrix>;
using ConstMatMap = Eigen::Map<const RowMatrix>;

struct ConvGeometry {
  int64_t n, cin, h, w;
  int64_t cout, kh, kw;
  int64_t oh, ow;
  int64_t stride, pad, dilation;

  int64_t patch() const { return cin * kh * kw; }
  int64_t out_pixels() const { return oh * ow; }
  // 1x1, stride 1, no padding: the input plane is already the column matrix.
  bool pointwise() const {
    return kh == 1 && kw == 1 && stride == 1 && pad == 0;
  }
};

void Im2Col(const float* x, const ConvGeometry& g, float* col) {
  for (int64_t c = 0; c < g.cin; ++c) {
    const float* plane = x + c * g.h * g.w;
    for (int64_t ki = 0; ki < g.kh; ++ki) {
      for (int64_t kj = 0; kj < g.kw; ++kj) {
        float* row = col + ((c * g.kh + ki) * g.kw + kj) * g.out_pixels();
        for (int64_t oy = 0; oy < g.oh; ++oy) {
          const int64_t iy = oy * g.stride - g.pad + ki * g.dilation;
          float* dst = row + oy * g.ow;
          if (iy < 0 || iy >= g.h) {
            std::fill(dst, dst + g.ow, 0.0f);
            continue;
          }
          const float* src = plane + iy * g.w;
          for (int64_t ox = 0; ox < g.ow; ++ox) {
            const int64_t ix = ox * g.stride - g.pad + kj * g.dilation;
            dst[ox] = (ix >= 0 && ix < g.w) ? src[ix] : 0.0f;
          }
        }
      }
    }
  }
}

void Col2ImAccumulate(const float* col, const ConvGeometry& g, float* dx) {
  for (int64_t c = 0; c < g.cin; ++c) {
    float* plane = dx + c * g.h * g.w;
    for (int64_t ki = 0; ki < g.kh; ++ki) {
      for (int64_t kj = 0; kj < g.kw; ++kj) {
        const float* row = col + ((c * g.kh + ki) * g.kw + kj) * g.out_pixels();
        for (int64_t oy = 0; oy < g.oh; ++oy) {
          const int64_t iy = oy * g.stride - g.pad + ki * g.dilation;
          if (iy < 0 || iy >= g.h) continue;
          const float* src = row + oy * g.ow;
          float* dst = plane + iy * g.w;
          for (int64_t ox = 0; ox < g.ow; ++ox) {
            const int64_t ix = ox * g.stride - g.pad + kj * g.dilation;
            if (ix >= 0 && ix < g.w) dst[ix] += src[ox];
          }
        }
      }
    }
  }
}

ConvGeometry CheckConv(const Tensor& x, const Tensor& weight, const Tensor& bias,
                       const Conv2dOptions& o) {
  if (x.rank() != 4) {
    throw DimensionError("conv2d input must be [N,C,H,W], got " +
                         ShapeToString(x.shape()));
  }
  if (weight.rank() != 4) {
    throw DimensionError("conv2d weight must be [Cout,Cin,kH,kW], got " +
                         ShapeToString(weight.shape()));
  }
  if (weight.dim(1) != x.dim(1)) {
    throw DimensionError("conv2d channel mismatch: input has " +
                         std::to_string(x.dim(1)) + " channels, weight expects " +
                         std::to_string(weight.dim(1)));
  }
  if (bias.defined() && (bias.rank() != 1 || bias.dim(0) != weight.dim(0))) {
    throw DimensionError("conv2d bias must be [" + std::to_string(weight.dim(0)) +
                         "], got " + ShapeToString(bias.shape()));
  }
  if (o.stride < 1 || o.dilation < 1 || o.padding < 0) {
    throw ConfigError("conv2d needs stride >= 1, dilation >= 1, padding >= 0");
  }
  ConvGeometry g{};
  g.n = x.dim(0);
  g.cin = x.dim(1);
  g.h = x.dim(2);
  g.w = x.dim(3);
  g.cout = weight.dim(0);
  g.kh = weight.dim(2);
  g.kw = weight.dim(3);
  g.stride = o.stride;
  g.pad = o.padding;
  g.dilation = o.dilation;
  const int64_t span_h = g.h + 2 * g.pad - g.dilation * (g.kh - 1) - 1;
  const int64_t span_w = g.w + 2 * g.pad - g.dilation * (g.kw - 1) - 1;
  if (span_h < 0 || span_w < 0) {
    throw ConfigError("conv2d output size is non-positive for input " +
                      ShapeToString(x.shape()) + " with kernel " +
                      std::to_string(g.kh) + "x" + std::to_string(g.kw) +
                      ", padding " + std::to_string(g.pad) + ", dilation " +
                      std::to_string(g.dilation));
  }
  g.oh = span_h / g.stride + 1;
  g.ow = span_w / g.stride + 1;
  return g;
}

}  // namespace

Tensor Conv2d(const Tensor& x, const Tensor& weight, const Tensor& bias,
              const Conv2dOptions& options) {
  const ConvGeometry g = CheckConv(x, weight, bias, options);
  const int64_t in_plane = g.cin * g.h * g.w;
  const int64_t out_plane = g.cout * g.out_pixels();
  FloatBuffer out(static_cast<size_t>(g.n * out_plane));

  const float* xs = x.data().data();
  const float* ws = weight.data().data();
  const float* bs = bias.defined() ? bias.data().data() : nullptr;
  ParallelFor(g.n, [&](int64_t n) {
    FloatBuffer col;
    const float* col_ptr = xs + n * in_plane;
    if (!g.pointwise()) {
      col.resize(static_cast<size_t>(g.patch() * g.out_pixels()));
      Im2Col(xs + n * in_plane, g, col.data());
      col_ptr = col.data();
    }
    ConstMatMap wm(ws, g.cout, g.patch());
    ConstMatMap cm(col_ptr, g.patch(), g.out_pixels());
    MatMap ym(out.data() + n * out_plane, g.cout, g.out_pixels());
    ym.noalias() = wm * cm;
    if (bs != nullptr) {
      for (int64_t c = 0; c < g.cout; ++c) ym.row(c).array() += bs[c];
    }
  });

  return internal::MakeResult(
      {g.n, g.cout, g.oh, g.ow}, std::move(out), {x, weight, bias}, "conv2d",
      [x, weight, bias, g, in_plane, out_plane](std::span<const float>,
                                                std::span<const float> dout) {
        std::span<float> dx = internal::GradSink(x);
        std::span<float> dw = internal::GradSink(weight);
        std::span<float> db = internal::GradSink(bias);
        const float* xs = x.data().data();
        const float* ws = weight.data().data();
        const size_t col_size = static_cast<size_t>(g.patch() * g.out_pixels());

        if (!db.empty()) {
          for (int64_t n = 0; n < g.n; ++n) {
            ConstMatMap dy(dout.data() + n * out_plane, g.cout, g.out_pixels());
            for (int64_t c = 0; c < g.cout; ++c) db[c] += dy.row(c).sum();
          }
        }

        // Per-sample weight-gradient partials, reduced in sample order so the
        // sum does not depend on how samples were distributed over threads.
        FloatBuffer dw_partial;
        const int64_t wsize = g.cout * g.patch();
        if (!dw.empty()) dw_partial.assign(static_cast<size_t>(g.n * wsize), 0.0f);

        ParallelFor(g.n, [&](int64_t n) {
          ConstMatMap dy(dout.data() + n * out_plane, g.cout, g.out_pixels());
          FloatBuffer col;
          const float* col_ptr = xs + n * in_plane;
          if (!g.pointwise()) {
            col.resize(col_size);
            if (!dw.empty()) Im2Col(xs + n * in_plane, g, col.data());
            col_ptr = col.data();
          }
          if (!dw.empty()) {
            ConstMatMap cm(col_ptr, g.patch(), g.out_pixels());
            MatMap dwm(dw_partial.data() + n * wsize, g.cout, g.patch());
            dwm.noalias() = dy * cm.transpose();
          }
          if (!dx.empty()) {
            ConstMatMap wm(ws, g.cout, g.patch());
            if (g.pointwise()) {
              MatMap dxm(dx.data() + n * in_plane, g.cin, g.out_pixels());
              dxm.noalias() += wm.transpose() * dy;
            } else {
              MatMap dcol(col.data(), g.patch(), g.out_pixels());
              dcol.noalias() = wm.transpose() * dy;
              Col2ImAccumulate(col.data(), g, dx.data() + n * in_plane);
            }
          }
        });

        if (!dw.empty()) {
          for (int64_t n = 0; n < g.n; ++n) {
            const float* part = dw_partial.data() + n * wsize;
            for (int64_t i = 0; i < wsize; ++i) dw[i] += part[i];
          }
        }
      });
}

}  // namespace agsenet
