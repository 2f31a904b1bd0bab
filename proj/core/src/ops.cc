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

#include "agsenet/ops.h"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

#include "agsenet/errors.h"

namespace agsenet {
namespace {

using internal::GradSink;
using internal::MakeResult;

using RowMatrix =
    Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatMap = Eigen::Map<RowMatrix>;
using ConstMatMap = Eigen::Map<const RowMatrix>;

void RequireRank(const Tensor& x, int rank, const char* op) {
  if (x.rank() != rank) {
    throw DimensionError(std::string(op) + " expects a rank-" +
                         std::to_string(rank) + " tensor, got " +
                         ShapeToString(x.shape()));
  }
}

int NormalizeAxis(int axis, int rank, const char* op) {
  const int a = axis < 0 ? axis + rank : axis;
  if (a < 0 || a >= rank) {
    throw DimensionError(std::string(op) + ": axis " + std::to_string(axis) +
                         " out of range for rank " + std::to_string(rank));
  }
  return a;
}

// Splits a shape around `axis` into (outer, extent, inner) element counts.
struct AxisView {
  int64_t outer = 1, extent = 1, inner = 1;
};

AxisView ViewAround(const Shape& shape, int axis) {
  AxisView v;
  for (int i = 0; i < axis; ++i) v.outer *= shape[i];
  v.extent = shape[axis];
  for (size_t i = axis + 1; i < shape.size(); ++i) v.inner *= shape[i];
  return v;
}

// Broadcast bookkeeping for two equal-rank shapes.
struct Broadcast {
  Shape out;
  std::vector<int64_t> stride_a, stride_b;  // 0 along broadcast axes
  bool same = false;
};

Broadcast MakeBroadcast(const Shape& a, const Shape& b, const char* op) {
  Broadcast bc;
  if (a == b) {
    bc.out = a;
    bc.same = true;
    return bc;
  }
  if (a.size() != b.size()) {
    throw DimensionError(std::string(op) + ": rank mismatch " +
                         ShapeToString(a) + " vs " + ShapeToString(b));
  }
  const size_t r = a.size();
  bc.out.resize(r);
  for (size_t i = 0; i < r; ++i) {
    if (a[i] != b[i] && a[i] != 1 && b[i] != 1) {
      throw DimensionError(std::string(op) + ": cannot broadcast " +
                           ShapeToString(a) + " with " + ShapeToString(b));
    }
    bc.out[i] = std::max(a[i], b[i]);
  }
  bc.stride_a.assign(r, 0);
  bc.stride_b.assign(r, 0);
  int64_t sa = 1, sb = 1;
  for (size_t i = r; i-- > 0;) {
    bc.stride_a[i] = a[i] == 1 ? 0 : sa;
    bc.stride_b[i] = b[i] == 1 ? 0 : sb;
    sa *= a[i];
    sb *= b[i];
  }
  return bc;
}

// Calls fn(out_index, a_index, b_index) over the broadcast output.
template <typename Fn>
void ForEachBroadcast(const Broadcast& bc, Fn&& fn) {
  const int64_t total = NumElements(bc.out);
  if (bc.same) {
    for (int64_t i = 0; i < total; ++i) fn(i, i, i);
    return;
  }
  const size_t r = bc.out.size();
  std::vector<int64_t> idx(r, 0);
  int64_t ia = 0, ib = 0;
  for (int64_t o = 0; o < total; ++o) {
    fn(o, ia, ib);
    for (size_t d = r; d-- > 0;) {
      ++idx[d];
      ia += bc.stride_a[d];
      ib += bc.stride_b[d];
      if (idx[d] < bc.out[d]) break;
      ia -= bc.stride_a[d] * idx[d];
      ib -= bc.stride_b[d] * idx[d];
      idx[d] = 0;
    }
  }
}

enum class BinaryKind { kAdd, kSub, kMul };

Tensor Binary(const Tensor& a, const Tensor& b, BinaryKind kind,
              const char* name) {
  Broadcast bc = MakeBroadcast(a.shape(), b.shape(), name);
  FloatBuffer out(static_cast<size_t>(NumElements(bc.out)));
  const float* pa = a.data().data();
  const float* pb = b.data().data();
  ForEachBroadcast(bc, [&](int64_t o, int64_t ia, int64_t ib) {
    switch (kind) {
      case BinaryKind::kAdd: out[o] = pa[ia] + pb[ib]; break;
      case BinaryKind::kSub: out[o] = pa[ia] - pb[ib]; break;
      case BinaryKind::kMul: out[o] = pa[ia] * pb[ib]; break;
    }
  });
  Shape shape = bc.out;
  return MakeResult(
      std::move(shape), std::move(out), {a, b}, name,
      [a, b, bc, kind](std::span<const float>, std::span<const float> dout) {
        std::span<float> da = GradSink(a);
        std::span<float> db = GradSink(b);
        const float* pa = a.data().data();
        const float* pb = b.data().data();
        ForEachBroadcast(bc, [&](int64_t o, int64_t ia, int64_t ib) {
          const float g = dout[o];
          switch (kind) {
            case BinaryKind::kAdd:
              if (!da.empty()) da[ia] += g;
              if (!db.empty()) db[ib] += g;
              break;
            case BinaryKind::kSub:
              if (!da.empty()) da[ia] += g;
              if (!db.empty()) db[ib] -= g;
              break;
            case BinaryKind::kMul:
              if (!da.empty()) da[ia] += g * pb[ib];
              if (!db.empty()) db[ib] += g * pa[ia];
              break;
          }
        });
      });
}

}  // namespace

Tensor MaxPool2x2(const Tensor& x) {
  RequireRank(x, 4, "maxpool2x2");
  const int64_t n = x.dim(0), c = x.dim(1), h = x.dim(2), w = x.dim(3);
  const int64_t oh = (h + 1) / 2, ow = (w + 1) / 2;
  FloatBuffer out(static_cast<size_t>(n * c * oh * ow));
  std::vector<int32_t> argmax(out.size());
  const float* px = x.data().data();
  for (int64_t p = 0; p < n * c; ++p) {
    const float* plane = px + p * h * w;
    for (int64_t oy = 0; oy < oh; ++oy) {
      for (int64_t ox = 0; ox < ow; ++ox) {
        int64_t best = (2 * oy) * w + 2 * ox;
        for (int64_t dy = 0; dy < 2; ++dy) {
          const int64_t iy = 2 * oy + dy;
          if (iy >= h) break;
          for (int64_t dx = 0; dx < 2; ++dx) {
            const int64_t ix = 2 * ox + dx;
            if (ix >= w) break;
            const float v = plane[iy * w + ix];
            if (v > plane[best] || std::isnan(v)) best = iy * w + ix;
          }
        }
        const size_t o = static_cast<size_t>((p * oh + oy) * ow + ox);
        out[o] = plane[best];
        argmax[o] = static_cast<int32_t>(best);
      }
    }
  }
  return MakeResult({n, c, oh, ow}, std::move(out), {x}, "maxpool2x2",
                    [x, argmax = std::move(argmax), h, w, oh, ow](
                        std::span<const float>, std::span<const float> dout) {
                      std::span<float> dx = GradSink(x);
                      const int64_t planes =
                          static_cast<int64_t>(dout.size()) / (oh * ow);
                      for (int64_t p = 0; p < planes; ++p) {
                        for (int64_t i = 0; i < oh * ow; ++i) {
                          const int64_t o = p * oh * ow + i;
                          dx[p * h * w + argmax[o]] += dout[o];
                        }
                      }
                    });
}

namespace {

struct LerpAxis {
  std::vector<int64_t> lo, hi;
  FloatBuffer frac;
};

// Half-pixel source coordinates: src = (dst + 0.5) * in/out - 0.5, clamped
// below at 0.
LerpAxis MakeLerpAxis(int64_t in, int64_t out) {
  LerpAxis a;
  a.lo.resize(out);
  a.hi.resize(out);
  a.frac.resize(out);
  const double scale = static_cast<double>(in) / static_cast<double>(out);
  for (int64_t i = 0; i < out; ++i) {
    double src = (static_cast<double>(i) + 0.5) * scale - 0.5;
    if (src < 0.0) src = 0.0;
    int64_t lo = static_cast<int64_t>(src);
    if (lo > in - 1) lo = in - 1;
    a.lo[i] = lo;
    a.hi[i] = std::min(lo + 1, in - 1);
    a.frac[i] = static_cast<float>(src - static_cast<double>(lo));
  }
  return a;
}

}  // namespace

Tensor UpsampleBilinear(const Tensor& x, int64_t out_h, int64_t out_w) {
  RequireRank(x, 4, "upsample_bilinear");
  if (out_h < 1 || out_w < 1) {
    throw ConfigError("upsample_bilinear target must be at least 1x1");
  }
  const int64_t n = x.dim(0), c = x.dim(1), h = x.dim(2), w = x.dim(3);
  LerpAxis ay = MakeLerpAxis(h, out_h);
  LerpAxis ax = MakeLerpAxis(w, out_w);
  FloatBuffer out(static_cast<size_t>(n * c * out_h * out_w));
  const float* px = x.data().data();
  for (int64_t p = 0; p < n * c; ++p) {
    const float* plane = px + p * h * w;
    float* dst = out.data() + p * out_h * out_w;
    for (int64_t oy = 0; oy < out_h; ++oy) {
      const float fy = ay.frac[oy];
      const float* r0 = plane + ay.lo[oy] * w;
      const float* r1 = plane + ay.hi[oy] * w;
      for (int64_t ox = 0; ox < out_w; ++ox) {
        const float fx = ax.frac[ox];
        const float top = r0[ax.lo[ox]] * (1.0f - fx) + r0[ax.hi[ox]] * fx;
        const float bot = r1[ax.lo[ox]] * (1.0f - fx) + r1[ax.hi[ox]] * fx;
        dst[oy * out_w + ox] = top * (1.0f - fy) + bot * fy;
      }
    }
  }
  return MakeResult(
      {n, c, out_h, out_w}, std::move(out), {x}, "upsample_bilinear",
      [x, ay = std::move(ay), ax = std::move(ax), h, w, out_h, out_w](
          std::span<const float>, std::span<const float> dout) {
        std::span<float> dx = GradSink(x);
        const int64_t planes = static_cast<int64_t>(dout.size()) / (out_h * out_w);
        for (int64_t p = 0; p < planes; ++p) {
          float* plane = dx.data() + p * h * w;
          const float* g = dout.data() + p * out_h * out_w;
          for (int64_t oy = 0; oy < out_h; ++oy) {
            const float fy = ay.frac[oy];
            float* r0 = plane + ay.lo[oy] * w;
            float* r1 = plane + ay.hi[oy] * w;
            for (int64_t ox = 0; ox < out_w; ++ox) {
              const float fx = ax.frac[ox];
              const float v = g[oy * out_w + ox];
              r0[ax.lo[ox]] += v * (1.0f - fy) * (1.0f - fx);
              r0[ax.hi[ox]] += v * (1.0f - fy) * fx;
              r1[ax.lo[ox]] += v * fy * (1.0f - fx);
              r1[ax.hi[ox]] += v * fy * fx;
            }
          }
        }
      });
}

Tensor Relu(const Tensor& x) {
  FloatBuffer out(x.data().begin(), x.data().end());
  for (float& v : out) v = v < 0.0f ? 0.0f : v;  // keeps NaN
  return MakeResult(x.shape(), std::move(out), {x}, "relu",
                    [x](std::span<const float> out, std::span<const float> dout) {
                      std::span<float> dx = GradSink(x);
                      for (size_t i = 0; i < dout.size(); ++i) {
                        if (out[i] > 0.0f) dx[i] += dout[i];
                      }
                    });
}

Tensor Sigmoid(const Tensor& x) {
  FloatBuffer out(x.data().begin(), x.data().end());
  for (float& v : out) {
    // Branches keep exp() from overflowing for large |v|.
    if (v >= 0.0f) {
      v = 1.0f / (1.0f + std::exp(-v));
    } else {
      const float e = std::exp(v);
      v = e / (1.0f + e);
    }
  }
  return MakeResult(x.shape(), std::move(out), {x}, "sigmoid",
                    [x](std::span<const float> out, std::span<const float> dout) {
                      std::span<float> dx = GradSink(x);
                      for (size_t i = 0; i < dout.size(); ++i) {
                        dx[i] += dout[i] * out[i] * (1.0f - out[i]);
                      }
                    });
}

Tensor BatchNorm(const Tensor& x, const Tensor& gamma, const Tensor& beta,
                 Tensor& running_mean, Tensor& running_var,
                 const BatchNormOptions& options) {
  RequireRank(x, 4, "batchnorm");
  const int64_t n = x.dim(0), c = x.dim(1), hw = x.dim(2) * x.dim(3);
  const Tensor* checked[] = {&gamma, &beta, &running_mean, &running_var};
  for (const Tensor* t : checked) {
    if (t->rank() != 1 || t->dim(0) != c) {
      throw DimensionError("batchnorm parameters must be [" + std::to_string(c) +
                           "], got " + ShapeToString(t->shape()));
    }
  }
  const int64_t count = n * hw;
  const float* px = x.data().data();
  FloatBuffer mean(c), inv_std(c);
  if (options.training) {
    if (count < 2) {
      throw ConfigError(
          "batchnorm in training mode needs more than one value per channel, "
          "got input " + ShapeToString(x.shape()));
    }
    std::span<float> rm = running_mean.data();
    std::span<float> rv = running_var.data();
    for (int64_t ch = 0; ch < c; ++ch) {
      double s = 0.0;
      for (int64_t b = 0; b < n; ++b) {
        const float* p = px + (b * c + ch) * hw;
        for (int64_t i = 0; i < hw; ++i) s += p[i];
      }
      const double mu = s / static_cast<double>(count);
      double ss = 0.0;
      for (int64_t b = 0; b < n; ++b) {
        const float* p = px + (b * c + ch) * hw;
        for (int64_t i = 0; i < hw; ++i) {
          const double d = p[i] - mu;
          ss += d * d;
        }
      }
      const double var = ss / static_cast<double>(count);
      mean[ch] = static_cast<float>(mu);
      inv_std[ch] = static_cast<float>(1.0 / std::sqrt(var + options.eps));
      const double unbiased = ss / static_cast<double>(count - 1);
      rm[ch] = static_cast<float>((1.0 - options.momentum) * rm[ch] +
                                  options.momentum * mu);
      rv[ch] = static_cast<float>((1.0 - options.momentum) * rv[ch] +
                                  options.momentum * unbiased);
    }
  } else {
    for (int64_t ch = 0; ch < c; ++ch) {
      mean[ch] = running_mean.data()[ch];
      inv_std[ch] = static_cast<float>(
          1.0 / std::sqrt(static_cast<double>(running_var.data()[ch]) + options.eps));
    }
  }

  FloatBuffer out(x.data().size());
  const float* pg = gamma.data().data();
  const float* pb = beta.data().data();
  for (int64_t b = 0; b < n; ++b) {
    for (int64_t ch = 0; ch < c; ++ch) {
      const float* p = px + (b * c + ch) * hw;
      float* o = out.data() + (b * c + ch) * hw;
      const float scale = pg[ch] * inv_std[ch];
      const float shift = pb[ch] - mean[ch] * scale;
      for (int64_t i = 0; i < hw; ++i) o[i] = p[i] * scale + shift;
    }
  }

  const bool training = options.training;
  return MakeResult(
      x.shape(), std::move(out), {x, gamma, beta}, "batchnorm",
      [x, gamma, beta, mean = std::move(mean), inv_std = std::move(inv_std), n,
       c, hw, training](std::span<const float>, std::span<const float> dout) {
        std::span<float> dx = GradSink(x);
        std::span<float> dg = GradSink(gamma);
        std::span<float> db = GradSink(beta);
        const float* px = x.data().data();
        const float* pg = gamma.data().data();
        const double count = static_cast<double>(n * hw);
        for (int64_t ch = 0; ch < c; ++ch) {
          double sum_dy = 0.0, sum_dy_xhat = 0.0;
          for (int64_t b = 0; b < n; ++b) {
            const float* p = px + (b * c + ch) * hw;
            const float* g = dout.data() + (b * c + ch) * hw;
            for (int64_t i = 0; i < hw; ++i) {
              const double xhat = (p[i] - mean[ch]) * inv_std[ch];
              sum_dy += g[i];
              sum_dy_xhat += g[i] * xhat;
            }
          }
          if (!dg.empty()) dg[ch] += static_cast<float>(sum_dy_xhat);
          if (!db.empty()) db[ch] += static_cast<float>(sum_dy);
          if (dx.empty()) continue;
          const double k = pg[ch] * inv_std[ch];
          const double mean_dy = training ? sum_dy / count : 0.0;
          const double mean_dy_xhat = training ? sum_dy_xhat / count : 0.0;
          for (int64_t b = 0; b < n; ++b) {
            const float* p = px + (b * c + ch) * hw;
            const float* g = dout.data() + (b * c + ch) * hw;
            float* d = dx.data() + (b * c + ch) * hw;
            for (int64_t i = 0; i < hw; ++i) {
              const double xhat = (p[i] - mean[ch]) * inv_std[ch];
              d[i] += static_cast<float>(k * (g[i] - mean_dy - xhat * mean_dy_xhat));
            }
          }
        }
      });
}

Tensor Softmax(const Tensor& x, int axis) {
  const int a = NormalizeAxis(axis, x.rank(), "softmax");
  const AxisView v = ViewAround(x.shape(), a);
  FloatBuffer out(x.data().size());
  const float* px = x.data().data();
  for (int64_t o = 0; o < v.outer; ++o) {
    for (int64_t in = 0; in < v.inner; ++in) {
      const int64_t base = o * v.extent * v.inner + in;
      float mx = -std::numeric_limits<float>::infinity();
      for (int64_t e = 0; e < v.extent; ++e) mx = std::max(mx, px[base + e * v.inner]);
      double total = 0.0;
      for (int64_t e = 0; e < v.extent; ++e) {
        const float ex = std::exp(px[base + e * v.inner] - mx);
        out[base + e * v.inner] = ex;
        total += ex;
      }
      const float inv = static_cast<float>(1.0 / total);
      for (int64_t e = 0; e < v.extent; ++e) out[base + e * v.inner] *= inv;
    }
  }
  return MakeResult(x.shape(), std::move(out), {x}, "softmax",
                    [x, v](std::span<const float> y, std::span<const float> dout) {
                      std::span<float> dx = GradSink(x);
                      for (int64_t o = 0; o < v.outer; ++o) {
                        for (int64_t in = 0; in < v.inner; ++in) {
                          const int64_t base = o * v.extent * v.inner + in;
                          double dot = 0.0;
                          for (int64_t e = 0; e < v.extent; ++e) {
                            const int64_t i = base + e * v.inner;
                            dot += static_cast<double>(dout[i]) * y[i];
                          }
                          for (int64_t e = 0; e < v.extent; ++e) {
                            const int64_t i = base + e * v.inner;
                            dx[i] += y[i] * static_cast<float>(dout[i] - dot);
                          }
                        }
                      }
                    });
}

Tensor MatMul(const Tensor& a, const Tensor& b) {
  const bool batched = a.rank() == 3;
  if (!((a.rank() == 2 && b.rank() == 2) || (a.rank() == 3 && b.rank() == 3))) {
    throw DimensionError("matmul expects two rank-2 or two rank-3 tensors, got " +
                         ShapeToString(a.shape()) + " and " +
                         ShapeToString(b.shape()));
  }
  const int64_t batch = batched ? a.dim(0) : 1;
  if (batched && b.dim(0) != batch) {
    throw DimensionError("matmul batch mismatch: " + ShapeToString(a.shape()) +
                         " vs " + ShapeToString(b.shape()));
  }
  const int64_t m = a.dim(-2), k = a.dim(-1), n = b.dim(-1);
  if (b.dim(-2) != k) {
    throw DimensionError("matmul inner dimension mismatch: " +
                         ShapeToString(a.shape()) + " x " +
                         ShapeToString(b.shape()));
  }
  FloatBuffer out(static_cast<size_t>(batch * m * n));
  for (int64_t i = 0; i < batch; ++i) {
    ConstMatMap am(a.data().data() + i * m * k, m, k);
    ConstMatMap bm(b.data().data() + i * k * n, k, n);
    MatMap om(out.data() + i * m * n, m, n);
    om.noalias() = am * bm;
  }
  Shape shape = batched ? Shape{batch, m, n} : Shape{m, n};
  return MakeResult(std::move(shape), std::move(out), {a, b}, "matmul",
                    [a, b, batch, m, k, n](std::span<const float>,
                                           std::span<const float> dout) {
                      std::span<float> da = GradSink(a);
                      std::span<float> db = GradSink(b);
                      for (int64_t i = 0; i < batch; ++i) {
                        ConstMatMap g(dout.data() + i * m * n, m, n);
                        if (!da.empty()) {
                          ConstMatMap bm(b.data().data() + i * k * n, k, n);
                          MatMap dam(da.data() + i * m * k, m, k);
                          dam.noalias() += g * bm.transpose();
                        }
                        if (!db.empty()) {
                          ConstMatMap am(a.data().data() + i * m * k, m, k);
                          MatMap dbm(db.data() + i * k * n, k, n);
                          dbm.noalias() += am.transpose() * g;
                        }
                      }
                    });
}

Tensor GlobalAvgPool(const Tensor& x) {
  RequireRank(x, 4, "global_avg_pool");
  const int64_t n = x.dim(0), c = x.dim(1), hw = x.dim(2) * x.dim(3);
  FloatBuffer out(static_cast<size_t>(n * c));
  const float* px = x.data().data();
  for (int64_t p = 0; p < n * c; ++p) {
    double s = 0.0;
    for (int64_t i = 0; i < hw; ++i) s += px[p * hw + i];
    out[p] = static_cast<float>(s / static_cast<double>(hw));
  }
  return MakeResult({n, c, 1, 1}, std::move(out), {x}, "global_avg_pool",
                    [x, hw](std::span<const float>, std::span<const float> dout) {
                      std::span<float> dx = GradSink(x);
                      const float inv = 1.0f / static_cast<float>(hw);
                      for (size_t p = 0; p < dout.size(); ++p) {
                        const float g = dout[p] * inv;
                        for (int64_t i = 0; i < hw; ++i) dx[p * hw + i] += g;
                      }
                    });
}

Tensor Concat(const std::vector<Tensor>& xs, int axis) {
  if (xs.empty()) throw DimensionError("concat of an empty list");
  const int rank = xs[0].rank();
  const int a = NormalizeAxis(axis, rank, "concat");
  Shape shape = xs[0].shape();
  int64_t total = 0;
  for (const Tensor& t : xs) {
    if (t.rank() != rank) throw DimensionError("concat rank mismatch");
    for (int d = 0; d < rank; ++d) {
      if (d != a && t.dim(d) != shape[d]) {
        throw DimensionError("concat shape mismatch off axis " +
                             std::to_string(a) + ": " + ShapeToString(shape) +
                             " vs " + ShapeToString(t.shape()));
      }
    }
    total += t.dim(a);
  }
  shape[a] = total;
  const AxisView v = ViewAround(shape, a);
  FloatBuffer out(static_cast<size_t>(NumElements(shape)));
  int64_t offset = 0;
  for (const Tensor& t : xs) {
    const int64_t chunk = t.dim(a) * v.inner;
    const float* src = t.data().data();
    for (int64_t o = 0; o < v.outer; ++o) {
      std::copy(src + o * chunk, src + (o + 1) * chunk,
                out.data() + o * total * v.inner + offset);
    }
    offset += chunk;
  }
  return MakeResult(std::move(shape), std::move(out), xs, "concat",
                    [xs, a, v, total](std::span<const float>,
                                      std::span<const float> dout) {
                      int64_t offset = 0;
                      for (const Tensor& t : xs) {
                        const int64_t chunk = t.dim(a) * v.inner;
                        std::span<float> dt = GradSink(t);
                        if (!dt.empty()) {
                          for (int64_t o = 0; o < v.outer; ++o) {
                            const float* g = dout.data() + o * total * v.inner + offset;
                            float* d = dt.data() + o * chunk;
                            for (int64_t i = 0; i < chunk; ++i) d[i] += g[i];
                          }
                        }
                        offset += chunk;
                      }
                    });
}

std::vector<Tensor> Split(const Tensor& x, int axis,
                          const std::vector<int64_t>& sizes) {
  const int a = NormalizeAxis(axis, x.rank(), "split");
  const int64_t sum = std::accumulate(sizes.begin(), sizes.end(), int64_t{0});
  if (sum != x.dim(a)) {
    throw DimensionError("split sizes sum to " + std::to_string(sum) +
                         " but axis has extent " + std::to_string(x.dim(a)));
  }
  const AxisView v = ViewAround(x.shape(), a);
  std::vector<Tensor> parts;
  int64_t offset = 0;
  for (int64_t size : sizes) {
    Shape shape = x.shape();
    shape[a] = size;
    const int64_t chunk = size * v.inner;
    FloatBuffer out(static_cast<size_t>(v.outer * chunk));
    const float* src = x.data().data();
    for (int64_t o = 0; o < v.outer; ++o) {
      std::copy(src + o * v.extent * v.inner + offset,
                src + o * v.extent * v.inner + offset + chunk,
                out.data() + o * chunk);
    }
    parts.push_back(MakeResult(
        std::move(shape), std::move(out), {x}, "split",
        [x, v, offset, chunk](std::span<const float>, std::span<const float> dout) {
          std::span<float> dx = GradSink(x);
          for (int64_t o = 0; o < v.outer; ++o) {
            float* d = dx.data() + o * v.extent * v.inner + offset;
            const float* g = dout.data() + o * chunk;
            for (int64_t i = 0; i < chunk; ++i) d[i] += g[i];
          }
        }));
    offset += chunk;
  }
  return parts;
}

Tensor Add(const Tensor& a, const Tensor& b) {
  return Binary(a, b, BinaryKind::kAdd, "add");
}
Tensor Sub(const Tensor& a, const Tensor& b) {
  return Binary(a, b, BinaryKind::kSub, "sub");
}
Tensor Mul(const Tensor& a, const Tensor& b) {
  return Binary(a, b, BinaryKind::kMul, "mul");
}

Tensor Scale(const Tensor& x, const Tensor& alpha) {
  if (alpha.numel() != 1) {
    throw DimensionError("scale factor must hold one element, got " +
                         ShapeToString(alpha.shape()));
  }
  const float s = alpha.data()[0];
  FloatBuffer out(x.data().begin(), x.data().end());
  for (float& v : out) v *= s;
  return MakeResult(x.shape(), std::move(out), {x, alpha}, "scale",
                    [x, alpha](std::span<const float>, std::span<const float> dout) {
                      std::span<float> dx = GradSink(x);
                      std::span<float> da = GradSink(alpha);
                      const float s = alpha.data()[0];
                      const float* px = x.data().data();
                      double acc = 0.0;
                      for (size_t i = 0; i < dout.size(); ++i) {
                        if (!dx.empty()) dx[i] += dout[i] * s;
                        acc += static_cast<double>(dout[i]) * px[i];
                      }
                      if (!da.empty()) da[0] += static_cast<float>(acc);
                    });
}

Tensor MulConstant(const Tensor& x, float c) {
  FloatBuffer out(x.data().begin(), x.data().end());
  for (float& v : out) v *= c;
  return MakeResult(x.shape(), std::move(out), {x}, "mul_constant",
                    [x, c](std::span<const float>, std::span<const float> dout) {
                      std::span<float> dx = GradSink(x);
                      for (size_t i = 0; i < dout.size(); ++i) dx[i] += dout[i] * c;
                    });
}

Tensor Reshape(const Tensor& x, Shape shape) {
  if (NumElements(shape) != x.numel()) {
    throw DimensionError("cannot reshape " + ShapeToString(x.shape()) + " to " +
                         ShapeToString(shape));
  }
  FloatBuffer out(x.data().begin(), x.data().end());
  return MakeResult(std::move(shape), std::move(out), {x}, "reshape",
                    [x](std::span<const float>, std::span<const float> dout) {
                      std::span<float> dx = GradSink(x);
                      for (size_t i = 0; i < dout.size(); ++i) dx[i] += dout[i];
                    });
}

Tensor Sum(const Tensor& x) {
  double s = 0.0;
  for (float v : x.data()) s += v;
  return MakeResult({1}, {static_cast<float>(s)}, {x}, "sum",
                    [x](std::span<const float>, std::span<const float> dout) {
                      std::span<float> dx = GradSink(x);
                      for (float& d : dx) d += dout[0];
                    });
}

Tensor Mean(const Tensor& x) {
  if (x.numel() == 0) throw DimensionError("mean of an empty tensor");
  double s = 0.0;
  for (float v : x.data()) s += v;
  const double n = static_cast<double>(x.numel());
  return MakeResult({1}, {static_cast<float>(s / n)}, {x}, "mean",
                    [x, n](std::span<const float>, std::span<const float> dout) {
                      std::span<float> dx = GradSink(x);
                      const float g = static_cast<float>(dout[0] / n);
                      for (float& d : dx) d += g;
                    });
}

Tensor AddScalars(const std::vector<Tensor>& terms) {
  if (terms.empty()) throw DimensionError("sum of an empty list of scalars");
  double s = 0.0;
  for (const Tensor& t : terms) {
    if (t.numel() != 1) {
      throw DimensionError("AddScalars term has shape " + ShapeToString(t.shape()));
    }
    s += t.data()[0];
  }
  return MakeResult({1}, {static_cast<float>(s)}, terms, "add_scalars",
                    [terms](std::span<const float>, std::span<const float> dout) {
                      for (const Tensor& t : terms) {
                        std::span<float> d = GradSink(t);
                        if (!d.empty()) d[0] += dout[0];
                      }
                    });
}

Tensor ChannelMax(const Tensor& x) {
  RequireRank(x, 4, "channel_max");
  const int64_t n = x.dim(0), c = x.dim(1), hw = x.dim(2) * x.dim(3);
  FloatBuffer out(static_cast<size_t>(n * hw));
  std::vector<int32_t> arg(out.size());
  const float* px = x.data().data();
  for (int64_t b = 0; b < n; ++b) {
    for (int64_t i = 0; i < hw; ++i) {
      int32_t best = 0;
      float mx = px[b * c * hw + i];
      for (int64_t ch = 1; ch < c; ++ch) {
        const float v = px[(b * c + ch) * hw + i];
        if (v > mx || std::isnan(v)) {
          mx = v;
          best = static_cast<int32_t>(ch);
        }
      }
      out[b * hw + i] = mx;
      arg[b * hw + i] = best;
    }
  }
  return MakeResult({n, 1, x.dim(2), x.dim(3)}, std::move(out), {x}, "channel_max",
                    [x, arg = std::move(arg), n, c, hw](std::span<const float>,
                                                       std::span<const float> dout) {
                      std::span<float> dx = GradSink(x);
                      for (int64_t b = 0; b < n; ++b) {
                        for (int64_t i = 0; i < hw; ++i) {
                          dx[(b * c + arg[b * hw + i]) * hw + i] += dout[b * hw + i];
                        }
                      }
                    });
}

Tensor ChannelMean(const Tensor& x) {
  RequireRank(x, 4, "channel_mean");
  const int64_t n = x.dim(0), c = x.dim(1), hw = x.dim(2) * x.dim(3);
  FloatBuffer out(static_cast<size_t>(n * hw));
  const float* px = x.data().data();
  for (int64_t b = 0; b < n; ++b) {
    for (int64_t i = 0; i < hw; ++i) {
      double s = 0.0;
      for (int64_t ch = 0; ch < c; ++ch) s += px[(b * c + ch) * hw + i];
      out[b * hw + i] = static_cast<float>(s / static_cast<double>(c));
    }
  }
  return MakeResult({n, 1, x.dim(2), x.dim(3)}, std::move(out), {x}, "channel_mean",
                    [x, n, c, hw](std::span<const float>, std::span<const float> dout) {
                      std::span<float> dx = GradSink(x);
                      const float inv = 1.0f / static_cast<float>(c);
                      for (int64_t b = 0; b < n; ++b) {
                        for (int64_t ch = 0; ch < c; ++ch) {
                          for (int64_t i = 0; i < hw; ++i) {
                            dx[(b * c + ch) * hw + i] += dout[b * hw + i] * inv;
                          }
                        }
                      }
                    });
}

Tensor CrissCrossAggregate(const Tensor& q, const Tensor& k, const Tensor& v) {
  RequireRank(q, 4, "criss_cross");
  RequireRank(k, 4, "criss_cross");
  RequireRank(v, 4, "criss_cross");
  const int64_t n = v.dim(0), c = v.dim(1), h = v.dim(2), w = v.dim(3);
  const Shape gate_shape{n, 1, h, w};
  if (q.shape() != gate_shape || k.shape() != gate_shape) {
    throw DimensionError("criss_cross query/key must be " +
                         ShapeToString(gate_shape) + ", got " +
                         ShapeToString(q.shape()) + " and " +
                         ShapeToString(k.shape()));
  }
  const int64_t hw = h * w;
  const int64_t span = h + w - 1;
  // Footprint order per pixel: row positions (h, 0..w-1), then column
  // positions (0..h-1 except h, w).
  FloatBuffer att(static_cast<size_t>(n * hw * span));
  FloatBuffer out(static_cast<size_t>(n * c * hw), 0.0f);
  const float* pq = q.data().data();
  const float* pk = k.data().data();
  const float* pv = v.data().data();
  for (int64_t b = 0; b < n; ++b) {
    const float* kb = pk + b * hw;
    const float* vb = pv + b * c * hw;
    float* ob = out.data() + b * c * hw;
    for (int64_t y = 0; y < h; ++y) {
      for (int64_t x = 0; x < w; ++x) {
        const float qu = pq[b * hw + y * w + x];
        float* a = att.data() + (b * hw + y * w + x) * span;
        float mx = -std::numeric_limits<float>::infinity();
        int64_t j = 0;
        for (int64_t xx = 0; xx < w; ++xx) a[j++] = qu * kb[y * w + xx];
        for (int64_t yy = 0; yy < h; ++yy) {
          if (yy != y) a[j++] = qu * kb[yy * w + x];
        }
        for (int64_t i = 0; i < span; ++i) mx = std::max(mx, a[i]);
        double total = 0.0;
        for (int64_t i = 0; i < span; ++i) {
          a[i] = std::exp(a[i] - mx);
          total += a[i];
        }
        const float inv = static_cast<float>(1.0 / total);
        for (int64_t i = 0; i < span; ++i) a[i] *= inv;
        for (int64_t ch = 0; ch < c; ++ch) {
          const float* vp = vb + ch * hw;
          double acc = 0.0;
          j = 0;
          for (int64_t xx = 0; xx < w; ++xx) acc += a[j++] * vp[y * w + xx];
          for (int64_t yy = 0; yy < h; ++yy) {
            if (yy != y) acc += a[j++] * vp[yy * w + x];
          }
          ob[ch * hw + y * w + x] = static_cast<float>(acc);
        }
      }
    }
  }
  return MakeResult(
      v.shape(), std::move(out), {q, k, v}, "criss_cross",
      [q, k, v, att = std::move(att), n, c, h, w, hw, span](
          std::span<const float>, std::span<const float> dout) {
        std::span<float> dq = GradSink(q);
        std::span<float> dk = GradSink(k);
        std::span<float> dv = GradSink(v);
        const float* pq = q.data().data();
        const float* pk = k.data().data();
        const float* pv = v.data().data();
        std::vector<double> da(static_cast<size_t>(span));
        for (int64_t b = 0; b < n; ++b) {
          const float* vb = pv + b * c * hw;
          const float* gb = dout.data() + b * c * hw;
          for (int64_t y = 0; y < h; ++y) {
            for (int64_t x = 0; x < w; ++x) {
              const int64_t u = y * w + x;
              const float* a = att.data() + (b * hw + u) * span;
              // Footprint pixel index for slot j.
              auto pos = [&](int64_t j) -> int64_t {
                if (j < w) return y * w + j;
                const int64_t r = j - w;
                const int64_t yy = r < y ? r : r + 1;
                return yy * w + x;
              };
              std::fill(da.begin(), da.end(), 0.0);
              for (int64_t ch = 0; ch < c; ++ch) {
                const float g = gb[ch * hw + u];
                if (g == 0.0f) continue;
                const float* vp = vb + ch * hw;
                float* dvp = dv.empty() ? nullptr : dv.data() + (b * c + ch) * hw;
                for (int64_t j = 0; j < span; ++j) {
                  const int64_t p = pos(j);
                  da[j] += static_cast<double>(g) * vp[p];
                  if (dvp != nullptr) dvp[p] += a[j] * g;
                }
              }
              if (dq.empty() && dk.empty()) continue;
              double dot = 0.0;
              for (int64_t j = 0; j < span; ++j) dot += a[j] * da[j];
              const float qu = pq[b * hw + u];
              double dqu = 0.0;
              for (int64_t j = 0; j < span; ++j) {
                const double de = a[j] * (da[j] - dot);
                const int64_t p = pos(j);
                dqu += de * pk[b * hw + p];
                if (!dk.empty()) dk[b * hw + p] += static_cast<float>(de * qu);
              }
              if (!dq.empty()) dq[b * hw + u] += static_cast<float>(dqu);
            }
          }
        }
      });
}

}  // namespace agsenet
