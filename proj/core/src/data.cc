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

#include "agsenet/data.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "agsenet/errors.h"
#include "agsenet/rng.h"

namespace agsenet {
namespace fs = std::filesystem;
namespace {

float Clamp01(float v) { return std::min(1.0f, std::max(0.0f, v)); }

void RequireSingleImage(const Tensor& t, const char* what) {
  if (t.rank() != 4 || t.dim(0) != 1) {
    throw DimensionError(std::string(what) + " expects [1,C,H,W], got " +
                         ShapeToString(t.shape()));
  }
}

uint32_t ReadU32Le(const char* p) {
  uint32_t v = 0;
  for (int b = 0; b < 4; ++b) v |= static_cast<uint32_t>(static_cast<unsigned char>(p[b])) << (8 * b);
  return v;
}

void AppendU32Le(std::string& out, uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xFF));
}

}  // namespace

void ValidateSample(const Sample& s) {
  RequireSingleImage(s.image, "sample image");
  RequireSingleImage(s.mask, "sample mask");
  if (s.image.dim(1) != 3 || s.mask.dim(1) != 1) {
    throw DimensionError("sample image must have 3 channels and mask 1");
  }
  if (s.image.dim(2) != s.mask.dim(2) || s.image.dim(3) != s.mask.dim(3)) {
    throw DimensionError("sample '" + s.id + "': image " + ShapeToString(s.image.shape()) +
                         " and mask " + ShapeToString(s.mask.shape()) + " are not aligned");
  }
  for (float v : s.mask.data()) {
    if (v != 0.0f && v != 1.0f) throw ConfigError("sample '" + s.id + "': mask is not binary");
  }
  if (s.depth) {
    if (s.depth->shape() != s.mask.shape()) {
      throw DimensionError("sample '" + s.id + "': depth " + ShapeToString(s.depth->shape()) +
                           " does not match mask " + ShapeToString(s.mask.shape()));
    }
    for (float v : s.depth->data()) {
      if (!(v > 0.0f) || !std::isfinite(v)) {
        throw ConfigError("sample '" + s.id + "': depth values must be positive and finite");
      }
    }
  }
}

std::vector<ManifestRow> ReadManifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest " + path.string());
  const fs::path base = path.parent_path();
  auto resolve = [&base](const std::string& p) {
    fs::path q(p);
    return q.is_absolute() ? q : base / q;
  };
  std::vector<ManifestRow> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string col;
    while (std::getline(ss, col, '\t')) cols.push_back(col);
    if (cols.size() < 2 || cols.size() > 3 || cols[0].empty() || cols[1].empty()) {
      throw IoError(path.string() + ":" + std::to_string(line_no) +
                    ": expected image<TAB>mask[<TAB>depth]");
    }
    ManifestRow row{resolve(cols[0]), resolve(cols[1]), std::nullopt};
    if (cols.size() == 3 && !cols[2].empty()) row.depth = resolve(cols[2]);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw IoError("manifest " + path.string() + " lists no samples");
  return rows;
}

void WriteManifest(const fs::path& path, const std::vector<ManifestRow>& rows) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write manifest " + path.string());
  for (const ManifestRow& r : rows) {
    out << r.image.generic_string() << '\t' << r.mask.generic_string();
    if (r.depth) out << '\t' << r.depth->generic_string();
    out << '\n';
  }
}

Tensor RasterToTensor(const Raster& raster) {
  const double scale = raster.bit_depth == 16 ? 65535.0 : 255.0;
  Tensor t({1, raster.channels, raster.height, raster.width});
  std::span<float> d = t.data();
  const size_t plane = static_cast<size_t>(raster.height) * raster.width;
  for (int c = 0; c < raster.channels; ++c) {
    for (size_t p = 0; p < plane; ++p) {
      d[c * plane + p] = static_cast<float>(raster.samples[p * raster.channels + c] / scale);
    }
  }
  return t;
}

Raster TensorToRaster8(const Tensor& t) {
  RequireSingleImage(t, "TensorToRaster8");
  Raster r;
  r.channels = static_cast<int>(t.dim(1));
  r.height = static_cast<int>(t.dim(2));
  r.width = static_cast<int>(t.dim(3));
  r.bit_depth = 8;
  const size_t plane = static_cast<size_t>(r.height) * r.width;
  r.samples.resize(plane * r.channels);
  std::span<const float> d = t.data();
  for (int c = 0; c < r.channels; ++c) {
    for (size_t p = 0; p < plane; ++p) {
      r.samples[p * r.channels + c] =
          static_cast<uint16_t>(std::lround(Clamp01(d[c * plane + p]) * 255.0f));
    }
  }
  return r;
}

void SaveImagePng(const fs::path& path, const Tensor& image) {
  WritePng(path, TensorToRaster8(image));
}

void SaveMaskPng(const fs::path& path, const Tensor& mask) {
  WritePng(path, TensorToRaster8(mask));
}

Sample LoadPair(const fs::path& image_path, const fs::path& mask_path) {
  if (!fs::exists(image_path)) throw IoError("image not found: " + image_path.string());
  if (!fs::exists(mask_path)) throw IoError("mask not found: " + mask_path.string());
  const Raster img = ReadPng(image_path, 3);
  const Raster msk = ReadPng(mask_path, 1);
  if (img.bit_depth != 8 || msk.bit_depth != 8) {
    throw IoError("expected 8-bit image and mask: " + image_path.string());
  }
  if (img.width != msk.width || img.height != msk.height) {
    throw DimensionError("size mismatch: image " + image_path.string() + " is " +
                         std::to_string(img.width) + "x" + std::to_string(img.height) +
                         ", mask is " + std::to_string(msk.width) + "x" +
                         std::to_string(msk.height));
  }
  Sample s;
  s.id = image_path.stem().string();
  s.image = RasterToTensor(img);
  s.mask = Tensor({1, 1, msk.height, msk.width});
  std::span<float> m = s.mask.data();
  for (size_t i = 0; i < msk.samples.size(); ++i) {
    const int v = msk.samples[i];
    if (v > kMaskTolerance && v < 255 - kMaskTolerance) {
      throw IoError("mask " + mask_path.string() + " is not binary (value " +
                    std::to_string(v) + ")");
    }
    m[i] = v >= 128 ? 1.0f : 0.0f;
  }
  return s;
}

Tensor LoadDepth(const fs::path& path) {
  if (!fs::exists(path)) throw IoError("depth not found: " + path.string());
  if (path.extension() == ".png") {
    const Raster r = ReadPng(path, 1);
    if (r.bit_depth != 16) throw IoError("depth PNG must be 16-bit: " + path.string());
    Tensor t({1, 1, r.height, r.width});
    std::span<float> d = t.data();
    for (size_t i = 0; i < r.samples.size(); ++i) {
      // Zero millimetres would mean no depth; keep it strictly positive.
      d[i] = std::max<uint16_t>(r.samples[i], 1) / 1000.0f;
    }
    return t;
  }
  std::ifstream in(path, std::ios::binary);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() < 8) throw IoError("depth blob too short: " + path.string());
  const int64_t h = static_cast<int32_t>(ReadU32Le(bytes.data()));
  const int64_t w = static_cast<int32_t>(ReadU32Le(bytes.data() + 4));
  if (h < 1 || w < 1 || bytes.size() != 8 + static_cast<size_t>(h * w) * 4) {
    throw IoError("depth blob " + path.string() + " has an inconsistent header");
  }
  Tensor t({1, 1, h, w});
  std::span<float> d = t.data();
  for (int64_t i = 0; i < h * w; ++i) {
    d[i] = std::bit_cast<float>(ReadU32Le(bytes.data() + 8 + 4 * i));
  }
  return t;
}

void SaveDepthPng(const fs::path& path, const Tensor& depth) {
  RequireSingleImage(depth, "SaveDepthPng");
  Raster r;
  r.channels = 1;
  r.bit_depth = 16;
  r.height = static_cast<int>(depth.dim(2));
  r.width = static_cast<int>(depth.dim(3));
  r.samples.resize(static_cast<size_t>(depth.numel()));
  std::span<const float> d = depth.data();
  for (size_t i = 0; i < r.samples.size(); ++i) {
    const double mm = std::round(static_cast<double>(d[i]) * 1000.0);
    r.samples[i] = static_cast<uint16_t>(std::clamp(mm, 1.0, 65535.0));
  }
  WritePng(path, r);
}

void SaveDepthRaw(const fs::path& path, const Tensor& depth) {
  RequireSingleImage(depth, "SaveDepthRaw");
  std::string bytes;
  AppendU32Le(bytes, static_cast<uint32_t>(depth.dim(2)));
  AppendU32Le(bytes, static_cast<uint32_t>(depth.dim(3)));
  for (float v : depth.data()) AppendU32Le(bytes, std::bit_cast<uint32_t>(v));
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

Sample LoadManifestRow(const ManifestRow& row) {
  Sample s = LoadPair(row.image, row.mask);
  if (row.depth) {
    Tensor d = LoadDepth(*row.depth);
    if (d.dim(2) != s.height() || d.dim(3) != s.width()) {
      throw DimensionError("depth " + row.depth->string() + " does not match image size");
    }
    s.depth = d;
  }
  ValidateSample(s);
  return s;
}

Tensor ResizeNearest(const Tensor& t, int64_t out_h, int64_t out_w) {
  RequireSingleImage(t, "ResizeNearest");
  const int64_t c = t.dim(1), h = t.dim(2), w = t.dim(3);
  if (out_h == h && out_w == w) return t.Clone();
  Tensor out({1, c, out_h, out_w});
  std::span<const float> src = t.data();
  std::span<float> dst = out.data();
  for (int64_t ch = 0; ch < c; ++ch) {
    for (int64_t y = 0; y < out_h; ++y) {
      const int64_t sy = std::min(h - 1, static_cast<int64_t>((y + 0.5) * h / out_h));
      for (int64_t x = 0; x < out_w; ++x) {
        const int64_t sx = std::min(w - 1, static_cast<int64_t>((x + 0.5) * w / out_w));
        dst[(ch * out_h + y) * out_w + x] = src[(ch * h + sy) * w + sx];
      }
    }
  }
  return out;
}

Tensor ResizeBilinear(const Tensor& t, int64_t out_h, int64_t out_w) {
  RequireSingleImage(t, "ResizeBilinear");
  const int64_t c = t.dim(1), h = t.dim(2), w = t.dim(3);
  if (out_h == h && out_w == w) return t.Clone();
  Tensor out({1, c, out_h, out_w});
  std::span<const float> src = t.data();
  std::span<float> dst = out.data();
  auto coord = [](int64_t i, int64_t in, int64_t out, int64_t& lo, int64_t& hi, float& f) {
    double s = (i + 0.5) * static_cast<double>(in) / out - 0.5;
    if (s < 0) s = 0;
    lo = std::min(in - 1, static_cast<int64_t>(s));
    hi = std::min(lo + 1, in - 1);
    f = static_cast<float>(s - lo);
  };
  for (int64_t y = 0; y < out_h; ++y) {
    int64_t y0, y1;
    float fy;
    coord(y, h, out_h, y0, y1, fy);
    for (int64_t x = 0; x < out_w; ++x) {
      int64_t x0, x1;
      float fx;
      coord(x, w, out_w, x0, x1, fx);
      for (int64_t ch = 0; ch < c; ++ch) {
        const float* p = src.data() + ch * h * w;
        const float top = p[y0 * w + x0] * (1 - fx) + p[y0 * w + x1] * fx;
        const float bot = p[y1 * w + x0] * (1 - fx) + p[y1 * w + x1] * fx;
        dst[(ch * out_h + y) * out_w + x] = top * (1 - fy) + bot * fy;
      }
    }
  }
  return out;
}

Tensor FlipHorizontal(const Tensor& t) {
  if (t.rank() != 4) throw DimensionError("FlipHorizontal expects [N,C,H,W]");
  Tensor out(t.shape());
  const int64_t rows = t.dim(0) * t.dim(1) * t.dim(2), w = t.dim(3);
  std::span<const float> src = t.data();
  std::span<float> dst = out.data();
  for (int64_t r = 0; r < rows; ++r) {
    for (int64_t x = 0; x < w; ++x) dst[r * w + x] = src[r * w + (w - 1 - x)];
  }
  return out;
}

void AdjustSaturation(Tensor& image, double factor) {
  RequireSingleImage(image, "AdjustSaturation");
  if (image.dim(1) != 3) throw DimensionError("AdjustSaturation needs an RGB image");
  const int64_t plane = image.dim(2) * image.dim(3);
  std::span<float> d = image.data();
  for (int64_t p = 0; p < plane; ++p) {
    const float r = d[p], g = d[plane + p], b = d[2 * plane + p];
    const float v = std::max({r, g, b});
    const float mn = std::min({r, g, b});
    if (v <= 0.0f || v == mn) continue;  // black or gray: hue undefined
    const double s = (v - mn) / v;
    const double s_new = std::min(1.0, s * factor);
    // In HSV, scaling S at fixed V and hue maps every channel c to
    // v - (v - c) * s_new / s.
    const double k = s_new / s;
    d[p] = Clamp01(static_cast<float>(v - (v - r) * k));
    d[plane + p] = Clamp01(static_cast<float>(v - (v - g) * k));
    d[2 * plane + p] = Clamp01(static_cast<float>(v - (v - b) * k));
  }
}

Sample ResizeSample(const Sample& sample, int64_t out_h, int64_t out_w) {
  Sample s;
  s.id = sample.id;
  s.image = ResizeBilinear(sample.image, out_h, out_w);
  s.mask = ResizeNearest(sample.mask, out_h, out_w);
  if (sample.depth) s.depth = ResizeNearest(*sample.depth, out_h, out_w);
  return s;
}

Sample ApplyAugment(const Sample& sample, const AugmentRecord& f,
                    const AugmentConfig& config) {
  Sample s;
  s.id = sample.id;
  s.image = f.flipped ? FlipHorizontal(sample.image) : sample.image.Clone();
  s.mask = f.flipped ? FlipHorizontal(sample.mask) : sample.mask.Clone();
  if (sample.depth) s.depth = f.flipped ? FlipHorizontal(*sample.depth) : sample.depth->Clone();
  if (f.brightness != 1.0) {
    for (float& v : s.image.data()) v = Clamp01(static_cast<float>(v * f.brightness));
  }
  if (f.saturation != 1.0) AdjustSaturation(s.image, f.saturation);
  if (s.height() != config.out_height || s.width() != config.out_width) {
    s = ResizeSample(s, config.out_height, config.out_width);
  }
  return s;
}

Sample Augment(const Sample& sample, uint64_t seed, const AugmentConfig& config,
               AugmentRecord* record) {
  ValidateSample(sample);
  Rng rng(seed);
  AugmentRecord f;
  f.flipped = rng.Bernoulli(config.flip_probability);
  f.brightness = rng.Uniform(config.brightness_min, config.brightness_max);
  f.saturation = rng.Uniform(config.saturation_min, config.saturation_max);
  if (record != nullptr) *record = f;
  return ApplyAugment(sample, f, config);
}

uint64_t StableHash(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

DatasetSplit SplitByHash(std::vector<Sample> samples) {
  std::sort(samples.begin(), samples.end(),
            [](const Sample& a, const Sample& b) { return a.id < b.id; });
  DatasetSplit split;
  for (Sample& s : samples) {
    (StableHash(s.id) % 5 == 0 ? split.val : split.train).push_back(std::move(s));
  }
  if (split.val.empty() && split.train.size() > 1) {
    split.val.push_back(std::move(split.train.back()));
    split.train.pop_back();
  } else if (split.train.empty() && split.val.size() > 1) {
    split.train.push_back(std::move(split.val.back()));
    split.val.pop_back();
  }
  return split;
}

Batch MakeBatch(const std::vector<const Sample*>& samples) {
  if (samples.empty()) throw DimensionError("empty batch");
  const int64_t h = samples[0]->height(), w = samples[0]->width();
  const int64_t n = static_cast<int64_t>(samples.size());
  Batch b{Tensor({n, 3, h, w}), Tensor({n, 1, h, w})};
  for (int64_t i = 0; i < n; ++i) {
    const Sample& s = *samples[static_cast<size_t>(i)];
    if (s.height() != h || s.width() != w) {
      throw DimensionError("batch samples differ in size: '" + s.id + "' is " +
                           std::to_string(s.height()) + "x" + std::to_string(s.width()));
    }
    std::copy(s.image.data().begin(), s.image.data().end(),
              b.images.data().begin() + i * 3 * h * w);
    std::copy(s.mask.data().begin(), s.mask.data().end(),
              b.masks.data().begin() + i * h * w);
  }
  return b;
}

}  // namespace agsenet
