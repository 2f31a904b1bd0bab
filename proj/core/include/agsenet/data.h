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

#ifndef AGSENET_DATA_H_
#define AGSENET_DATA_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "agsenet/image_io.h"
#include "agsenet/tensor.h"

namespace agsenet {

// One image/mask pair. image: [1,3,H,W] in [0,1]; mask: [1,1,H,W] in {0,1};
// depth (optional): [1,1,H,W] metres, strictly positive.
struct Sample {
  Tensor image;
  Tensor mask;
  std::optional<Tensor> depth;
  std::string id;

  int64_t height() const { return image.dim(2); }
  int64_t width() const { return image.dim(3); }
};

// Checks the field invariants; throws DimensionError / ConfigError.
void ValidateSample(const Sample& sample);

// Manifest: UTF-8 lines `image<TAB>mask[<TAB>depth]`. Relative paths are
// resolved against the manifest's directory. Blank lines and lines starting
// with '#' are skipped.
struct ManifestRow {
  std::filesystem::path image;
  std::filesystem::path mask;
  std::optional<std::filesystem::path> depth;
};
std::vector<ManifestRow> ReadManifest(const std::filesystem::path& path);
void WriteManifest(const std::filesystem::path& path,
                   const std::vector<ManifestRow>& rows);

// Mask pixels of an 8-bit mask must be within this distance of 0 or 255.
inline constexpr int kMaskTolerance = 32;

// Loads an 8-bit RGB image and an 8-bit gray mask of the same size. Mask
// values are binarized at 0.5 (128 of 255); values farther than
// kMaskTolerance from both 0 and 255 are rejected.
Sample LoadPair(const std::filesystem::path& image_path,
                const std::filesystem::path& mask_path);

// Depth: 16-bit gray PNG in millimetres, or a raw blob with an int32 LE
// (height, width) header followed by height*width float32 LE metres.
Tensor LoadDepth(const std::filesystem::path& path);
void SaveDepthPng(const std::filesystem::path& path, const Tensor& depth);
void SaveDepthRaw(const std::filesystem::path& path, const Tensor& depth);

Sample LoadManifestRow(const ManifestRow& row);

// Conversions between [1,C,H,W] tensors and 8-bit rasters. Values are
// clamped to [0,1] and rounded to the nearest 1/255.
Tensor RasterToTensor(const Raster& raster);
Raster TensorToRaster8(const Tensor& t);

void SaveImagePng(const std::filesystem::path& path, const Tensor& image);
void SaveMaskPng(const std::filesystem::path& path, const Tensor& mask);

// Nearest-neighbour and bilinear (half-pixel) resizes of [1,C,H,W] data.
// Not differentiable; used by the data pipeline only.
Tensor ResizeNearest(const Tensor& t, int64_t out_h, int64_t out_w);
Tensor ResizeBilinear(const Tensor& t, int64_t out_h, int64_t out_w);

Tensor FlipHorizontal(const Tensor& t);

struct AugmentConfig {
  int64_t out_height = 320;
  int64_t out_width = 320;
  double flip_probability = 0.5;
  double brightness_min = 0.8, brightness_max = 1.2;
  double saturation_min = 0.8, saturation_max = 1.2;
};

// Factors drawn for one augmentation call.
struct AugmentRecord {
  bool flipped = false;
  double brightness = 1.0;
  double saturation = 1.0;
};

// Horizontal flip, brightness scaling, HSV saturation scaling, then resize.
// The mask (and depth) follow the geometric steps with nearest-neighbour
// sampling. Fully determined by `seed`.
Sample Augment(const Sample& sample, uint64_t seed, const AugmentConfig& config,
               AugmentRecord* record = nullptr);

// Applies explicit factors; Augment draws them and calls this.
Sample ApplyAugment(const Sample& sample, const AugmentRecord& factors,
                    const AugmentConfig& config);

// Scales RGB values by `factor` in HSV saturation, clamped to [0,1].
void AdjustSaturation(Tensor& image, double factor);

// Resizes image (bilinear) and mask/depth (nearest) to the given size.
Sample ResizeSample(const Sample& sample, int64_t out_h, int64_t out_w);

// Stable 64-bit FNV-1a hash of a string.
uint64_t StableHash(const std::string& s);

// Deterministic 80/20 split: a sample goes to validation when
// StableHash(id) % 5 == 0. If that leaves either side empty (tiny sets), the
// last sample by id order moves so both sides are non-empty when possible.
struct DatasetSplit {
  std::vector<Sample> train;
  std::vector<Sample> val;
};
DatasetSplit SplitByHash(std::vector<Sample> samples);

// Stacks samples along N. All samples must share one spatial size.
struct Batch {
  Tensor images;  // [N,3,H,W]
  Tensor masks;   // [N,1,H,W]
};
Batch MakeBatch(const std::vector<const Sample*>& samples);

}  // namespace agsenet

#endif  // AGSENET_DATA_H_
