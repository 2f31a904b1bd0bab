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

#ifndef AGSENET_IMAGE_IO_H_
#define AGSENET_IMAGE_IO_H_

#include <cstdint>
#include <filesystem>
#include <vector>

namespace agsenet {

// Interleaved 8- or 16-bit raster as stored in a PNG.
struct Raster {
  int width = 0;
  int height = 0;
  int channels = 0;   // 1 (gray) or 3 (RGB)
  int bit_depth = 8;  // 8 or 16
  std::vector<uint16_t> samples;  // height * width * channels, row-major

  uint16_t at(int y, int x, int c) const {
    return samples[(static_cast<size_t>(y) * width + x) * channels + c];
  }
};

// Decodes any PNG into gray or RGB at 8 or 16 bits. Palette images expand
// to RGB, gray+alpha drops alpha, RGBA drops alpha. `want_channels` (1 or 3)
// converts between gray and RGB when the file differs.
Raster ReadPng(const std::filesystem::path& path, int want_channels);

// Writes gray or RGB at the raster's bit depth with fixed compression
// settings, so identical rasters give identical bytes.
void WritePng(const std::filesystem::path& path, const Raster& raster);

}  // namespace agsenet

#endif  // AGSENET_IMAGE_IO_H_
