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

#include "agsenet/image_io.h"

#include <png.h>

#include <cstdio>
#include <memory>
#include <string>

#include "agsenet/errors.h"

namespace agsenet {
namespace {

struct FileCloser {
  void operator()(FILE* f) const {
    if (f != nullptr) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<FILE, FileCloser>;

[[noreturn]] void PngError(png_structp png, png_const_charp msg) {
  auto* where = static_cast<std::string*>(png_get_error_ptr(png));
  if (where != nullptr) *where = msg;
  png_longjmp(png, 1);
}

void PngWarning(png_structp, png_const_charp) {}

}  // namespace

Raster ReadPng(const std::filesystem::path& path, int want_channels) {
  if (want_channels != 1 && want_channels != 3) {
    throw ConfigError("ReadPng: want_channels must be 1 or 3");
  }
  FilePtr file(std::fopen(path.string().c_str(), "rb"));
  if (!file) throw IoError("cannot open " + path.string());
  unsigned char sig[8];
  if (std::fread(sig, 1, 8, file.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
    throw IoError(path.string() + " is not a PNG file");
  }

  std::string message;
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, &message, PngError, PngWarning);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (png == nullptr || info == nullptr) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("libpng initialization failed");
  }

  Raster raster;
  std::vector<png_bytep> rows;
  std::vector<uint8_t> buffer;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("corrupt PNG " + path.string() + ": " + message);
  }
  png_init_io(png, file.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);

  const png_byte color = png_get_color_type(png, info);
  const png_byte depth = png_get_bit_depth(png, info);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (color & PNG_COLOR_MASK_ALPHA || png_get_valid(png, info, PNG_INFO_tRNS)) {
    png_set_strip_alpha(png);
  }
  if (depth == 16) png_set_swap(png);  // host-order little endian samples
  png_read_update_info(png, info);

  raster.width = static_cast<int>(png_get_image_width(png, info));
  raster.height = static_cast<int>(png_get_image_height(png, info));
  raster.channels = png_get_channels(png, info);
  raster.bit_depth = png_get_bit_depth(png, info);
  const size_t row_bytes = png_get_rowbytes(png, info);
  buffer.resize(row_bytes * static_cast<size_t>(raster.height));
  rows.resize(static_cast<size_t>(raster.height));
  for (int y = 0; y < raster.height; ++y) rows[y] = buffer.data() + row_bytes * y;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  const size_t count = static_cast<size_t>(raster.width) * raster.height * raster.channels;
  raster.samples.resize(count);
  if (raster.bit_depth == 16) {
    for (size_t i = 0; i < count; ++i) {
      raster.samples[i] = static_cast<uint16_t>(buffer[2 * i] | (buffer[2 * i + 1] << 8));
    }
  } else {
    for (size_t i = 0; i < count; ++i) raster.samples[i] = buffer[i];
  }

  if (raster.channels == want_channels) return raster;
  Raster converted = raster;
  converted.channels = want_channels;
  const size_t pixels = static_cast<size_t>(raster.width) * raster.height;
  converted.samples.assign(pixels * want_channels, 0);
  for (size_t p = 0; p < pixels; ++p) {
    if (want_channels == 3) {
      for (int c = 0; c < 3; ++c) converted.samples[p * 3 + c] = raster.samples[p];
    } else {
      // ITU-R 601 luma, rounded.
      const double y = 0.299 * raster.samples[p * 3] + 0.587 * raster.samples[p * 3 + 1] +
                       0.114 * raster.samples[p * 3 + 2];
      converted.samples[p] = static_cast<uint16_t>(y + 0.5);
    }
  }
  return converted;
}

void WritePng(const std::filesystem::path& path, const Raster& raster) {
  if (raster.channels != 1 && raster.channels != 3) {
    throw ConfigError("WritePng supports gray or RGB rasters");
  }
  if (raster.bit_depth != 8 && raster.bit_depth != 16) {
    throw ConfigError("WritePng supports 8- or 16-bit rasters");
  }
  const size_t count = static_cast<size_t>(raster.width) * raster.height * raster.channels;
  if (raster.samples.size() != count || raster.width < 1 || raster.height < 1) {
    throw DimensionError("raster sample count does not match its size");
  }
  FilePtr file(std::fopen(path.string().c_str(), "wb"));
  if (!file) throw IoError("cannot write " + path.string());

  std::string message;
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, &message, PngError, PngWarning);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (png == nullptr || info == nullptr) {
    png_destroy_write_struct(&png, &info);
    throw IoError("libpng initialization failed");
  }
  const int bytes_per_sample = raster.bit_depth / 8;
  const size_t row_bytes = static_cast<size_t>(raster.width) * raster.channels * bytes_per_sample;
  std::vector<uint8_t> buffer(row_bytes * raster.height);
  for (size_t i = 0; i < count; ++i) {
    if (bytes_per_sample == 1) {
      buffer[i] = static_cast<uint8_t>(raster.samples[i]);
    } else {
      buffer[2 * i] = static_cast<uint8_t>(raster.samples[i] >> 8);  // PNG is big endian
      buffer[2 * i + 1] = static_cast<uint8_t>(raster.samples[i] & 0xFF);
    }
  }
  std::vector<png_bytep> rows(static_cast<size_t>(raster.height));
  for (int y = 0; y < raster.height; ++y) rows[y] = buffer.data() + row_bytes * y;

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("failed to encode " + path.string() + ": " + message);
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(raster.width),
               static_cast<png_uint_32>(raster.height), raster.bit_depth,
               raster.channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_set_compression_level(png, 6);
  png_write_info(png, info);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace agsenet
