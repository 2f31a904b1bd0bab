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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "agsenet/data.h"
#include "agsenet/errors.h"
#include "agsenet/image_io.h"
#include "agsenet/synth.h"
#include "support/testing.h"

namespace agsenet {
namespace {

namespace fs = std::filesystem;

fs::path FreshDir(const std::string& name) {
  fs::path dir = fs::path(::testing::TempDir()) / ("agsenet_data_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Raster MakeRaster(int w, int h, int channels, uint16_t fill) {
  Raster r;
  r.width = w;
  r.height = h;
  r.channels = channels;
  r.samples.assign(static_cast<size_t>(w) * h * channels, fill);
  return r;
}

TEST(LoadPairTest, FullResolutionPair) {
  const fs::path dir = FreshDir("pair");
  Raster image = MakeRaster(640, 360, 3, 40);
  image.samples[0] = 255;
  Raster mask = MakeRaster(640, 360, 1, 0);
  mask.samples[641] = 250;
  WritePng(dir / "frame_01.png", image);
  WritePng(dir / "frame_01_mask.png", mask);
  Sample s = LoadPair(dir / "frame_01.png", dir / "frame_01_mask.png");
  EXPECT_EQ(s.image.shape(), (Shape{1, 3, 360, 640}));
  EXPECT_EQ(s.mask.shape(), (Shape{1, 1, 360, 640}));
  EXPECT_EQ(s.id, "frame_01");
  EXPECT_FLOAT_EQ(s.image.at({0, 0, 0, 0}), 1.0f);
  EXPECT_FLOAT_EQ(s.image.at({0, 1, 0, 0}), 40.0f / 255.0f);
  EXPECT_EQ(s.mask.at({0, 0, 1, 1}), 1.0f);
  EXPECT_EQ(s.mask.at({0, 0, 1, 2}), 0.0f);
}

TEST(LoadPairTest, AllWhiteMaskIsAllOnes) {
  const fs::path dir = FreshDir("white");
  WritePng(dir / "i.png", MakeRaster(8, 6, 3, 100));
  WritePng(dir / "m.png", MakeRaster(8, 6, 1, 255));
  Sample s = LoadPair(dir / "i.png", dir / "m.png");
  for (float v : s.mask.data()) EXPECT_EQ(v, 1.0f);
}

TEST(LoadPairTest, Errors) {
  const fs::path dir = FreshDir("errors");
  WritePng(dir / "i.png", MakeRaster(8, 6, 3, 100));
  WritePng(dir / "small.png", MakeRaster(7, 6, 1, 0));
  WritePng(dir / "gray.png", MakeRaster(8, 6, 1, 128));
  EXPECT_THROW(LoadPair(dir / "i.png", dir / "small.png"), DimensionError);
  EXPECT_THROW(LoadPair(dir / "i.png", dir / "gray.png"), IoError);
  EXPECT_THROW(LoadPair(dir / "missing.png", dir / "gray.png"), IoError);
}

TEST(ManifestTest, RoundTripWithRelativePaths) {
  const fs::path dir = FreshDir("manifest");
  std::vector<ManifestRow> rows = {{dir / "a.png", dir / "a_m.png", std::nullopt},
                                   {dir / "b.png", dir / "b_m.png", dir / "b.f32"}};
  WriteManifest(dir / "list.tsv", rows);
  std::vector<ManifestRow> back = ReadManifest(dir / "list.tsv");
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].image, rows[0].image);
  EXPECT_FALSE(back[0].depth.has_value());
  EXPECT_EQ(*back[1].depth, *rows[1].depth);

  std::ofstream(dir / "rel.tsv") << "# comment\n\nimg/x.png\tmasks/x.png\n";
  back = ReadManifest(dir / "rel.tsv");
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].image, dir / "img/x.png");

  std::ofstream(dir / "bad.tsv") << "only_one_column.png\n";
  EXPECT_THROW(ReadManifest(dir / "bad.tsv"), IoError);
  std::ofstream(dir / "empty.tsv") << "# nothing\n";
  EXPECT_THROW(ReadManifest(dir / "empty.tsv"), IoError);
}

TEST(DepthTest, PngAndRawRoundTrip) {
  const fs::path dir = FreshDir("depth");
  Tensor depth({1, 1, 3, 4});
  for (int64_t i = 0; i < depth.numel(); ++i) depth.data()[i] = 0.5f + 3.25f * i;
  SaveDepthRaw(dir / "d.f32", depth);
  EXPECT_EQ(testing::MaxAbsDiff(LoadDepth(dir / "d.f32"), depth), 0.0);
  SaveDepthPng(dir / "d.png", depth);
  EXPECT_LE(testing::MaxAbsDiff(LoadDepth(dir / "d.png"), depth), 5e-4);
}

TEST(TransformTest, FlipIsAnInvolution) {
  Rng rng(1);
  Tensor t = testing::RandomTensor({1, 3, 5, 7}, rng, 0.0f, 1.0f);
  Tensor f = FlipHorizontal(t);
  EXPECT_EQ(f.at({0, 1, 2, 0}), t.at({0, 1, 2, 6}));
  EXPECT_EQ(testing::MaxAbsDiff(FlipHorizontal(f), t), 0.0);
}

TEST(TransformTest, SameSizeResizeIsIdentity) {
  Rng rng(2);
  Tensor t = testing::RandomTensor({1, 3, 6, 9}, rng, 0.0f, 1.0f);
  EXPECT_LT(testing::MaxAbsDiff(ResizeBilinear(t, 6, 9), t), 1e-6);
  EXPECT_EQ(testing::MaxAbsDiff(ResizeNearest(t, 6, 9), t), 0.0);
}

TEST(TransformTest, NearestKeepsMaskBinary) {
  Sample s = SynthScene({.height = 64, .width = 64, .n_puddles = 3, .seed = 4});
  Tensor m = ResizeNearest(s.mask, 40, 52);
  for (float v : m.data()) EXPECT_TRUE(v == 0.0f || v == 1.0f);
}

TEST(TransformTest, SaturationIdentityAndGray) {
  Rng rng(3);
  Tensor img = testing::RandomTensor({1, 3, 4, 4}, rng, 0.0f, 1.0f);
  Tensor same = img.Clone();
  AdjustSaturation(same, 1.0);
  EXPECT_LT(testing::MaxAbsDiff(same, img), 1e-6);
  Tensor gray = img.Clone();
  AdjustSaturation(gray, 0.0);
  for (int64_t y = 0; y < 4; ++y) {
    for (int64_t x = 0; x < 4; ++x) {
      const float v = std::max({img.at({0, 0, y, x}), img.at({0, 1, y, x}), img.at({0, 2, y, x})});
      for (int64_t c = 0; c < 3; ++c) EXPECT_NEAR(gray.at({0, c, y, x}), v, 1e-6);
    }
  }
}

TEST(AugmentTest, DeterministicUnderSeed) {
  Sample s = SynthScene({.seed = 5});
  AugmentConfig config;
  config.out_height = 64;
  config.out_width = 96;
  AugmentRecord ra, rb;
  Sample a = Augment(s, 77, config, &ra), b = Augment(s, 77, config, &rb);
  EXPECT_EQ(testing::MaxAbsDiff(a.image, b.image), 0.0);
  EXPECT_EQ(testing::MaxAbsDiff(a.mask, b.mask), 0.0);
  EXPECT_EQ(ra.flipped, rb.flipped);
  EXPECT_EQ(a.image.shape(), (Shape{1, 3, 64, 96}));
  EXPECT_GE(ra.brightness, 0.8);
  EXPECT_LE(ra.brightness, 1.2);
  EXPECT_GE(ra.saturation, 0.8);
  EXPECT_LE(ra.saturation, 1.2);
}

TEST(AugmentTest, FlipRateAndRangeOverSeeds) {
  Sample s = SynthScene({.seed = 6});
  AugmentConfig config;
  config.out_height = 64;
  config.out_width = 64;
  int flips = 0;
  for (uint64_t seed = 0; seed < 200; ++seed) {
    AugmentRecord r;
    Sample out = Augment(s, seed, config, &r);
    flips += r.flipped ? 1 : 0;
    if (seed < 20) {
      for (float v : out.image.data()) {
        ASSERT_GE(v, 0.0f);
        ASSERT_LE(v, 1.0f);
      }
    }
  }
  EXPECT_GT(flips, 70);
  EXPECT_LT(flips, 130);
}

TEST(AugmentTest, NeutralFactorsAreGeometricOnly) {
  Sample s = SynthScene({.seed = 7});
  AugmentConfig config;
  config.out_height = 96;
  config.out_width = 96;
  Sample out = ApplyAugment(s, {.flipped = false, .brightness = 1.0, .saturation = 1.0}, config);
  Sample resized = ResizeSample(s, 96, 96);
  EXPECT_LT(testing::MaxAbsDiff(out.image, resized.image), 1e-6);
  EXPECT_EQ(testing::MaxAbsDiff(out.mask, resized.mask), 0.0);
  Sample flipped = ApplyAugment(s, {.flipped = true}, {.out_height = 64, .out_width = 64});
  EXPECT_EQ(testing::MaxAbsDiff(flipped.mask, FlipHorizontal(s.mask)), 0.0);
}

TEST(AugmentTest, BrightnessClampsToUnitRange) {
  Sample s = SynthScene({.seed = 8});
  s.image.Fill(0.9f);
  Sample out = ApplyAugment(s, {.brightness = 1.2}, {.out_height = 64, .out_width = 64});
  for (float v : out.image.data()) EXPECT_EQ(v, 1.0f);
}

TEST(SplitTest, DeterministicAndNonEmpty) {
  std::vector<Sample> samples;
  for (uint64_t i = 0; i < 40; ++i) samples.push_back(SynthScene({.seed = i}));
  DatasetSplit a = SplitByHash(samples);
  std::reverse(samples.begin(), samples.end());
  DatasetSplit b = SplitByHash(samples);
  ASSERT_EQ(a.val.size(), b.val.size());
  for (size_t i = 0; i < a.val.size(); ++i) EXPECT_EQ(a.val[i].id, b.val[i].id);
  EXPECT_EQ(a.train.size() + a.val.size(), 40u);
  EXPECT_FALSE(a.train.empty());
  EXPECT_FALSE(a.val.empty());
  std::set<std::string> ids;
  for (const Sample& s : a.train) ids.insert(s.id);
  for (const Sample& s : a.val) EXPECT_EQ(ids.count(s.id), 0u);

  DatasetSplit two = SplitByHash({SynthScene({.seed = 1}), SynthScene({.seed = 2})});
  EXPECT_EQ(two.train.size(), 1u);
  EXPECT_EQ(two.val.size(), 1u);
}

TEST(BatchTest, StacksSamples) {
  Sample a = SynthScene({.seed = 1}), b = SynthScene({.seed = 2});
  Batch batch = MakeBatch({&a, &b});
  EXPECT_EQ(batch.images.shape(), (Shape{2, 3, 64, 64}));
  EXPECT_EQ(batch.masks.at({1, 0, 40, 3}), b.mask.at({0, 0, 40, 3}));
  Sample c = SynthScene({.height = 32, .width = 32, .seed = 3});
  EXPECT_THROW(MakeBatch({&a, &c}), DimensionError);
}

}  // namespace
}  // namespace agsenet
