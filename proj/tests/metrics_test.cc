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

#include "agsenet/errors.h"
#include "agsenet/metrics.h"
#include "support/testing.h"

namespace agsenet {
namespace {

ConfusionCounts Counts(int64_t tp, int64_t tn, int64_t fp, int64_t fn) {
  ConfusionCounts c;
  c.tp = tp;
  c.tn = tn;
  c.fp = fp;
  c.fn = fn;
  return c;
}

int64_t Draw(Rng& rng, uint64_t n) { return static_cast<int64_t>(rng.Below(n)); }

Tensor RandomBinary(const Shape& shape, Rng& rng, double p) {
  Tensor t(shape);
  for (float& v : t.data()) v = rng.Bernoulli(p) ? 1.0f : 0.0f;
  return t;
}

TEST(ConfusionTest, PerfectAndInverted) {
  Rng rng(1);
  Tensor m = RandomBinary({1, 1, 16, 16}, rng, 0.4);
  ConfusionCounts same = Confusion(m, m);
  EXPECT_EQ(same.fp, 0);
  EXPECT_EQ(same.fn, 0);
  EXPECT_EQ(same.total(), 256);
  Tensor inv(m.shape());
  for (int64_t i = 0; i < m.numel(); ++i) inv.data()[i] = 1.0f - m.data()[i];
  ConfusionCounts flipped = Confusion(inv, m);
  EXPECT_EQ(flipped.tp, 0);
  EXPECT_EQ(flipped.tn, 0);
}

TEST(ConfusionTest, MatchesLoopOracle) {
  Rng rng(2);
  for (int trial = 0; trial < 25; ++trial) {
    const float threshold = static_cast<float>(rng.Uniform(0.1, 0.9));
    Tensor pred = testing::RandomTensor({2, 1, 16, 16}, rng, 0.0f, 1.0f);
    Tensor target = RandomBinary({2, 1, 16, 16}, rng, rng.Uniform01());
    EXPECT_EQ(Confusion(pred, target, threshold),
              testing::NaiveConfusion(pred, target, threshold));
  }
}

TEST(ConfusionTest, Preconditions) {
  EXPECT_THROW(Confusion(Tensor({1, 1, 2, 2}), Tensor({1, 1, 2, 3})), DimensionError);
  EXPECT_THROW(Confusion(Tensor({1, 1, 2, 2}), Tensor({1, 1, 2, 2}), 1.0f), ConfigError);
  EXPECT_THROW(Confusion(Tensor({1, 1, 2, 2}), Tensor({1, 1, 2, 2}), 0.0f), ConfigError);
}

TEST(MetricsTest, HandValues) {
  EXPECT_DOUBLE_EQ(Iou(Counts(1, 0, 1, 1)), 1.0 / 3.0);
  const ConfusionCounts c = Counts(8, 0, 2, 4);
  EXPECT_DOUBLE_EQ(Precision(c), 0.8);
  EXPECT_DOUBLE_EQ(Recall(c), 2.0 / 3.0);
  EXPECT_NEAR(FBeta(c), 0.727272727, 1e-9);
  EXPECT_DOUBLE_EQ(FBeta(Counts(1, 0, 1, 1)), 0.5);
  // TPR 0.9, TNR 0.96.
  EXPECT_NEAR(*NormalizedPixelAccuracy(Counts(9, 96, 4, 1)), 0.93, 1e-12);
}

TEST(MetricsTest, PerfectAndAllWrong) {
  const ConfusionCounts perfect = Counts(10, 30, 0, 0);
  EXPECT_EQ(Iou(perfect), 1.0);
  EXPECT_EQ(MeanIou(perfect), 1.0);
  EXPECT_EQ(FBeta(perfect), 1.0);
  EXPECT_EQ(PixelAccuracy(perfect), 1.0);
  EXPECT_EQ(*NormalizedPixelAccuracy(perfect), 1.0);
  const ConfusionCounts wrong = Counts(0, 0, 30, 10);
  EXPECT_EQ(Iou(wrong), 0.0);
  EXPECT_EQ(PixelAccuracy(wrong), 0.0);
}

TEST(MetricsTest, MeanIouMatchesTwoClassFormula) {
  EXPECT_DOUBLE_EQ(Iou(Counts(5, 5, 2, 2)), BackgroundIou(Counts(5, 5, 2, 2)));
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const ConfusionCounts c = Counts(Draw(rng, 100) + 1, Draw(rng, 100) + 1, Draw(rng, 100),
                                     Draw(rng, 100));
    const double fg = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp + c.fn);
    const double bg = static_cast<double>(c.tn) / static_cast<double>(c.tn + c.fn + c.fp);
    EXPECT_NEAR(MeanIou(c), (fg + bg) / 2.0, 1e-12);
  }
}

TEST(MetricsTest, AllNegativePredictorOnImbalancedMask) {
  // 985 of 1000 pixels negative.
  Tensor target({1, 1, 1, 1000}, 0.0f);
  for (int i = 0; i < 15; ++i) target.data()[static_cast<size_t>(i * 61)] = 1.0f;
  ConfusionCounts c = Confusion(Tensor({1, 1, 1, 1000}, 0.0f), target);
  EXPECT_EQ(PixelAccuracy(c), 0.985);
  EXPECT_EQ(*TruePositiveRate(c), 0.0);
  EXPECT_EQ(*TrueNegativeRate(c), 1.0);
  EXPECT_EQ(*NormalizedPixelAccuracy(c), 0.5);
}

TEST(MetricsTest, AllNegativeNpaIsHalfForAnyImbalance) {
  Rng rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const double p = rng.Uniform(0.001, 0.6);
    Tensor target = RandomBinary({1, 1, 32, 32}, rng, p);
    target.data()[0] = 1.0f;
    target.data()[1] = 0.0f;
    ConfusionCounts c = Confusion(Tensor(target.shape(), 0.0f), target);
    EXPECT_EQ(*NormalizedPixelAccuracy(c), 0.5);
    EXPECT_DOUBLE_EQ(PixelAccuracy(c), static_cast<double>(c.tn) / 1024.0);
  }
}

TEST(MetricsTest, UndefinedRatesWhenClassAbsent) {
  const ConfusionCounts no_positive = Counts(0, 50, 3, 0);
  EXPECT_FALSE(TruePositiveRate(no_positive).has_value());
  EXPECT_FALSE(NormalizedPixelAccuracy(no_positive).has_value());
  EXPECT_TRUE(TrueNegativeRate(no_positive).has_value());
  EXPECT_FALSE(NormalizedPixelAccuracy(Counts(4, 0, 0, 1)).has_value());
  EXPECT_NE(FormatReportKeyValue(MakeReport(no_positive)).find("npa=nan"), std::string::npos);
}

TEST(MetricsTest, PropertiesOnRandomCounts) {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const ConfusionCounts c =
        Counts(Draw(rng, 50) + 1, Draw(rng, 50), Draw(rng, 50), Draw(rng, 50));
    EXPECT_LE(Iou(c), FBeta(c) + 1e-15);
    const MetricsReport r = MakeReport(c);
    for (double v : {r.iou, r.miou, r.precision, r.recall, r.f_beta, r.pixel_accuracy}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
}

TEST(MetricsTest, AccumulationIsLinear) {
  Rng rng(6);
  Tensor p1 = testing::RandomTensor({1, 1, 8, 8}, rng, 0.0f, 1.0f);
  Tensor p2 = testing::RandomTensor({1, 1, 8, 8}, rng, 0.0f, 1.0f);
  Tensor t1 = RandomBinary({1, 1, 8, 8}, rng, 0.3), t2 = RandomBinary({1, 1, 8, 8}, rng, 0.3);
  Tensor pc({1, 1, 16, 8}), tc({1, 1, 16, 8});
  std::copy(p1.data().begin(), p1.data().end(), pc.data().begin());
  std::copy(p2.data().begin(), p2.data().end(), pc.data().begin() + 64);
  std::copy(t1.data().begin(), t1.data().end(), tc.data().begin());
  std::copy(t2.data().begin(), t2.data().end(), tc.data().begin() + 64);
  EXPECT_EQ(Confusion(p1, t1) + Confusion(p2, t2), Confusion(pc, tc));
}

TEST(MetricsTest, ReportFormats) {
  const MetricsReport r = MakeReport(Counts(8, 86, 2, 4));
  const std::string kv = FormatReportKeyValue(r);
  EXPECT_NE(kv.find("iou=0.571429\n"), std::string::npos) << kv;
  EXPECT_NE(kv.find("tp=8\n"), std::string::npos);
  const std::string table = FormatReportTable(r);
  EXPECT_NE(table.find("| F-beta     |       0.727273 |"), std::string::npos) << table;
}

}  // namespace
}  // namespace agsenet
