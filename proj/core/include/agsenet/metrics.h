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

#ifndef AGSENET_METRICS_H_
#define AGSENET_METRICS_H_

#include <cstdint>
#include <optional>
#include <string>

#include "agsenet/tensor.h"

namespace agsenet {

// Pixel tallies for the foreground (ponding) class. Counts form a monoid
// under +=, so partial tallies can be merged in any grouping.
struct ConfusionCounts {
  int64_t tp = 0;
  int64_t tn = 0;
  int64_t fp = 0;
  int64_t fn = 0;

  int64_t total() const { return tp + tn + fp + fn; }
  ConfusionCounts& operator+=(const ConfusionCounts& o) {
    tp += o.tp;
    tn += o.tn;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  friend ConfusionCounts operator+(ConfusionCounts a, const ConfusionCounts& b) {
    return a += b;
  }
  bool operator==(const ConfusionCounts&) const = default;
};

inline constexpr float kDefaultThreshold = 0.5f;

// Binarizes pred (p >= threshold is foreground) against a {0,1} target.
ConfusionCounts Confusion(const Tensor& pred, const Tensor& target,
                          float threshold = kDefaultThreshold);

// tp / (tp + fn + fp); 1 when both masks are empty.
double Iou(const ConfusionCounts& c);
// Background IoU: tn / (tn + fp + fn); 1 when there is no background.
double BackgroundIou(const ConfusionCounts& c);
// Mean of foreground and background IoU.
double MeanIou(const ConfusionCounts& c);
// tp / (tp + fp); 0 with no positive predictions.
double Precision(const ConfusionCounts& c);
// tp / (tp + fn); 0 with no positive pixels.
double Recall(const ConfusionCounts& c);
// 2 Pre Rec / (Pre + Rec); 0 when both vanish.
double FBeta(const ConfusionCounts& c);
// (tp + tn) / total.
double PixelAccuracy(const ConfusionCounts& c);

// Class-conditional rates. Undefined (nullopt) when the class is absent.
std::optional<double> TruePositiveRate(const ConfusionCounts& c);
std::optional<double> TrueNegativeRate(const ConfusionCounts& c);
std::optional<double> FalsePositiveRate(const ConfusionCounts& c);
std::optional<double> FalseNegativeRate(const ConfusionCounts& c);

// (TPR + TNR) / 2; nullopt if either class is empty.
std::optional<double> NormalizedPixelAccuracy(const ConfusionCounts& c);

struct MetricsReport {
  ConfusionCounts counts;
  double iou = 0.0;
  double miou = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f_beta = 0.0;
  double pixel_accuracy = 0.0;
  std::optional<double> npa;
  std::optional<double> tpr, tnr, fpr, fnr;
  int64_t images = 0;
  // Images whose own NPA was undefined (one class absent in the mask).
  int64_t npa_undefined_images = 0;
};

MetricsReport MakeReport(const ConfusionCounts& counts);

// Human-readable table.
std::string FormatReportTable(const MetricsReport& report);
// One `metric=value` pair per line; undefined values are written as "nan".
std::string FormatReportKeyValue(const MetricsReport& report);

}  // namespace agsenet

#endif  // AGSENET_METRICS_H_
