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

#include "agsenet/metrics.h"

#include <cstdio>
#include <sstream>

#include "agsenet/errors.h"

namespace agsenet {
namespace {

double Ratio(int64_t num, int64_t den, double if_empty) {
  return den == 0 ? if_empty : static_cast<double>(num) / static_cast<double>(den);
}

std::string FormatValue(std::optional<double> v) {
  if (!v) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", *v);
  return buf;
}

}  // namespace

ConfusionCounts Confusion(const Tensor& pred, const Tensor& target, float threshold) {
  if (pred.shape() != target.shape()) {
    throw DimensionError("confusion: prediction " + ShapeToString(pred.shape()) +
                         " vs target " + ShapeToString(target.shape()));
  }
  if (!(threshold > 0.0f && threshold < 1.0f)) {
    throw ConfigError("threshold must lie in (0,1)");
  }
  ConfusionCounts c;
  const float* p = pred.data().data();
  const float* t = target.data().data();
  for (size_t i = 0; i < pred.data().size(); ++i) {
    const bool predicted = p[i] >= threshold;
    const bool actual = t[i] >= 0.5f;
    if (predicted && actual) ++c.tp;
    else if (!predicted && !actual) ++c.tn;
    else if (predicted) ++c.fp;
    else ++c.fn;
  }
  return c;
}

double Iou(const ConfusionCounts& c) { return Ratio(c.tp, c.tp + c.fn + c.fp, 1.0); }

double BackgroundIou(const ConfusionCounts& c) {
  return Ratio(c.tn, c.tn + c.fp + c.fn, 1.0);
}

double MeanIou(const ConfusionCounts& c) { return 0.5 * (Iou(c) + BackgroundIou(c)); }

double Precision(const ConfusionCounts& c) { return Ratio(c.tp, c.tp + c.fp, 0.0); }

double Recall(const ConfusionCounts& c) { return Ratio(c.tp, c.tp + c.fn, 0.0); }

double FBeta(const ConfusionCounts& c) {
  const double pre = Precision(c), rec = Recall(c);
  return pre + rec == 0.0 ? 0.0 : 2.0 * pre * rec / (pre + rec);
}

double PixelAccuracy(const ConfusionCounts& c) {
  return Ratio(c.tp + c.tn, c.total(), 0.0);
}

std::optional<double> TruePositiveRate(const ConfusionCounts& c) {
  if (c.tp + c.fn == 0) return std::nullopt;
  return Ratio(c.tp, c.tp + c.fn, 0.0);
}

std::optional<double> TrueNegativeRate(const ConfusionCounts& c) {
  if (c.tn + c.fp == 0) return std::nullopt;
  return Ratio(c.tn, c.tn + c.fp, 0.0);
}

std::optional<double> FalsePositiveRate(const ConfusionCounts& c) {
  if (c.tn + c.fp == 0) return std::nullopt;
  return Ratio(c.fp, c.tn + c.fp, 0.0);
}

std::optional<double> FalseNegativeRate(const ConfusionCounts& c) {
  if (c.tp + c.fn == 0) return std::nullopt;
  return Ratio(c.fn, c.tp + c.fn, 0.0);
}

std::optional<double> NormalizedPixelAccuracy(const ConfusionCounts& c) {
  const auto tpr = TruePositiveRate(c);
  const auto tnr = TrueNegativeRate(c);
  if (!tpr || !tnr) return std::nullopt;
  return (*tpr + *tnr) / 2.0;
}

MetricsReport MakeReport(const ConfusionCounts& counts) {
  MetricsReport r;
  r.counts = counts;
  r.iou = Iou(counts);
  r.miou = MeanIou(counts);
  r.precision = Precision(counts);
  r.recall = Recall(counts);
  r.f_beta = FBeta(counts);
  r.pixel_accuracy = PixelAccuracy(counts);
  r.npa = NormalizedPixelAccuracy(counts);
  r.tpr = TruePositiveRate(counts);
  r.tnr = TrueNegativeRate(counts);
  r.fpr = FalsePositiveRate(counts);
  r.fnr = FalseNegativeRate(counts);
  return r;
}

std::string FormatReportTable(const MetricsReport& r) {
  std::ostringstream os;
  auto row = [&os](const char* name, const std::string& value) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "| %-10s | %14s |\n", name, value.c_str());
    os << buf;
  };
  os << "+------------+----------------+\n";
  row("metric", "value");
  os << "+------------+----------------+\n";
  row("IoU", FormatValue(r.iou));
  row("MIoU", FormatValue(r.miou));
  row("Precision", FormatValue(r.precision));
  row("Recall", FormatValue(r.recall));
  row("F-beta", FormatValue(r.f_beta));
  row("PA", FormatValue(r.pixel_accuracy));
  row("NPA", FormatValue(r.npa));
  row("TPR", FormatValue(r.tpr));
  row("TNR", FormatValue(r.tnr));
  row("FPR", FormatValue(r.fpr));
  row("FNR", FormatValue(r.fnr));
  os << "+------------+----------------+\n";
  row("TP", std::to_string(r.counts.tp));
  row("TN", std::to_string(r.counts.tn));
  row("FP", std::to_string(r.counts.fp));
  row("FN", std::to_string(r.counts.fn));
  row("images", std::to_string(r.images));
  os << "+------------+----------------+\n";
  return os.str();
}

std::string FormatReportKeyValue(const MetricsReport& r) {
  std::ostringstream os;
  os << "iou=" << FormatValue(r.iou) << '\n'
     << "miou=" << FormatValue(r.miou) << '\n'
     << "precision=" << FormatValue(r.precision) << '\n'
     << "recall=" << FormatValue(r.recall) << '\n'
     << "f_beta=" << FormatValue(r.f_beta) << '\n'
     << "pa=" << FormatValue(r.pixel_accuracy) << '\n'
     << "npa=" << FormatValue(r.npa) << '\n'
     << "tpr=" << FormatValue(r.tpr) << '\n'
     << "tnr=" << FormatValue(r.tnr) << '\n'
     << "fpr=" << FormatValue(r.fpr) << '\n'
     << "fnr=" << FormatValue(r.fnr) << '\n'
     << "tp=" << r.counts.tp << '\n'
     << "tn=" << r.counts.tn << '\n'
     << "fp=" << r.counts.fp << '\n'
     << "fn=" << r.counts.fn << '\n'
     << "images=" << r.images << '\n'
     << "npa_undefined_images=" << r.npa_undefined_images << '\n';
  return os.str();
}

}  // namespace agsenet
