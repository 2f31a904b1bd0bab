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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <string>
#include <vector>

#include "agsenet/autograd.h"
#include "agsenet/checkpoint.h"
#include "agsenet/csif.h"
#include "agsenet/layers.h"
#include "agsenet/loss.h"
#include "agsenet/metrics.h"
#include "agsenet/model.h"
#include "agsenet/ops.h"
#include "agsenet/rsu.h"
#include "agsenet/ssie.h"
#include "agsenet/synth.h"
#include "agsenet/trainer.h"
#include "support/testing.h"

namespace agsenet {
namespace {

namespace fs = std::filesystem;
using testing::GradCheck;
using testing::MaxAbsDiff;
using testing::RandomTensor;

// Tolerances.
constexpr double kParamTolerance = 0.10;
constexpr double kGradTolerance = 1e-2;
constexpr double kRowSumTolerance = 1e-5;
constexpr double kOracleTolerance = 1e-5;
constexpr double kDeskIou = 0.95;
constexpr double kDeskLossDrop = 10.0;
constexpr double kFogTolerance = 1e-6;
constexpr double kFiniteDiffTolerance = 1e-2;

struct Outcome {
  bool pass = true;
  std::string detail;

  void Require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

std::string Fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), format, a, b, c);
  return buf;
}

Tensor Leaf(Tensor t) {
  t.set_requires_grad(true);
  return t;
}

void AppendTrainable(const ParamStore& store, std::vector<Tensor>& wrt,
                     std::vector<std::string>& names) {
  for (const Param& p : store.entries()) {
    if (!p.trainable()) continue;
    wrt.push_back(p.value);
    names.push_back(p.name);
  }
}

fs::path ScratchDir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("agsenet_acceptance_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string ReadBytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

bool SameTree(const fs::path& a, const fs::path& b, int* files) {
  *files = 0;
  for (const auto& e : fs::recursive_directory_iterator(a)) {
    if (!e.is_regular_file()) continue;
    const fs::path rel = fs::relative(e.path(), a);
    if (!fs::exists(b / rel) || ReadBytes(e.path()) != ReadBytes(b / rel)) return false;
    ++*files;
  }
  for (const auto& e : fs::recursive_directory_iterator(b)) {
    if (e.is_regular_file() && !fs::exists(a / fs::relative(e.path(), b))) return false;
  }
  return true;
}

Outcome ParameterCount() {
  Outcome o;
  const double full = static_cast<double>(AgseNet(ModelConfig::Default()).CountParameters());
  const double base = static_cast<double>(AgseNet(ModelConfig::Baseline()).CountParameters());
  o.Require(std::abs(full - 2.05e6) <= kParamTolerance * 2.05e6, "full model out of range");
  o.Require(std::abs(base - 1.77e6) <= kParamTolerance * 1.77e6, "baseline out of range");
  o.detail = Fmt("full=%.0f (2.05M +-10%%) baseline=%.0f (1.77M +-10%%)", full, base) +
             (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

Outcome GradientCorrectness() {
  Outcome o;
  Rng rng(2024);
  double worst = 0.0;
  int cases = 0;
  auto check = [&](const std::string& name, const std::function<Tensor()>& f,
                   const std::vector<Tensor>& wrt, const std::vector<std::string>& names,
                   int max_checks = 24) {
    const auto r = GradCheck(f, wrt, names, {.max_checks_per_tensor = max_checks});
    worst = std::max(worst, r.max_rel_error);
    ++cases;
    o.Require(r.Passed(kGradTolerance), name + ": " + r.worst);
  };

  {
    Tensor x = Leaf(RandomTensor({2, 4, 8, 8}, rng));
    Tensor w = Leaf(RandomTensor({4, 4, 3, 3}, rng, -0.5f, 0.5f));
    Tensor b = Leaf(RandomTensor({4}, rng));
    for (int d : {1, 2, 4}) {
      check("conv2d dilation " + std::to_string(d),
            [&] { return Conv2d(x, w, b, {.padding = d, .dilation = d}); }, {x, w, b},
            {"x", "w", "b"});
    }
  }
  {
    Tensor x = Leaf(RandomTensor({2, 4, 8, 8}, rng));
    Tensor gamma = Leaf(RandomTensor({4}, rng, 0.5f, 1.5f));
    Tensor beta = Leaf(RandomTensor({4}, rng));
    Tensor mean({4}, 0.0f), var({4}, 1.0f);
    check("batchnorm", [&] { return BatchNorm(x, gamma, beta, mean, var, {}); },
          {x, gamma, beta}, {"x", "gamma", "beta"});
  }
  {
    Tensor x = Leaf(testing::RandomAwayFromZero({2, 4, 8, 8}, rng));
    check("relu", [&] { return Relu(x); }, {x}, {"x"});
    check("sigmoid", [&] { return Sigmoid(MulConstant(x, 3.0f)); }, {x}, {"x"});
    Tensor d = Leaf(testing::RandomDistinct({2, 4, 8, 8}, rng));
    check("maxpool", [&] { return MaxPool2x2(d); }, {d}, {"x"});
    check("channel max/mean", [&] { return Concat({ChannelMax(d), ChannelMean(d)}, 1); }, {d},
          {"x"});
  }
  {
    Tensor x = Leaf(RandomTensor({2, 4, 4, 4}, rng));
    check("upsample", [&] { return UpsampleBilinear(x, 8, 8); }, {x}, {"x"});
    Tensor y = Leaf(RandomTensor({2, 2, 4, 4}, rng));
    check("concat", [&] { return Concat({x, y}, 1); }, {x, y}, {"a", "b"});
  }
  {
    ParamStore store;
    Rng init(1);
    ConvBnRelu layer(store, "cbr", {.in_channels = 4, .out_channels = 4}, init);
    Tensor x = Leaf(RandomTensor({2, 4, 8, 8}, rng));
    std::vector<Tensor> wrt{x};
    std::vector<std::string> names{"x"};
    AppendTrainable(store, wrt, names);
    check("conv+bn+relu (training)", [&] { return layer.Forward(x, true); }, wrt, names);
  }
  {
    // Whole blocks are dense with ReLU and max-pool kinks; one sample in
    // eval mode keeps them sparse enough for finite differences.
    ParamStore store;
    Rng init(1);
    RsuBlock rsu(store, "rsu", {4, 4, 2, 4, false}, init);
    RsuBlock rsud(store, "rsud", {4, 4, 2, 4, true}, init);
    Tensor x = Leaf(RandomTensor({1, 4, 8, 8}, rng));
    std::vector<Tensor> wrt{x};
    std::vector<std::string> names{"x"};
    AppendTrainable(store, wrt, names);
    check("rsu blocks (eval)",
          [&] { return Add(rsu.Forward(x, false), rsud.Forward(x, false)); }, wrt, names, 6);
  }
  {
    ParamStore store;
    Rng init(2);
    Csif csif(store, "csif", 4, init);
    csif.csii().alpha().Fill(0.5f);
    Tensor x = Leaf(RandomTensor({2, 4, 8, 8}, rng));
    std::vector<Tensor> wrt{x};
    std::vector<std::string> names{"x"};
    AppendTrainable(store, wrt, names);
    check("csif (scip + csii)", [&] { return csif.Forward(x); }, wrt, names);
  }
  {
    ParamStore store;
    Rng init(3);
    Ssie ssie(store, "ssie", init);
    Tensor fh = Leaf(RandomTensor({2, 4, 8, 8}, rng));
    Tensor fl = Leaf(RandomTensor({2, 4, 8, 8}, rng));
    std::vector<Tensor> wrt{fh, fl};
    std::vector<std::string> names{"f_high", "f_low"};
    AppendTrainable(store, wrt, names);
    check("ssie (spatial attention x2)", [&] { return ssie.Fuse(fh, fl); }, wrt, names);
  }
  {
    Tensor p = Leaf(RandomTensor({2, 1, 8, 8}, rng, 0.05f, 0.95f));
    Tensor t({2, 1, 8, 8});
    for (float& v : t.data()) v = rng.Bernoulli(0.3) ? 1.0f : 0.0f;
    check("bce", [&] { return BceLoss(p, t); }, {p}, {"p"});
    check("dice", [&] { return DiceLoss(p, t); }, {p}, {"p"});
  }
  o.detail = Fmt("%.0f cases, worst rel err %.2e (< 1e-2)", cases, worst) +
             (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

Outcome AttentionNormalization() {
  Outcome o;
  Rng rng(7);
  double worst = 0.0;
  float gate_min = 1.0f, gate_max = 0.0f;
  for (int trial = 0; trial < 100; ++trial) {
    const int64_t c = 1 + static_cast<int64_t>(rng.Below(8));
    const int64_t h = 1 + static_cast<int64_t>(rng.Below(7));
    const int64_t w = 1 + static_cast<int64_t>(rng.Below(7));
    ParamStore store;
    Rng init(rng.Fork());
    Csii csii(store, "csii", c, init);
    SpatialAttention sa(store, "sa", init);
    const float scale = static_cast<float>(rng.Uniform(0.1, 10.0));
    Tensor x = RandomTensor({2, c, h, w}, rng, -scale, scale);
    CsiiTrace trace;
    csii.Forward(x, &trace);
    for (int64_t n = 0; n < 2; ++n) {
      for (int64_t i = 0; i < c; ++i) {
        double s = 0.0;
        for (int64_t j = 0; j < c; ++j) s += trace.attention.at({n, i, j});
        worst = std::max(worst, std::abs(s - 1.0));
      }
    }
    const Tensor gates = sa.Forward(x);
    for (float g : gates.data()) {
      gate_min = std::min(gate_min, g);
      gate_max = std::max(gate_max, g);
    }
  }
  o.Require(worst <= kRowSumTolerance, "row sum deviation too large");
  o.Require(gate_min > 0.0f && gate_max < 1.0f, "gate outside (0,1)");
  o.detail = Fmt("100 inputs, max |row sum - 1| = %.2e, gates in [%.4f, %.4f]", worst,
                 gate_min, gate_max) +
             (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

Outcome ResidualGating() {
  Outcome o;
  Rng rng(8);
  double csif_diff = 0.0, ssie_diff = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    ParamStore store;
    Rng init(rng.Fork());
    Csif csif(store, "csif", 6, init);
    Ssie ssie(store, "ssie", init);
    o.Require(csif.csii().alpha().item() == 0.0f, "alpha not zero at init");
    Tensor x = RandomTensor({2, 6, 5, 7}, rng);
    csif_diff = std::max(csif_diff, MaxAbsDiff(csif.Forward(x), csif.scip().Forward(x)));
    Tensor fh = RandomTensor({2, 6, 5, 7}, rng), fl = RandomTensor({2, 6, 5, 7}, rng);
    Tensor expected = Concat({MulConstant(fh, 2.0f), MulConstant(fl, 2.0f)}, 1);
    ssie_diff = std::max(ssie_diff,
                         MaxAbsDiff(ssie.Fuse(fh, fl, {.forced_gate = 1.0f}), expected));
  }
  o.Require(csif_diff == 0.0, "CSIF differs from SCIP output");
  o.Require(ssie_diff == 0.0, "SSIE differs from Cat(2 f_h, 2 f_l)");
  o.detail = Fmt("max |CSIF - SCIP| = %g, max |SSIE - Cat(2fh,2fl)| = %g (exact)", csif_diff,
                 ssie_diff) +
             (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

Outcome OracleEquivalence() {
  Outcome o;
  Rng rng(9);
  double conv = 0.0, cc = 0.0, bce = 0.0;
  int64_t confusion_mismatches = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const int64_t cin = 1 + static_cast<int64_t>(rng.Below(4));
    const int64_t cout = 1 + static_cast<int64_t>(rng.Below(4));
    const int k = 1 + 2 * static_cast<int>(rng.Below(2));
    const int dil = 1 + static_cast<int>(rng.Below(3));
    const int stride = 1 + static_cast<int>(rng.Below(2));
    const int pad = static_cast<int>(rng.Below(3));
    // At least one full dilated window, and never below 6 for the other checks.
    const int64_t reach = std::max<int64_t>(6, dil * (k - 1) + 1);
    const int64_t h = reach + static_cast<int64_t>(rng.Below(5));
    const int64_t w = reach + static_cast<int64_t>(rng.Below(5));
    Tensor x = RandomTensor({2, cin, h, w}, rng);
    Tensor wt = RandomTensor({cout, cin, k, k}, rng);
    Tensor b = RandomTensor({cout}, rng);
    conv = std::max(conv, MaxAbsDiff(Conv2d(x, wt, b, {stride, pad, dil}),
                                     testing::NaiveConv2d(x, wt, b, stride, pad, dil)));

    ParamStore store;
    Rng init(rng.Fork());
    Scip scip(store, "scip", cin + 1, init);
    Tensor f = RandomTensor({1, cin + 1, h, w}, rng);
    Tensor expected = Add(f, testing::NaiveCrissCross(scip.query().Forward(f),
                                                      scip.key().Forward(f),
                                                      scip.value().Forward(f)));
    cc = std::max(cc, MaxAbsDiff(scip.Forward(f), expected));

    Tensor p = RandomTensor({2, 1, h, w}, rng, 0.0f, 1.0f);
    Tensor t({2, 1, h, w});
    for (float& v : t.data()) v = rng.Bernoulli(0.3) ? 1.0f : 0.0f;
    const float threshold = static_cast<float>(rng.Uniform(0.1, 0.9));
    if (!(Confusion(p, t, threshold) == testing::NaiveConfusion(p, t, threshold))) {
      ++confusion_mismatches;
    }
    bce = std::max(bce, std::abs(BceLoss(p, t).item() - testing::NaiveBce(p, t)));
  }
  o.Require(conv <= kOracleTolerance, "conv2d");
  o.Require(cc <= kOracleTolerance, "criss-cross");
  o.Require(confusion_mismatches == 0, "confusion");
  o.Require(bce <= kOracleTolerance, "bce");
  o.detail = Fmt("20 instances; conv2d %.2e, criss-cross %.2e, bce %.2e", conv, cc, bce) +
             ", confusion mismatches " + std::to_string(confusion_mismatches) +
             (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

std::vector<Sample> DeskScenes(int n, uint64_t first_seed) {
  std::vector<Sample> out;
  for (int i = 0; i < n; ++i) {
    out.push_back(SynthScene(
        {.height = 64, .width = 64, .n_puddles = 1 + i % 3, .seed = first_seed + i}));
  }
  return out;
}

std::map<std::string, std::vector<float>> LoadSsie(const fs::path& ckpt) {
  AgseNet model(ModelConfig::Default(), 0);
  LoadModelCheckpoint(model, ckpt);
  std::map<std::string, std::vector<float>> out;
  for (const Param* p : model.params().WithPrefix("ssie.")) {
    out[p->name].assign(p->value.data().begin(), p->value.data().end());
  }
  return out;
}

Outcome DeskConvergence() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  const std::vector<Sample> train = DeskScenes(8, 0), val = DeskScenes(2, 100);
  TrainConfig config = TrainConfig::Desk();
  config.checkpoint_dir = ScratchDir("desk");
  config.eval_every = config.ssie_freeze_epochs;
  Trainer trainer(config);

  std::map<std::string, std::vector<float>> initial_ssie;
  for (const Param* p : trainer.model().params().WithPrefix("ssie.")) {
    initial_ssie[p->name].assign(p->value.data().begin(), p->value.data().end());
  }
  std::ofstream log(config.checkpoint_dir.parent_path() / "agsenet_acceptance_desk.log");
  const std::vector<StepLog> history = trainer.Train(train, val, &log);

  auto epoch_mean = [&](int epoch) {
    double sum = 0.0;
    int n = 0;
    for (const StepLog& s : history) {
      if (s.epoch == epoch) {
        sum += s.loss;
        ++n;
      }
    }
    return n == 0 ? 0.0 : sum / n;
  };
  const double first = epoch_mean(0), last = epoch_mean(config.epochs - 1);
  const double iou = Evaluate(ModelPredictor(trainer.model()), train).iou;

  const int freeze = config.ssie_freeze_epochs;
  char name[32];
  std::snprintf(name, sizeof(name), "epoch-%04d", freeze);
  const bool frozen_kept = LoadSsie(config.checkpoint_dir / name) == initial_ssie;
  std::snprintf(name, sizeof(name), "epoch-%04d", 2 * freeze);
  const bool moved_after = LoadSsie(config.checkpoint_dir / name) != initial_ssie;
  const double minutes =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() / 60.0;

  o.Require(iou >= kDeskIou, "training IoU below 0.95");
  o.Require(last > 0.0 && first / last >= kDeskLossDrop, "loss drop below 10x");
  o.Require(frozen_kept, "SSIE changed during freeze");
  o.Require(moved_after, "SSIE never trained after freeze");
  o.detail = Fmt("train IoU %.4f (>= 0.95), loss %.4f -> %.4f", iou, first, last) +
             Fmt(" (%.1fx, >= 10x), gamma %.3f delta %.3f", first / last,
                 trainer.loss_scales().gamma().item(), trainer.loss_scales().delta().item()) +
             ", SSIE frozen " + std::to_string(freeze) + "/" + std::to_string(config.epochs) +
             " epochs " + (frozen_kept && moved_after ? "honored" : "violated") +
             Fmt(", %.1f min", minutes) + (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

Outcome MetricIdentities() {
  Outcome o;
  Rng rng(10);
  bool npa_exact = true, pa_matches = true, iou_le_f = true;
  for (int trial = 0; trial < 50; ++trial) {
    Sample s = SynthScene({.height = 64, .width = 64,
                           .n_puddles = 1 + static_cast<int>(rng.Below(3)),
                           .seed = rng.NextU64()});
    const ConfusionCounts c = Confusion(Tensor(s.mask.shape(), 0.0f), s.mask);
    const auto npa = NormalizedPixelAccuracy(c);
    npa_exact = npa_exact && npa.has_value() && *npa == 0.5;
    const double negatives = static_cast<double>(c.tn + c.fp) / static_cast<double>(c.total());
    pa_matches = pa_matches && PixelAccuracy(c) == negatives;
  }
  // The 98.5% negative case.
  Tensor target({1, 1, 40, 50}, 0.0f);
  for (int i = 0; i < 30; ++i) target.data()[static_cast<size_t>(i * 61)] = 1.0f;
  const ConfusionCounts skewed = Confusion(Tensor(target.shape(), 0.0f), target);
  const double pa = PixelAccuracy(skewed);
  npa_exact = npa_exact && *NormalizedPixelAccuracy(skewed) == 0.5;
  for (int trial = 0; trial < 1000; ++trial) {
    ConfusionCounts c;
    c.tp = 1 + static_cast<int64_t>(rng.Below(1000));
    c.tn = static_cast<int64_t>(rng.Below(1000));
    c.fp = static_cast<int64_t>(rng.Below(1000));
    c.fn = static_cast<int64_t>(rng.Below(1000));
    iou_le_f = iou_le_f && Iou(c) <= FBeta(c);
  }
  o.Require(npa_exact, "NPA of all-negative predictor is not 0.5");
  o.Require(pa_matches && pa == 0.985, "PA differs from negative fraction");
  o.Require(iou_le_f, "IoU > F-beta");
  o.detail = Fmt("all-negative NPA = 0.5 on 51 masks, PA at 98.5%% negatives = %.4f, "
                 "IoU <= F on 1000 count sets",
                 pa) +
             (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

Outcome FogModel() {
  Outcome o;
  Sample s = SynthScene({.seed = 11});
  const double identity = MaxAbsDiff(SynthFog(s, {.beta = 0.0, .light = {0.8, 0.8, 0.8}}).image,
                                     s.image);
  Sample far = s;
  far.depth = Tensor(s.depth->shape(), 1e7f);
  const std::array<double, 3> light = {0.25, 0.5, 0.75};
  Sample fogged = SynthFog(far, {.beta = 0.05, .light = light});
  double asymptote = 0.0;
  const int64_t plane = 64 * 64;
  for (int64_t c = 0; c < 3; ++c) {
    for (int64_t i = 0; i < plane; ++i) {
      asymptote = std::max(asymptote, std::abs(fogged.image.data()[c * plane + i] - light[c]));
    }
  }
  Sample scalar;
  scalar.id = "scalar";
  scalar.image = Tensor({1, 3, 1, 1}, 0.0f);
  scalar.mask = Tensor({1, 1, 1, 1}, 0.0f);
  scalar.depth = Tensor({1, 1, 1, 1}, 20.0f);
  const double value = SynthFog(scalar, {.beta = 0.05}).image.data()[0];
  const double expected = 1.0 - std::exp(-1.0);
  o.Require(identity == 0.0, "beta=0 not identity");
  o.Require(asymptote <= kFogTolerance, "far depth does not reach L");
  o.Require(std::abs(value - expected) <= kFogTolerance, "scalar case");
  o.detail = Fmt("beta=0 diff %g, far-depth |I-L| %.1e, scalar %.7f", identity, asymptote,
                 value) +
             Fmt(" vs 1-e^-1 = %.7f", expected) + (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

Outcome LossStructure() {
  Outcome o;
  AgseNet model(ModelConfig::Default(), 5);
  Sample s = SynthScene({.seed = 12});
  const SaliencyOutputs out = model.Forward(s.image, /*training=*/true);
  SaliencyOutputs detached{{}, out.fused.Detach()};
  for (const Tensor& m : out.side) detached.side.push_back(m.Detach());

  ParamStore store;
  LossScales scales(store);
  LossBreakdown loss = TotalLoss(detached, s.mask, scales);
  Backward(loss.total);
  double bce_sum = 0.0;
  for (double b : loss.bce) bce_sum += b;
  const double analytic = scales.gamma().grad()[0];

  // Central difference in double around gamma = 1.
  const float h = 1e-2f;
  auto total_at = [&](float g) {
    scales.gamma().Fill(g);
    NoGradGuard guard;
    return static_cast<double>(TotalLoss(detached, s.mask, scales).total.item());
  };
  const double numeric = (total_at(1.0f + h) - total_at(1.0f - h)) / (2.0 * h);
  scales.gamma().Fill(1.0f);
  const double rel_analytic = std::abs(analytic - bce_sum) / std::max(1.0, std::abs(bce_sum));
  const double rel_numeric = std::abs(numeric - bce_sum) / std::max(1.0, std::abs(bce_sum));
  o.Require(loss.terms() == 7, "term count is not 7");
  o.Require(rel_analytic < kFiniteDiffTolerance, "analytic d/dgamma differs from sum of BCE");
  o.Require(rel_numeric < kFiniteDiffTolerance, "numeric d/dgamma differs from sum of BCE");
  o.detail = Fmt("%.0f terms; sum BCE %.6f, d/dgamma analytic %.6f", loss.terms(), bce_sum,
                 analytic) +
             Fmt(", finite difference %.6f", numeric) +
             (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

Outcome Determinism() {
  Outcome o;
  const std::vector<Sample> train = DeskScenes(4, 200), val = DeskScenes(1, 300);
  std::vector<fs::path> dirs;
  for (const char* name : {"det_a", "det_b"}) {
    TrainConfig config = TrainConfig::Desk();
    config.epochs = 2;
    config.ssie_freeze_epochs = 1;
    config.eval_every = 1;
    config.batch_size = 2;
    config.seed = 42;
    config.checkpoint_dir = ScratchDir(name);
    dirs.push_back(config.checkpoint_dir);
    Trainer(config).Train(train, val);
  }
  int files = 0;
  const bool runs_equal = SameTree(dirs[0], dirs[1], &files);

  TrainConfig config = TrainConfig::Desk();
  Trainer fresh(config);
  LoadCheckpoint(fresh.checkpoint_params(), dirs[0] / "final");
  const fs::path again = ScratchDir("det_again");
  SaveCheckpoint(fresh.checkpoint_params(), again);
  int ckpt_files = 0;
  const bool round_trip = SameTree(dirs[0] / "final", again, &ckpt_files);

  o.Require(runs_equal && files > 0, "seeded runs differ");
  o.Require(round_trip && ckpt_files > 0, "save/load/save differs");
  o.detail = std::to_string(files) + " files identical across two seeded runs; " +
             std::to_string(ckpt_files) + " checkpoint files identical after save/load/save" +
             (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

}  // namespace
}  // namespace agsenet

// With arguments, runs only the named criteria.
int main(int argc, char** argv) {
  using agsenet::Outcome;
  const std::vector<std::string> only(argv + 1, argv + argc);
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"parameter_count", agsenet::ParameterCount},
      {"gradient_correctness", agsenet::GradientCorrectness},
      {"attention_normalization", agsenet::AttentionNormalization},
      {"residual_gating", agsenet::ResidualGating},
      {"oracle_equivalence", agsenet::OracleEquivalence},
      {"desk_convergence", agsenet::DeskConvergence},
      {"metric_identities", agsenet::MetricIdentities},
      {"fog_model", agsenet::FogModel},
      {"loss_structure", agsenet::LossStructure},
      {"determinism", agsenet::Determinism},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), name) == only.end()) continue;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
