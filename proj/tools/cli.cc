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

#include "cli.h"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "agsenet/checkpoint.h"
#include "agsenet/data.h"
#include "agsenet/errors.h"
#include "agsenet/metrics.h"
#include "agsenet/model.h"
#include "agsenet/rng.h"
#include "agsenet/synth.h"
#include "agsenet/trainer.h"

namespace agsenet::cli {
namespace fs = std::filesystem;
namespace {

// Flag combinations that parse but make no sense; reported with exit code 1.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void CheckModelSize(int64_t size, const char* flag) {
  if (size < kMinInputSide || size % kSpatialDivisor != 0) {
    throw UsageError(std::string(flag) + " " + std::to_string(size) +
                     " is invalid: use a multiple of " + std::to_string(kSpatialDivisor) +
                     " that is at least " + std::to_string(kMinInputSide) + ", e.g. " +
                     std::to_string(std::max<int64_t>(
                         kMinInputSide,
                         (size + kSpatialDivisor / 2) / kSpatialDivisor * kSpatialDivisor)));
  }
}

std::vector<Sample> LoadDataset(const fs::path& manifest) {
  std::vector<Sample> samples;
  for (const ManifestRow& row : ReadManifest(manifest)) samples.push_back(LoadManifestRow(row));
  return samples;
}

void ResizeAll(std::vector<Sample>& samples, int64_t size) {
  for (Sample& s : samples) {
    if (s.height() != size || s.width() != size) s = ResizeSample(s, size, size);
  }
}

std::array<double, 3> ParseLight(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("--light expects one value or three comma-separated values, got '" +
                       text + "'");
    }
  }
  if (values.size() == 1) return {values[0], values[0], values[0]};
  if (values.size() == 3) return {values[0], values[1], values[2]};
  throw UsageError("--light expects one value or three comma-separated values, got '" +
                   text + "'");
}

std::string SampleName(uint64_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "synth_%04llu", static_cast<unsigned long long>(index));
  return buf;
}

// Red tint on pixels at or above the threshold.
Tensor Overlay(const Tensor& image, const Tensor& prob, double threshold) {
  Tensor out = image.Clone();
  const int64_t plane = image.dim(2) * image.dim(3);
  std::span<float> d = out.data();
  std::span<const float> p = prob.data();
  for (int64_t i = 0; i < plane; ++i) {
    if (p[i] < threshold) continue;
    d[i] = 0.5f * d[i] + 0.5f;
    d[plane + i] *= 0.5f;
    d[2 * plane + i] *= 0.5f;
  }
  return out;
}

struct TrainArgs {
  std::string manifest, out;
  TrainConfig config;
};

struct EvalArgs {
  std::string manifest, ckpt, predictions, report;
  double threshold = 0.5;
  int64_t size = 0;
  bool raw = false;
};

struct InferArgs {
  std::string image, ckpt, out, overlay, raw;
  int64_t size = 0;
};

struct SynthArgs {
  std::string out;
  int count = 0;
  int64_t size = 64;
  uint64_t seed = 0;
  int puddles = -1;
};

struct FogArgs {
  std::string manifest, out, light = "1.0";
  double beta = 0.0;
};

void RunTrain(const TrainArgs& a, std::ostream& out) {
  CheckModelSize(a.config.train_size, "--size");
  if (a.config.ssie_freeze_epochs >= a.config.epochs) {
    throw UsageError("--freeze-ssie must be smaller than --epochs");
  }
  DatasetSplit split = SplitByHash(LoadDataset(a.manifest));
  ResizeAll(split.val, a.config.train_size);
  TrainConfig config = a.config;
  config.checkpoint_dir = a.out;
  fs::create_directories(config.checkpoint_dir);
  std::ofstream log(config.checkpoint_dir / "train.log");
  if (!log) throw IoError("cannot write " + (config.checkpoint_dir / "train.log").string());
  Trainer trainer(config);
  out << "training on " << split.train.size() << " samples, validating on "
      << split.val.size() << "\n";
  const std::vector<StepLog> history = trainer.Train(split.train, split.val, &log);
  out << "last step: " << FormatStepLog(history.back()) << "\n"
      << "checkpoint: " << (config.checkpoint_dir / "final").string() << "\n";
}

void RunEval(const EvalArgs& a, std::ostream& out) {
  if (a.ckpt.empty() == a.predictions.empty()) {
    throw UsageError("eval needs exactly one of --ckpt or --predictions");
  }
  if (!(a.threshold > 0.0 && a.threshold < 1.0)) {
    throw UsageError("--threshold must lie strictly between 0 and 1");
  }
  if (a.size != 0) CheckModelSize(a.size, "--size");
  const std::vector<ManifestRow> rows = ReadManifest(a.manifest);
  std::vector<Sample> samples;
  for (const ManifestRow& row : rows) samples.push_back(LoadManifestRow(row));
  if (a.size != 0) ResizeAll(samples, a.size);

  MetricsReport report;
  if (!a.ckpt.empty()) {
    AgseNet model;
    LoadModelCheckpoint(model, a.ckpt);
    report = Evaluate(ModelPredictor(model), samples, a.threshold);
  } else {
    size_t next = 0;
    const Predictor stored = [&](const Tensor& image) {
      const fs::path stem = fs::path(a.predictions) / rows[next++].image.stem();
      Tensor pred;
      if (a.raw) {
        pred = LoadDepth(fs::path(stem).concat(".f32"));
      } else {
        pred = RasterToTensor(ReadPng(fs::path(stem).concat(".png"), 1));
      }
      if (pred.dim(2) != image.dim(2) || pred.dim(3) != image.dim(3)) {
        throw DimensionError("prediction " + stem.string() + " is " +
                             std::to_string(pred.dim(3)) + "x" + std::to_string(pred.dim(2)) +
                             " but the image is " + std::to_string(image.dim(3)) + "x" +
                             std::to_string(image.dim(2)));
      }
      return pred;
    };
    report = Evaluate(stored, samples, a.threshold);
  }
  const std::string table = FormatReportTable(report);
  std::ofstream(a.report) << table;
  std::ofstream kv(a.report + ".kv");
  kv << FormatReportKeyValue(report);
  if (!kv) throw IoError("cannot write report " + a.report);
  out << table;
}

void RunInfer(const InferArgs& a, std::ostream& out) {
  if (a.size != 0) CheckModelSize(a.size, "--size");
  const Raster raster = ReadPng(a.image, 3);
  const Tensor image = RasterToTensor(raster);
  Tensor input = image;
  if (a.size != 0) input = ResizeBilinear(image, a.size, a.size);
  AgseNet::CheckInputShape(input.shape());
  AgseNet model;
  LoadModelCheckpoint(model, a.ckpt);
  Tensor prob = ModelPredictor(model)(input);
  if (prob.dim(2) != image.dim(2) || prob.dim(3) != image.dim(3)) {
    prob = ResizeBilinear(prob, image.dim(2), image.dim(3));
  }
  SaveMaskPng(a.out, prob);
  if (!a.raw.empty()) SaveDepthRaw(a.raw, prob);
  if (!a.overlay.empty()) SaveImagePng(a.overlay, Overlay(image, prob, 0.5));
  out << "wrote " << a.out << "\n";
}

void RunSynth(const SynthArgs& a, std::ostream& out) {
  if (a.size < 16) throw UsageError("--size must be at least 16");
  const fs::path root(a.out);
  for (const char* sub : {"images", "masks", "depth"}) fs::create_directories(root / sub);
  Rng rng(a.seed);
  std::vector<ManifestRow> rows;
  for (int i = 0; i < a.count; ++i) {
    SceneSpec spec;
    spec.height = spec.width = a.size;
    spec.seed = rng.Fork();
    spec.n_puddles = a.puddles >= 0 ? a.puddles : 1 + static_cast<int>(rng.Below(3));
    const Sample s = SynthScene(spec);
    const std::string name = SampleName(static_cast<uint64_t>(i)) + ".png";
    ManifestRow row{fs::path("images") / name, fs::path("masks") / name,
                    fs::path("depth") / name};
    SaveImagePng(root / row.image, s.image);
    SaveMaskPng(root / row.mask, s.mask);
    SaveDepthPng(root / *row.depth, *s.depth);
    rows.push_back(std::move(row));
  }
  WriteManifest(root / "manifest.tsv", rows);
  out << "wrote " << a.count << " samples to " << root.string() << "\n";
}

void RunFog(const FogArgs& a, std::ostream& out) {
  FogParams fog;
  fog.beta = a.beta;
  fog.light = ParseLight(a.light);
  try {
    fog.Validate();
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }
  const fs::path root(a.out);
  fs::create_directories(root / "images");
  std::vector<ManifestRow> out_rows;
  for (const ManifestRow& row : ReadManifest(a.manifest)) {
    if (!row.depth) {
      throw IoError("fog needs a depth column in the manifest (row for " +
                    row.image.string() + ")");
    }
    const Sample s = LoadManifestRow(row);
    const fs::path dst = root / "images" / row.image.filename();
    if (fog.beta == 0.0) {
      // Transmission is 1 everywhere; the image passes through untouched.
      fs::copy_file(row.image, dst, fs::copy_options::overwrite_existing);
    } else {
      SaveImagePng(dst, SynthFog(s, fog).image);
    }
    out_rows.push_back({fs::path("images") / row.image.filename(), fs::absolute(row.mask),
                        fs::absolute(*row.depth)});
  }
  WriteManifest(root / "manifest.tsv", out_rows);
  out << "wrote " << out_rows.size() << " fogged images to " << root.string() << "\n";
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"AGSENet road-ponding segmentation", "agsenet"};
  app.require_subcommand(1);

  TrainArgs train;
  // The preset only changes defaults, so it has to be known before the
  // options below bind to them; explicit flags still override it.
  const bool desk = std::find_if(argv, argv + argc, [](const char* a) {
                      return std::string_view(a) == "--desk";
                    }) != argv + argc;
  if (desk) train.config = TrainConfig::Desk();
  CLI::App* train_cmd = app.add_subcommand("train", "Train a model on a manifest");
  train_cmd->add_option("--manifest", train.manifest, "Dataset manifest (TSV)")
      ->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--out", train.out, "Output directory for logs and checkpoints")
      ->required();
  train_cmd->add_option("--epochs", train.config.epochs, "Training epochs")
      ->capture_default_str()->check(CLI::PositiveNumber);
  train_cmd->add_option("--batch", train.config.batch_size, "Batch size")
      ->capture_default_str()->check(CLI::PositiveNumber);
  train_cmd->add_option("--lr", train.config.lr, "Learning rate")
      ->capture_default_str()->check(CLI::PositiveNumber);
  train_cmd->add_option("--wd", train.config.weight_decay, "Weight decay")
      ->capture_default_str()->check(CLI::NonNegativeNumber);
  train_cmd->add_option("--scale-lr-factor", train.config.loss_scale_lr_factor,
                        "Learning-rate factor for the loss weights gamma and delta")
      ->capture_default_str()->check(CLI::NonNegativeNumber);
  train_cmd->add_option("--momentum", train.config.momentum, "SGD momentum")
      ->capture_default_str()->check(CLI::Range(0.0, 0.999));
  train_cmd->add_option("--freeze-ssie", train.config.ssie_freeze_epochs,
                        "Epochs with SSIE parameters frozen")
      ->capture_default_str()->check(CLI::NonNegativeNumber);
  train_cmd->add_option("--size", train.config.train_size, "Square training resolution")
      ->capture_default_str();
  train_cmd->add_option("--seed", train.config.seed, "Random seed")->capture_default_str();
  train_cmd->add_option("--eval-every", train.config.eval_every,
                        "Checkpoint and validate every N epochs")
      ->capture_default_str()->check(CLI::PositiveNumber);
  train_cmd->add_flag("--desk", "Start from the 64x64 CPU schedule (300 epochs, lr 0.01, "
                      "momentum 0.9, loss-weight lr factor 0.0075, SSIE frozen 30 epochs)");
  bool no_augment = false;
  train_cmd->add_flag("--no-augment", no_augment, "Disable flip/brightness/saturation");

  EvalArgs eval;
  CLI::App* eval_cmd = app.add_subcommand("eval", "Evaluate a checkpoint or saved predictions");
  eval_cmd->add_option("--manifest", eval.manifest, "Dataset manifest (TSV)")
      ->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--ckpt", eval.ckpt, "Checkpoint directory")->check(CLI::ExistingDirectory);
  eval_cmd->add_option("--predictions", eval.predictions,
                       "Directory of <image stem>.png probability maps")
      ->check(CLI::ExistingDirectory);
  eval_cmd->add_flag("--raw", eval.raw, "Read <image stem>.f32 sidecars instead of PNGs");
  eval_cmd->add_option("--report", eval.report,
                       "Report path (table); key=value lines go to PATH.kv")
      ->required();
  eval_cmd->add_option("--threshold", eval.threshold, "Foreground threshold")
      ->capture_default_str();
  eval_cmd->add_option("--size", eval.size, "Resize samples to SIZE x SIZE first");

  InferArgs infer;
  CLI::App* infer_cmd = app.add_subcommand("infer", "Predict a probability map for one image");
  infer_cmd->add_option("--image", infer.image, "Input RGB PNG")
      ->required()->check(CLI::ExistingFile);
  infer_cmd->add_option("--ckpt", infer.ckpt, "Checkpoint directory")
      ->required()->check(CLI::ExistingDirectory);
  infer_cmd->add_option("--out", infer.out, "Output 8-bit probability PNG")->required();
  infer_cmd->add_option("--overlay", infer.overlay, "Optional color overlay PNG");
  infer_cmd->add_option("--raw", infer.raw, "Optional raw float32 probability sidecar");
  infer_cmd->add_option("--size", infer.size, "Run the model at SIZE x SIZE");

  SynthArgs synth;
  CLI::App* synth_cmd = app.add_subcommand("synth", "Generate synthetic puddle scenes");
  synth_cmd->add_option("--out", synth.out, "Output directory")->required();
  synth_cmd->add_option("--count", synth.count, "Number of scenes")
      ->required()->check(CLI::PositiveNumber);
  synth_cmd->add_option("--size", synth.size, "Square scene size")->capture_default_str();
  synth_cmd->add_option("--seed", synth.seed, "Random seed")->capture_default_str();
  synth_cmd->add_option("--puddles", synth.puddles,
                        "Puddles per scene (default: 1 to 3 at random)")
      ->check(CLI::NonNegativeNumber);

  FogArgs fog;
  CLI::App* fog_cmd = app.add_subcommand("fog", "Add synthetic fog using per-sample depth");
  fog_cmd->add_option("--manifest", fog.manifest, "Manifest with a depth column")
      ->required()->check(CLI::ExistingFile);
  fog_cmd->add_option("--beta", fog.beta, "Attenuation coefficient (1/m)")->required();
  fog_cmd->add_option("--light", fog.light, "Atmospheric light: L or R,G,B in [0,1]")
      ->capture_default_str();
  fog_cmd->add_option("--out", fog.out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*train_cmd) {
      train.config.augment = !no_augment;
      RunTrain(train, out);
    } else if (*eval_cmd) {
      RunEval(eval, out);
    } else if (*infer_cmd) {
      RunInfer(infer, out);
    } else if (*synth_cmd) {
      RunSynth(synth, out);
    } else if (*fog_cmd) {
      RunFog(fog, out);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const TrainingError& e) {
    err << "error: " << e.what() << " (step " << e.step() << ")\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace agsenet::cli
