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

#include "agsenet/trainer.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <ostream>

#include "agsenet/autograd.h"
#include "agsenet/checkpoint.h"
#include "agsenet/errors.h"
#include "agsenet/rng.h"

namespace agsenet {
namespace fs = std::filesystem;
namespace {

uint64_t EpochSeed(uint64_t seed, int epoch) {
  Rng rng(seed ^ (0xA24BAED4963EE407ull * static_cast<uint64_t>(epoch + 1)));
  return rng.Fork();
}

std::string EpochDirName(int epoch) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "epoch-%04d", epoch);
  return buf;
}

}  // namespace

TrainConfig TrainConfig::Desk() {
  TrainConfig c;
  c.epochs = 300;
  c.batch_size = 4;
  c.lr = 0.01;
  c.momentum = 0.9;
  c.loss_scale_lr_factor = 0.0075;
  c.ssie_freeze_epochs = 30;
  c.train_size = 64;
  c.eval_every = 30;
  return c;
}

void TrainConfig::Validate() const {
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  if (batch_size < 1) throw ConfigError("batch size must be >= 1");
  if (!(lr > 0.0) || !std::isfinite(lr)) throw ConfigError("learning rate must be > 0");
  if (!(weight_decay >= 0.0)) throw ConfigError("weight decay must be >= 0");
  if (ssie_freeze_epochs < 0 || ssie_freeze_epochs >= epochs) {
    throw ConfigError("SSIE freeze epochs must lie in [0, epochs), got " +
                      std::to_string(ssie_freeze_epochs) + " for " +
                      std::to_string(epochs) + " epochs");
  }
  if (!(momentum >= 0.0 && momentum < 1.0)) throw ConfigError("momentum must lie in [0,1)");
  if (!(loss_scale_lr_factor >= 0.0)) throw ConfigError("loss scale lr factor must be >= 0");
  if (eval_every < 1) throw ConfigError("eval_every must be >= 1");
  AgseNet::CheckInputShape({1, 3, train_size, train_size});
}

std::string FormatStepLog(const StepLog& e) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%d %lld %.6f %.6f %.6f", e.epoch,
                static_cast<long long>(e.step), e.loss, e.gamma, e.delta);
  return buf;
}

MetricsReport Evaluate(const Predictor& predictor, const std::vector<Sample>& dataset,
                       double threshold) {
  if (dataset.empty()) throw ConfigError("evaluation dataset is empty");
  ConfusionCounts total;
  int64_t undefined = 0;
  for (const Sample& s : dataset) {
    const Tensor pred = predictor(s.image);
    const ConfusionCounts c = Confusion(pred, s.mask, threshold);
    if (!NormalizedPixelAccuracy(c)) ++undefined;
    total += c;
  }
  MetricsReport report = MakeReport(total);
  report.images = static_cast<int64_t>(dataset.size());
  report.npa_undefined_images = undefined;
  return report;
}

Predictor ModelPredictor(const AgseNet& model) {
  return [&model](const Tensor& image) {
    NoGradGuard guard;
    return model.Forward(image, /*training=*/false).fused;
  };
}

Trainer::Trainer(const TrainConfig& config, const ModelConfig& model_config)
    : config_(config), model_(model_config, config.seed), scales_(loss_store_) {
  config_.Validate();
  all_.Merge(model_.params());
  model_entries_ = all_.size();
  all_.Merge(loss_store_);
  if (config_.momentum > 0.0) {
    for (const Param& p : all_.entries()) {
      velocity_.push_back(p.trainable() ? Tensor(p.value.shape(), 0.0f) : Tensor());
    }
  }
}

void Trainer::BeginEpoch(int epoch) { model_.FreezeSsie(epoch < config_.ssie_freeze_epochs); }

std::vector<Batch> Trainer::EpochBatches(const std::vector<Sample>& train, int epoch) const {
  Rng rng(EpochSeed(config_.seed, epoch));
  std::vector<size_t> order(train.size());
  std::iota(order.begin(), order.end(), size_t{0});
  // Fisher-Yates with the portable Below().
  for (size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[rng.Below(i)]);
  }
  AugmentConfig aug;
  aug.out_height = aug.out_width = config_.train_size;
  std::vector<Sample> prepared;
  prepared.reserve(train.size());
  for (size_t idx : order) {
    const uint64_t sample_seed = rng.Fork();
    const Sample& s = train[idx];
    if (config_.augment) {
      prepared.push_back(Augment(s, sample_seed, aug));
    } else if (s.height() != config_.train_size || s.width() != config_.train_size) {
      prepared.push_back(ResizeSample(s, config_.train_size, config_.train_size));
    } else {
      prepared.push_back(s);
    }
  }
  std::vector<Batch> batches;
  for (size_t i = 0; i < prepared.size(); i += static_cast<size_t>(config_.batch_size)) {
    std::vector<const Sample*> group;
    for (size_t j = i; j < std::min(prepared.size(), i + config_.batch_size); ++j) {
      group.push_back(&prepared[j]);
    }
    batches.push_back(MakeBatch(group));
  }
  return batches;
}

void Trainer::Update() {
  const float wd = static_cast<float>(config_.weight_decay);
  const float mu = static_cast<float>(config_.momentum);
  const auto& entries = all_.entries();
  for (size_t i = 0; i < entries.size(); ++i) {
    const Param& p = entries[i];
    if (!p.trainable() || !p.value.requires_grad()) continue;
    const float lr = static_cast<float>(
        i < model_entries_ ? config_.lr : config_.lr * config_.loss_scale_lr_factor);
    Tensor value = p.value;
    std::span<float> w = value.data();
    std::span<const float> g = value.grad();
    if (mu > 0.0f) {
      std::span<float> v = velocity_[i].data();
      for (size_t k = 0; k < w.size(); ++k) {
        v[k] = mu * v[k] + g[k] + wd * w[k];
        w[k] -= lr * v[k];
      }
    } else {
      for (size_t k = 0; k < w.size(); ++k) w[k] -= lr * (g[k] + wd * w[k]);
    }
  }
}

StepLog Trainer::Step(const Batch& batch, int epoch) {
  all_.ZeroGrad();
  const SaliencyOutputs out = model_.Forward(batch.images, /*training=*/true);
  LossBreakdown loss = TotalLoss(out, batch.masks, scales_);
  const double value = loss.total.item();
  if (!std::isfinite(value)) {
    throw TrainingError("non-finite loss at epoch " + std::to_string(epoch) + ", step " +
                            std::to_string(step_),
                        step_);
  }
  Backward(loss.total);
  Update();
  StepLog entry{epoch, step_, value, scales_.gamma().item(), scales_.delta().item()};
  ++step_;
  return entry;
}

std::vector<StepLog> Trainer::Train(const std::vector<Sample>& train,
                                    const std::vector<Sample>& val, std::ostream* log) {
  if (train.empty()) throw ConfigError("training dataset is empty");
  std::vector<StepLog> history;
  for (int epoch = 0; epoch < config_.epochs; ++epoch) {
    BeginEpoch(epoch);
    for (const Batch& batch : EpochBatches(train, epoch)) {
      history.push_back(Step(batch, epoch));
      const StepLog& entry = history.back();
      if (log == nullptr) continue;
      *log << FormatStepLog(entry) << '\n';
      if (!warned_negative_ && (entry.gamma < 0.0 || entry.delta < 0.0)) {
        warned_negative_ = true;
        *log << "# warning: loss weight turned negative at step " << entry.step << '\n';
      }
    }
    const bool last = epoch + 1 == config_.epochs;
    if (config_.checkpoint_dir.empty() || (!last && (epoch + 1) % config_.eval_every != 0)) {
      continue;
    }
    const fs::path dir = config_.checkpoint_dir / EpochDirName(epoch + 1);
    SaveCheckpoint(all_, dir);
    if (!val.empty()) {
      const MetricsReport report = Evaluate(ModelPredictor(model_), val);
      std::ofstream(dir / "metrics.txt") << FormatReportKeyValue(report);
    }
    if (last) SaveCheckpoint(all_, config_.checkpoint_dir / "final");
  }
  model_.FreezeSsie(false);
  return history;
}

void LoadModelCheckpoint(AgseNet& model, const fs::path& dir) {
  ParamStore loss_store;
  LossScales scales(loss_store);
  ParamStore all;
  all.Merge(model.params());
  all.Merge(loss_store);
  LoadCheckpoint(all, dir);
}

}  // namespace agsenet
