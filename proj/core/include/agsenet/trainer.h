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

#ifndef AGSENET_TRAINER_H_
#define AGSENET_TRAINER_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <vector>

#include "agsenet/data.h"
#include "agsenet/loss.h"
#include "agsenet/metrics.h"
#include "agsenet/model.h"

namespace agsenet {

struct TrainConfig {
  int epochs = 500;
  int batch_size = 4;
  double lr = 1e-3;
  double weight_decay = 5e-4;
  int ssie_freeze_epochs = 50;
  double momentum = 0.0;
  // Multiplies the learning rate of the hybrid-loss weights gamma and delta.
  double loss_scale_lr_factor = 1.0;
  uint64_t seed = 0;
  // Square training resolution; must satisfy the model input precondition.
  int64_t train_size = 320;
  // Empty: no checkpoints are written.
  std::filesystem::path checkpoint_dir;
  // Checkpoint and validate every this many epochs (and after the last one).
  int eval_every = 10;
  bool augment = true;

  // 64x64 synthetic-scene schedule for CPU runs: 300 epochs, SSIE frozen for
  // the first 30, SGD with momentum 0.9 at lr 0.01 and loss weights updated
  // at 0.0075 of that rate. Delta always descends (its gradient is the summed
  // Dice loss), and faster rates drive it negative before the last epoch.
  static TrainConfig Desk();

  void Validate() const;
};

struct StepLog {
  int epoch = 0;
  int64_t step = 0;
  double loss = 0.0;
  double gamma = 0.0;
  double delta = 0.0;
};

// Formats `epoch step loss gamma delta`.
std::string FormatStepLog(const StepLog& entry);

// Returns the fused probability map [N,1,H,W] for an image batch.
using Predictor = std::function<Tensor(const Tensor&)>;

// Accumulates confusion counts over the dataset one image at a time.
MetricsReport Evaluate(const Predictor& predictor, const std::vector<Sample>& dataset,
                       double threshold = 0.5);

// Inference-mode predictor (running batch statistics, no gradient tape).
Predictor ModelPredictor(const AgseNet& model);

class Trainer {
 public:
  explicit Trainer(const TrainConfig& config,
                   const ModelConfig& model_config = ModelConfig::Default());

  // Runs the full schedule. Each step logs one line to `log` if non-null;
  // a warning line starting with '#' is added the first time gamma or delta
  // turns negative. Throws TrainingError if the loss becomes non-finite.
  std::vector<StepLog> Train(const std::vector<Sample>& train,
                             const std::vector<Sample>& val, std::ostream* log = nullptr);

  // One forward/backward/update on a prepared batch.
  StepLog Step(const Batch& batch, int epoch);

  // Applies the freeze schedule for the given epoch.
  void BeginEpoch(int epoch);

  // Batches of one epoch in their deterministic order, after augmentation.
  std::vector<Batch> EpochBatches(const std::vector<Sample>& train, int epoch) const;

  AgseNet& model() { return model_; }
  const LossScales& loss_scales() const { return scales_; }
  // Model parameters followed by the loss weights; what checkpoints hold.
  ParamStore& checkpoint_params() { return all_; }
  const TrainConfig& config() const { return config_; }
  int64_t steps_taken() const { return step_; }

 private:
  void Update();

  TrainConfig config_;
  AgseNet model_;
  ParamStore loss_store_;
  LossScales scales_;
  ParamStore all_;
  size_t model_entries_ = 0;      // all_ holds these first, then the loss weights
  std::vector<Tensor> velocity_;  // parallel to all_.entries(), momentum > 0
  int64_t step_ = 0;
  bool warned_negative_ = false;
};

// Loads a trainer checkpoint (model weights plus loss weights) into `model`.
void LoadModelCheckpoint(AgseNet& model, const std::filesystem::path& dir);

}  // namespace agsenet

#endif  // AGSENET_TRAINER_H_
