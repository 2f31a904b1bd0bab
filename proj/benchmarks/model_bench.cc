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

#include <benchmark/benchmark.h>

#include "agsenet/autograd.h"
#include "agsenet/data.h"
#include "agsenet/loss.h"
#include "agsenet/model.h"
#include "agsenet/synth.h"

namespace agsenet {
namespace {

// Arg: spatial side of the (square) input.
void BM_ModelInference(benchmark::State& state) {
  const int64_t side = state.range(0);
  AgseNet model;
  Sample scene = SynthScene({.height = side, .width = side, .seed = 1});
  NoGradGuard guard;
  for (auto _ : state) {
    SaliencyOutputs out = model.Forward(scene.image, false);
    benchmark::DoNotOptimize(out.fused.data().data());
  }
}
BENCHMARK(BM_ModelInference)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_BaselineInference(benchmark::State& state) {
  AgseNet model(ModelConfig::Baseline());
  Sample scene = SynthScene({.height = 64, .width = 64, .seed = 1});
  NoGradGuard guard;
  for (auto _ : state) {
    SaliencyOutputs out = model.Forward(scene.image, false);
    benchmark::DoNotOptimize(out.fused.data().data());
  }
}
BENCHMARK(BM_BaselineInference)->Unit(benchmark::kMillisecond);

// Forward, seven-term loss and backward on a batch of `range(0)` 64x64 scenes.
void BM_TrainingStep(benchmark::State& state) {
  const int64_t n = state.range(0);
  AgseNet model;
  LossScales scales(model.params());
  std::vector<Sample> scenes;
  std::vector<const Sample*> ptrs;
  for (int64_t i = 0; i < n; ++i) scenes.push_back(SynthScene({.seed = static_cast<uint64_t>(i)}));
  for (const Sample& s : scenes) ptrs.push_back(&s);
  Batch batch = MakeBatch(ptrs);
  for (auto _ : state) {
    LossBreakdown loss = TotalLoss(model.Forward(batch.images, true), batch.masks, scales);
    Backward(loss.total);
    for (const Param& p : model.params().entries()) {
      Tensor v = p.value;
      v.ClearGrad();
    }
  }
}
BENCHMARK(BM_TrainingStep)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace agsenet
