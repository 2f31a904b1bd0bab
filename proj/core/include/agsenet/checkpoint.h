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

#ifndef AGSENET_CHECKPOINT_H_
#define AGSENET_CHECKPOINT_H_

#include <filesystem>
#include <string>
#include <vector>

#include "agsenet/params.h"

namespace agsenet {

// On-disk layout: `<dir>/manifest.txt` with one line per tensor,
//   <name> <dim0> <dim1> ... dtype=f32
// in registry order, and one raw little-endian float32 blob per tensor named
// SanitizeTensorName(name) + ".f32".
std::string SanitizeTensorName(const std::string& name);

struct ManifestEntry {
  std::string name;
  Shape shape;
};

void SaveCheckpoint(const ParamStore& store, const std::filesystem::path& dir);

// Reads every tensor of `store` from `dir` into the existing storage. Names
// and shapes must match; tensors in the checkpoint that the store does not
// know are rejected.
void LoadCheckpoint(ParamStore& store, const std::filesystem::path& dir);

std::vector<ManifestEntry> ReadCheckpointManifest(const std::filesystem::path& dir);

}  // namespace agsenet

#endif  // AGSENET_CHECKPOINT_H_
