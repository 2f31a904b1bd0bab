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

#ifndef AGSENET_PARAMS_H_
#define AGSENET_PARAMS_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "agsenet/tensor.h"

namespace agsenet {

enum class ParamKind {
  kTrainable,  // updated by the optimizer
  kBuffer,     // state such as batchnorm running statistics
};

struct Param {
  std::string name;
  Tensor value;
  ParamKind kind = ParamKind::kTrainable;
  // Initializer description, e.g. "kaiming_uniform(fan_in=27)".
  std::string init;
  bool frozen = false;

  bool trainable() const { return kind == ParamKind::kTrainable; }
};

// Insertion-ordered registry of named parameters. Entries hold tensor
// handles, so copying a store aliases the same storage.
class ParamStore {
 public:
  // Registers `value` under a unique name and returns the stored handle.
  Tensor Add(std::string name, Tensor value, ParamKind kind, std::string init);

  // Adds every entry of `other` (names must not collide).
  void Merge(const ParamStore& other);

  bool Contains(std::string_view name) const;
  const Param& Get(std::string_view name) const;
  Tensor Value(std::string_view name) const { return Get(name).value; }

  const std::vector<Param>& entries() const { return entries_; }
  size_t size() const { return entries_.size(); }

  // Entries whose name starts with `prefix`.
  std::vector<const Param*> WithPrefix(std::string_view prefix) const;

  // Freezing turns off requires_grad, so backward leaves no gradient and the
  // optimizer skips the entry.
  void SetFrozen(std::string_view prefix, bool frozen);
  bool IsFrozen(std::string_view name) const { return Get(name).frozen; }

  void ZeroGrad();

 private:
  Param& GetMutable(std::string_view name);

  std::vector<Param> entries_;
  std::unordered_map<std::string, size_t> index_;
};

// Number of trainable scalars in the store (frozen entries included).
int64_t CountParameters(const ParamStore& store);

}  // namespace agsenet

#endif  // AGSENET_PARAMS_H_
