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

#include "agsenet/params.h"

#include <utility>

#include "agsenet/errors.h"

namespace agsenet {

Tensor ParamStore::Add(std::string name, Tensor value, ParamKind kind,
                       std::string init) {
  if (index_.count(name) != 0) {
    throw ConfigError("duplicate parameter name '" + name + "'");
  }
  value.set_requires_grad(kind == ParamKind::kTrainable);
  index_.emplace(name, entries_.size());
  entries_.push_back(Param{std::move(name), value, kind, std::move(init), false});
  return value;
}

void ParamStore::Merge(const ParamStore& other) {
  for (const Param& p : other.entries_) {
    if (index_.count(p.name) != 0) {
      throw ConfigError("duplicate parameter name '" + p.name + "' in merge");
    }
    index_.emplace(p.name, entries_.size());
    entries_.push_back(p);
  }
}

bool ParamStore::Contains(std::string_view name) const {
  return index_.count(std::string(name)) != 0;
}

const Param& ParamStore::Get(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) {
    throw ConfigError("unknown parameter '" + std::string(name) + "'");
  }
  return entries_[it->second];
}

Param& ParamStore::GetMutable(std::string_view name) {
  return const_cast<Param&>(Get(name));
}

std::vector<const Param*> ParamStore::WithPrefix(std::string_view prefix) const {
  std::vector<const Param*> out;
  for (const Param& p : entries_) {
    if (std::string_view(p.name).substr(0, prefix.size()) == prefix) {
      out.push_back(&p);
    }
  }
  return out;
}

void ParamStore::SetFrozen(std::string_view prefix, bool frozen) {
  for (const Param* p : WithPrefix(prefix)) {
    Param& m = GetMutable(p->name);
    if (!m.trainable()) continue;
    m.frozen = frozen;
    m.value.set_requires_grad(!frozen);
    if (frozen) m.value.ClearGrad();
  }
}

void ParamStore::ZeroGrad() {
  for (Param& p : entries_) p.value.ZeroGrad();
}

int64_t CountParameters(const ParamStore& store) {
  int64_t total = 0;
  for (const Param& p : store.entries()) {
    if (p.trainable()) total += p.value.numel();
  }
  return total;
}

}  // namespace agsenet
