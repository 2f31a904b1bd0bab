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

#ifndef AGSENET_ERRORS_H_
#define AGSENET_ERRORS_H_

#include <stdexcept>
#include <string>

namespace agsenet {

// Tensor shapes that do not line up for an operation.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Structurally invalid configuration: input too small for a block depth,
// indivisible spatial size, non-positive output extent, bad hyperparameter.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Autograd misuse, e.g. a second backward pass over a consumed graph.
class GradError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// File-level failures: missing files, corrupt PNGs, manifest errors.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Training diverged or otherwise could not continue.
class TrainingError : public std::runtime_error {
 public:
  TrainingError(const std::string& what, long long step)
      : std::runtime_error(what), step_(step) {}
  long long step() const { return step_; }

 private:
  long long step_;
};

}  // namespace agsenet

#endif  // AGSENET_ERRORS_H_
