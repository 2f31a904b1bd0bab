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

#ifndef AGSENET_RNG_H_
#define AGSENET_RNG_H_

#include <cstdint>
#include <random>

namespace agsenet {

// Seeded generator with platform-independent draws: mt19937_64 is fully
// specified by the standard, and the conversions below avoid the
// implementation-defined std::*_distribution algorithms.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double Uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform01(); }

  // Uniform integer in [0, n).
  uint64_t Below(uint64_t n) {
    return n == 0 ? 0 : static_cast<uint64_t>(Uniform01() * static_cast<double>(n)) % n;
  }

  bool Bernoulli(double p) { return Uniform01() < p; }

  // Derives an independent child seed (splitmix64 of the next draw).
  uint64_t Fork() {
    uint64_t z = engine_() + 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace agsenet

#endif  // AGSENET_RNG_H_
