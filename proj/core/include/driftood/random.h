// Copyright 2026 The driftood Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DRIFTOOD_RANDOM_H_
#define DRIFTOOD_RANDOM_H_

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <vector>

namespace driftood {

// Seeded generator whose output is identical on every platform: the engine
// is std::mt19937_64 (fully specified by the standard) and all derived
// distributions are implemented here instead of relying on the
// implementation-defined std:: distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t NextU64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double Uniform01();

  // Uniform integer in [0, n). n must be positive.
  std::uint64_t UniformIndex(std::uint64_t n);

  // Standard normal via Box-Muller.
  double Normal();

  // Gamma(shape, 1), Marsaglia-Tsang.
  double Gamma(double shape);

  // Fisher-Yates shuffle of [0, n).
  std::vector<std::size_t> Permutation(std::size_t n);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Mixes a base seed with stream identifiers (timestep, epoch, trial, ...) so
// that independent streams never share a state sequence.
std::uint64_t DeriveSeed(std::uint64_t base, std::initializer_list<std::uint64_t> stream);

}  // namespace driftood

#endif  // DRIFTOOD_RANDOM_H_
