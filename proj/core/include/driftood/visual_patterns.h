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

#ifndef DRIFTOOD_VISUAL_PATTERNS_H_
#define DRIFTOOD_VISUAL_PATTERNS_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "driftood/numerics.h"
#include "driftood/text_bank.h"

namespace driftood {

// One image view: the global token plus an optional N x d patch matrix
// stored row-major. Without patches the class-attended term is skipped.
struct PatchEmbedding {
  UnitVector global;
  std::vector<double> patches;
  std::size_t num_patches = 0;

  bool has_patches() const { return num_patches > 0; }
  std::span<const double> patch(std::size_t i) const {
    return std::span<const double>(patches).subspan(i * global.dim(), global.dim());
  }
};

inline constexpr int kOodLabel = -1;

// A record after normalization, ready for scoring.
struct Sample {
  std::uint32_t timestep = 0;
  int label = kOodLabel;
  PatchEmbedding view;
  UnitVector caption;
  // Covariate-shifted view; present for ID records only.
  std::optional<PatchEmbedding> shifted;
  std::uint64_t pair_id = 0;

  bool is_id() const { return label >= 0; }
};

struct VisualPatternConfig {
  double gamma = 0.2;        // weight of the class-attended spatial feature
  double temperature = 1.0;  // softmax temperature T
};

// Softmax over the cosine similarities between each patch row and t_k.
// Zero-norm patch rows get cosine 0.
std::vector<double> ClassAttention(std::span<const double> patches,
                                   std::size_t num_patches,
                                   const UnitVector& class_text);

// z[k] = (gamma * A_k^T F_s + F_v) . t_k, or F_v . t_k without patches.
std::vector<double> IdLogits(const PatchEmbedding& view, const TextBank& bank,
                             const VisualPatternConfig& cfg);

SimplexVector IdProbs(const PatchEmbedding& view, const TextBank& bank,
                      const VisualPatternConfig& cfg);

// Per-class mean of p(x) over the ID samples in `train`; OOD records are
// ignored. Every class must be present. The reduction runs in sample order
// after a parallel map, so the result is independent of `threads`.
std::vector<SimplexVector> BuildPrototypes(std::span<const Sample> train,
                                           const TextBank& bank,
                                           const VisualPatternConfig& cfg,
                                           int threads = 1);

// Per-timestep prototype sets. Timesteps are write-once.
class PrototypeBank {
 public:
  void Add(std::uint32_t timestep, std::vector<SimplexVector> prototypes);
  const std::vector<SimplexVector>& At(std::uint32_t timestep) const;
  bool Contains(std::uint32_t timestep) const { return by_timestep_.contains(timestep); }
  const std::map<std::uint32_t, std::vector<SimplexVector>>& all() const {
    return by_timestep_;
  }

 private:
  std::map<std::uint32_t, std::vector<SimplexVector>> by_timestep_;
};

}  // namespace driftood

#endif  // DRIFTOOD_VISUAL_PATTERNS_H_
