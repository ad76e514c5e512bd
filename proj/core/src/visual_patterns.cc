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

#include "driftood/visual_patterns.h"

#include <cmath>
#include <limits>
#include <string>

#include "driftood/error.h"
#include "driftood/parallel.h"

namespace driftood {

std::vector<double> ClassAttention(std::span<const double> patches,
                                   std::size_t num_patches,
                                   const UnitVector& class_text) {
  const std::size_t d = class_text.dim();
  if (num_patches == 0 || patches.size() != num_patches * d) {
    throw Error(ErrorCode::kDimensionMismatch, "patch matrix does not match N x d");
  }
  std::vector<double> cos(num_patches);
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < num_patches; ++i) {
    const auto row = patches.subspan(i * d, d);
    const double norm = L2Norm(row);
    // t_k is unit-norm, so only the patch norm divides.
    cos[i] = norm < kMinNorm ? 0.0 : Dot(row, class_text.values()) / norm;
    if (!std::isfinite(cos[i])) {
      throw Error(ErrorCode::kNonFinite, "non-finite patch row");
    }
    m = std::max(m, cos[i]);
  }
  double sum = 0.0;
  for (double& c : cos) {
    c = std::exp(c - m);
    sum += c;
  }
  for (double& c : cos) c /= sum;
  return cos;
}

std::vector<double> IdLogits(const PatchEmbedding& view, const TextBank& bank,
                             const VisualPatternConfig& cfg) {
  const std::size_t d = bank.dim();
  if (view.global.dim() != d) {
    throw Error(ErrorCode::kDimensionMismatch,
                "image embedding dim " + std::to_string(view.global.dim()) +
                    " vs text bank dim " + std::to_string(d));
  }
  std::vector<double> logits(bank.num_classes());
  for (std::size_t k = 0; k < bank.num_classes(); ++k) {
    const UnitVector& t = bank.row(k);
    double z = Dot(view.global.values(), t.values());
    if (view.has_patches()) {
      const auto attn = ClassAttention(view.patches, view.num_patches, t);
      // (A^T F_s) . t = sum_i A_i (F_s[i] . t)
      double spatial = 0.0;
      for (std::size_t i = 0; i < view.num_patches; ++i) {
        spatial += attn[i] * Dot(view.patch(i), t.values());
      }
      z += cfg.gamma * spatial;
    }
    logits[k] = z;
  }
  return logits;
}

SimplexVector IdProbs(const PatchEmbedding& view, const TextBank& bank,
                      const VisualPatternConfig& cfg) {
  return TempSoftmax(IdLogits(view, bank, cfg), cfg.temperature);
}

std::vector<SimplexVector> BuildPrototypes(std::span<const Sample> train,
                                           const TextBank& bank,
                                           const VisualPatternConfig& cfg,
                                           int threads) {
  const std::size_t k = bank.num_classes();
  for (const auto& s : train) {
    if (s.is_id() && static_cast<std::size_t>(s.label) >= k) {
      throw Error(ErrorCode::kLabelOutOfRange,
                  "label " + std::to_string(s.label) + " outside [0, " +
                      std::to_string(k) + ")");
    }
  }
  std::vector<std::optional<SimplexVector>> probs(train.size());
  ParallelFor(train.size(), threads, [&](std::size_t i) {
    if (train[i].is_id()) probs[i] = IdProbs(train[i].view, bank, cfg);
  });

  std::vector<std::vector<double>> sums(k, std::vector<double>(k, 0.0));
  std::vector<std::size_t> counts(k, 0);
  for (std::size_t i = 0; i < train.size(); ++i) {
    if (!probs[i]) continue;
    const auto c = static_cast<std::size_t>(train[i].label);
    for (std::size_t j = 0; j < k; ++j) sums[c][j] += (*probs[i])[j];
    ++counts[c];
  }
  const std::uint32_t t = train.empty() ? 0 : train.front().timestep;
  std::vector<SimplexVector> out;
  out.reserve(k);
  for (std::size_t c = 0; c < k; ++c) {
    if (counts[c] == 0) {
      throw Error(ErrorCode::kEmptyClass, "class " + std::to_string(c) +
                                              " has no training sample at timestep " +
                                              std::to_string(t));
    }
    for (double& x : sums[c]) x /= static_cast<double>(counts[c]);
    out.push_back(SimplexVector::FromWeights(sums[c]));
  }
  return out;
}

void PrototypeBank::Add(std::uint32_t timestep, std::vector<SimplexVector> prototypes) {
  if (by_timestep_.contains(timestep)) {
    throw Error(ErrorCode::kInvalidConfig,
                "prototypes for timestep " + std::to_string(timestep) + " already built");
  }
  by_timestep_.emplace(timestep, std::move(prototypes));
}

const std::vector<SimplexVector>& PrototypeBank::At(std::uint32_t timestep) const {
  auto it = by_timestep_.find(timestep);
  if (it == by_timestep_.end()) {
    throw Error(ErrorCode::kMissingPrototypes,
                "no prototypes for timestep " + std::to_string(timestep));
  }
  return it->second;
}

}  // namespace driftood
