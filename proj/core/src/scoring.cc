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

#include "driftood/scoring.h"

#include <algorithm>
#include <limits>

#include "driftood/error.h"

namespace driftood {
namespace {

double NegMinKl(const SimplexVector& p, std::span<const SimplexVector> prototypes) {
  if (prototypes.empty()) {
    throw Error(ErrorCode::kMissingPrototypes, "empty prototype set");
  }
  double best = std::numeric_limits<double>::infinity();
  for (const auto& mu : prototypes) best = std::min(best, KlDivergence(p, mu));
  return -best;
}

}  // namespace

FusionParams DefaultFusionParams(Method method) {
  FusionParams params;
  if (method == Method::kDualPattern) {
    params.gamma_cap = 0.0;
    params.eta_override = 0.0;
  }
  return params;
}

double ScoreSemantic(std::span<const double> logits, double temperature) {
  if (logits.empty()) throw Error(ErrorCode::kEmptyInput, "no logits");
  return *std::max_element(logits.begin(), logits.end()) / temperature;
}

double ScoreVisual(const SimplexVector& p, std::span<const SimplexVector> prototypes) {
  return NegMinKl(p, prototypes);
}

double ScoreCaptionText(const UnitVector& caption, const TextBank& bank) {
  if (caption.dim() != bank.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "caption and text bank dims differ");
  }
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& t : bank.rows()) best = std::max(best, Dot(caption.values(), t.values()));
  return best;
}

double ScoreCaptionVisual(const UnitVector& caption, const TextBank& bank,
                          std::span<const SimplexVector> prototypes, double temperature) {
  if (caption.dim() != bank.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "caption and text bank dims differ");
  }
  std::vector<double> z(bank.num_classes());
  for (std::size_t k = 0; k < z.size(); ++k) z[k] = Dot(caption.values(), bank.row(k).values());
  return NegMinKl(TempSoftmax(z, temperature), prototypes);
}

double FusedScore(const CrossModalScores& s, const FusionParams& params) {
  return s.s_id + params.beta() * s.s_vis - params.gamma_cap * s.s_cap_t -
         params.eta() * s.s_cap_v;
}

ScoreQuadruple Fuse(const CrossModalScores& s, const FusionParams& params) {
  return {s.s_id, s.s_vis, s.s_cap_t, s.s_cap_v, FusedScore(s, params)};
}

CrossModalScores ScoreView(const PatchEmbedding& view, const UnitVector& caption,
                           const TextBank& bank,
                           std::span<const SimplexVector> prototypes,
                           const VisualPatternConfig& cfg) {
  if (prototypes.size() != bank.num_classes()) {
    throw Error(ErrorCode::kMissingPrototypes, "prototype count differs from class count");
  }
  const auto logits = IdLogits(view, bank, cfg);
  CrossModalScores s;
  s.s_id = ScoreSemantic(logits, cfg.temperature);
  s.s_vis = ScoreVisual(TempSoftmax(logits, cfg.temperature), prototypes);
  s.s_cap_t = ScoreCaptionText(caption, bank);
  s.s_cap_v = ScoreCaptionVisual(caption, bank, prototypes, cfg.temperature);
  return s;
}

ScoreQuadruple ScoreSample(const Sample& sample, const TextBank& bank,
                           const PrototypeBank& prototypes, const FusionParams& params,
                           const VisualPatternConfig& cfg) {
  const auto& mu = prototypes.At(sample.timestep);
  return Fuse(ScoreView(sample.view, sample.caption, bank, mu, cfg), params);
}

}  // namespace driftood
