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

#ifndef DRIFTOOD_SCORING_H_
#define DRIFTOOD_SCORING_H_

#include <optional>
#include <span>
#include <vector>

#include "driftood/numerics.h"
#include "driftood/text_bank.h"
#include "driftood/visual_patterns.h"

namespace driftood {

// Fusion weights. beta and eta are trained through their raw values and
// reach the score as softplus(raw), which keeps them strictly positive. An
// override pins the effective weight to a fixed value (including 0) and
// freezes that parameter; this is how the dual-pattern ablation and the
// hyperparameter sweeps are expressed.
struct FusionParams {
  double beta_raw = 1.0;
  double eta_raw = 0.5;
  double gamma_cap = 0.1;
  std::optional<double> beta_override;
  std::optional<double> eta_override;

  double beta() const { return beta_override ? *beta_override : Softplus(beta_raw); }
  double eta() const { return eta_override ? *eta_override : Softplus(eta_raw); }

  // d beta / d beta_raw; zero when pinned.
  double beta_slope() const { return beta_override ? 0.0 : Sigmoid(beta_raw); }
  double eta_slope() const { return eta_override ? 0.0 : Sigmoid(eta_raw); }

  bool operator==(const FusionParams&) const = default;
};

enum class Method { kQuadruple, kDualPattern };

// Default parameters for each method. The dual-pattern baseline is the same
// pipeline with both caption terms removed (gamma_cap = 0, eta pinned to 0).
FusionParams DefaultFusionParams(Method method);

// The four unfused scores of one view.
struct CrossModalScores {
  double s_id = 0.0;
  double s_vis = 0.0;
  double s_cap_t = 0.0;
  double s_cap_v = 0.0;
};

struct ScoreQuadruple {
  double s_id = 0.0;
  double s_vis = 0.0;
  double s_cap_t = 0.0;
  double s_cap_v = 0.0;
  double s_fused = 0.0;

  CrossModalScores parts() const { return {s_id, s_vis, s_cap_t, s_cap_v}; }
};

// max_k logits[k] / T.
double ScoreSemantic(std::span<const double> logits, double temperature);

// -min_k KL(p || mu_k). Throws kMissingPrototypes when `prototypes` is empty.
double ScoreVisual(const SimplexVector& p, std::span<const SimplexVector> prototypes);

// max_k <q_c, t_k>.
double ScoreCaptionText(const UnitVector& caption, const TextBank& bank);

// -min_k KL(softmax(<q_c, t>/T) || mu_k).
double ScoreCaptionVisual(const UnitVector& caption, const TextBank& bank,
                          std::span<const SimplexVector> prototypes, double temperature);

double FusedScore(const CrossModalScores& s, const FusionParams& params);
ScoreQuadruple Fuse(const CrossModalScores& s, const FusionParams& params);

// Unfused scores of one image view with its caption; the caption embedding
// is shared by both caption scores.
CrossModalScores ScoreView(const PatchEmbedding& view, const UnitVector& caption,
                           const TextBank& bank,
                           std::span<const SimplexVector> prototypes,
                           const VisualPatternConfig& cfg);

// End-to-end scoring of a sample's primary view against the prototypes for
// its timestep.
ScoreQuadruple ScoreSample(const Sample& sample, const TextBank& bank,
                           const PrototypeBank& prototypes, const FusionParams& params,
                           const VisualPatternConfig& cfg);

}  // namespace driftood

#endif  // DRIFTOOD_SCORING_H_
