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

#ifndef DRIFTOOD_TRAINING_H_
#define DRIFTOOD_TRAINING_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "driftood/scoring.h"

namespace driftood {

struct TrainConfig {
  double lr = 3e-3;
  int epochs = 5;
  int batch_size = 64;
  double lambda_cov = 0.5;
  double lambda_temp = 1.0;
  double kappa = 0.1;
  double delta_q = 0.01;
  std::uint64_t seed = 1556;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;

  // Throws kInvalidConfig on out-of-range fields.
  void Validate() const;
};

// The detection threshold. Created once by CalibrateThreshold (or restored
// from a saved run) and never modified afterwards.
class ThresholdState {
 public:
  static ThresholdState Restore(double delta, std::uint32_t calibrated_at);

  double delta() const { return delta_; }
  std::uint32_t calibrated_at() const { return calibrated_at_; }

  bool operator==(const ThresholdState&) const = default;

 private:
  ThresholdState(double delta, std::uint32_t calibrated_at)
      : delta_(delta), calibrated_at_(calibrated_at) {}

  double delta_;
  std::uint32_t calibrated_at_;
};

// delta = lower nearest-rank delta_q quantile of the calibration scores.
ThresholdState CalibrateThreshold(std::span<const double> id_scores, double delta_q,
                                  std::uint32_t timestep = 0);

// Previous timestep's final soft-ATC values; empty before the first
// timestep has finished.
struct AtcState {
  std::optional<double> prev_clean;
  std::optional<double> prev_shift;

  bool has_previous() const { return prev_clean.has_value() && prev_shift.has_value(); }
};

struct LossBreakdown {
  double l_id = 0.0;
  double l_cov = 0.0;
  double l_temp = 0.0;
  double l_total = 0.0;
};

// l_total = l_id + lambda_cov * l_cov + lambda_temp * l_temp.
LossBreakdown ComposeLoss(double l_id, double l_cov, double l_temp, const TrainConfig& cfg);

// Mean cross-entropy (nats) of softmax(logits / T) against the label,
// averaged over the clean and shifted views.
double LossId(std::span<const std::vector<double>> clean_logits,
              std::span<const std::vector<double>> shifted_logits,
              std::span<const int> labels, double temperature);

// mean |S(x) - S(x~)| over index-paired fused scores.
double LossCov(std::span<const double> fused_clean, std::span<const double> fused_shift);

// mean sigmoid((delta - S) / kappa): soft fraction of scores below delta.
double SoftAtc(std::span<const double> fused, double delta, double kappa);

// |clean - prev_clean| + |shift - prev_shift|, or 0 without a previous value.
double LossTemp(double atc_clean, double atc_shift, const AtcState& prev);

// Everything the fusion loss needs about one ID training pair. The unfused
// scores and logits do not depend on the fusion weights, so they are
// computed once per timestep.
struct TrainingExample {
  CrossModalScores clean;
  CrossModalScores shift;
  std::vector<double> logits_clean;
  std::vector<double> logits_shift;
  int label = 0;
};

struct FusionGradient {
  double d_beta_raw = 0.0;
  double d_eta_raw = 0.0;
  LossBreakdown loss;
  double atc_clean = 0.0;
  double atc_shift = 0.0;
};

// Loss and analytic gradient with respect to (beta_raw, eta_raw). The |.|
// subgradient at 0 is 0. L_ID is included in the loss but has no gradient
// path to the fusion weights.
FusionGradient GradFusion(std::span<const TrainingExample> batch,
                          const FusionParams& params, const TrainConfig& cfg,
                          const ThresholdState& threshold, const AtcState& prev,
                          double temperature);

struct AdamState {
  double m_beta = 0.0;
  double v_beta = 0.0;
  double m_eta = 0.0;
  double v_eta = 0.0;
  std::int64_t step = 0;
};

// One Adam step on the raw fusion parameters. Pinned parameters are left
// untouched.
void AdamUpdate(const FusionGradient& grad, const TrainConfig& cfg, FusionParams& params,
                AdamState& adam);

// Trainable state carried from one timestep to the next.
struct FusionState {
  FusionParams params;
  AdamState adam;
  AtcState atc;
};

struct EpochLog {
  std::uint32_t timestep = 0;
  int epoch = 0;
  LossBreakdown loss;
  double beta = 0.0;
  double eta = 0.0;
  double atc_clean = 0.0;
  double atc_shift = 0.0;
};

// Runs cfg.epochs epochs of seeded mini-batch Adam over `data` and then
// stores the full-pass ATC of the final parameters into state.atc. Each
// epoch logs the batch-mean losses; with zero epochs a single evaluation row
// (epoch 0) is logged instead.
std::vector<EpochLog> FitTimestep(std::span<const TrainingExample> data,
                                  std::uint32_t timestep, const ThresholdState& threshold,
                                  FusionState& state, const TrainConfig& cfg,
                                  double temperature);

enum class Decision { kId, kOod };

// ID iff s_fused >= delta. Throws kUncalibrated without a threshold.
Decision Decide(double s_fused, const std::optional<ThresholdState>& threshold);
Decision Decide(double s_fused, const ThresholdState& threshold);

}  // namespace driftood

#endif  // DRIFTOOD_TRAINING_H_
