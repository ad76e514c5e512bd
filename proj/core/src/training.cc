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

#include "driftood/training.h"

#include <cmath>
#include <string>

#include "driftood/error.h"
#include "driftood/random.h"

namespace driftood {
namespace {

double Sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

double CrossEntropy(std::span<const double> logits, int label, double temperature) {
  if (label < 0 || static_cast<std::size_t>(label) >= logits.size()) {
    throw Error(ErrorCode::kLabelOutOfRange,
                "label " + std::to_string(label) + " outside [0, " +
                    std::to_string(logits.size()) + ")");
  }
  return LogSumExp(logits, temperature) - logits[static_cast<std::size_t>(label)] / temperature;
}

// Scores and their derivatives with respect to the raw fusion parameters.
struct FusedWithSlope {
  double value;
  double d_beta;
  double d_eta;
};

FusedWithSlope FuseWithSlope(const CrossModalScores& s, const FusionParams& p) {
  return {FusedScore(s, p), p.beta_slope() * s.s_vis, -p.eta_slope() * s.s_cap_v};
}

}  // namespace

void TrainConfig::Validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::kInvalidConfig, what); };
  if (!(lr > 0.0)) fail("lr must be positive");
  if (epochs < 0) fail("epochs must be nonnegative");
  if (batch_size < 1) fail("batch_size must be at least 1");
  if (lambda_cov < 0.0 || lambda_temp < 0.0) fail("loss weights must be nonnegative");
  if (!(kappa > 0.0)) fail("kappa must be positive");
  if (!(delta_q > 0.0 && delta_q < 1.0)) fail("delta_q must lie in (0, 1)");
  if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0 && adam_beta2 >= 0.0 && adam_beta2 < 1.0)) {
    fail("Adam decay rates must lie in [0, 1)");
  }
  if (!(adam_eps > 0.0)) fail("adam_eps must be positive");
}

ThresholdState ThresholdState::Restore(double delta, std::uint32_t calibrated_at) {
  if (!std::isfinite(delta)) throw Error(ErrorCode::kNonFinite, "threshold is not finite");
  return ThresholdState(delta, calibrated_at);
}

ThresholdState CalibrateThreshold(std::span<const double> id_scores, double delta_q,
                                  std::uint32_t timestep) {
  if (id_scores.empty()) {
    throw Error(ErrorCode::kEmptyCalibrationSet, "no ID scores to calibrate on");
  }
  return ThresholdState::Restore(NearestRankQuantile(id_scores, delta_q), timestep);
}

LossBreakdown ComposeLoss(double l_id, double l_cov, double l_temp, const TrainConfig& cfg) {
  return {l_id, l_cov, l_temp, l_id + cfg.lambda_cov * l_cov + cfg.lambda_temp * l_temp};
}

double LossId(std::span<const std::vector<double>> clean_logits,
              std::span<const std::vector<double>> shifted_logits,
              std::span<const int> labels, double temperature) {
  if (clean_logits.size() != labels.size() || shifted_logits.size() != labels.size()) {
    throw Error(ErrorCode::kLengthMismatch, "logit batches and labels differ in length");
  }
  if (labels.empty()) return 0.0;
  double clean = 0.0;
  double shifted = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    clean += CrossEntropy(clean_logits[i], labels[i], temperature);
    shifted += CrossEntropy(shifted_logits[i], labels[i], temperature);
  }
  const auto n = static_cast<double>(labels.size());
  return 0.5 * (clean / n + shifted / n);
}

double LossCov(std::span<const double> fused_clean, std::span<const double> fused_shift) {
  if (fused_clean.size() != fused_shift.size()) {
    throw Error(ErrorCode::kLengthMismatch, "clean and shifted score vectors differ in length");
  }
  if (fused_clean.empty()) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < fused_clean.size(); ++i) {
    acc += std::abs(fused_clean[i] - fused_shift[i]);
  }
  return acc / static_cast<double>(fused_clean.size());
}

double SoftAtc(std::span<const double> fused, double delta, double kappa) {
  if (!(kappa > 0.0)) throw Error(ErrorCode::kInvalidConfig, "kappa must be positive");
  if (fused.empty()) throw Error(ErrorCode::kEmptyInput, "soft ATC of an empty batch");
  double acc = 0.0;
  for (double s : fused) acc += Sigmoid((delta - s) / kappa);
  return acc / static_cast<double>(fused.size());
}

double LossTemp(double atc_clean, double atc_shift, const AtcState& prev) {
  if (!prev.has_previous()) return 0.0;
  return std::abs(atc_clean - *prev.prev_clean) + std::abs(atc_shift - *prev.prev_shift);
}

FusionGradient GradFusion(std::span<const TrainingExample> batch,
                          const FusionParams& params, const TrainConfig& cfg,
                          const ThresholdState& threshold, const AtcState& prev,
                          double temperature) {
  if (batch.empty()) throw Error(ErrorCode::kEmptyInput, "empty training batch");
  const auto n = static_cast<double>(batch.size());
  const double delta = threshold.delta();

  double cov = 0.0, cov_db = 0.0, cov_de = 0.0;
  double atc_c = 0.0, atc_c_db = 0.0, atc_c_de = 0.0;
  double atc_s = 0.0, atc_s_db = 0.0, atc_s_de = 0.0;
  double ce_clean = 0.0, ce_shift = 0.0;

  for (const auto& ex : batch) {
    const auto c = FuseWithSlope(ex.clean, params);
    const auto s = FuseWithSlope(ex.shift, params);

    const double diff = c.value - s.value;
    cov += std::abs(diff);
    cov_db += Sign(diff) * (c.d_beta - s.d_beta);
    cov_de += Sign(diff) * (c.d_eta - s.d_eta);

    // d/dS sigmoid((delta - S) / kappa) = -sigma (1 - sigma) / kappa
    const double sc = Sigmoid((delta - c.value) / cfg.kappa);
    const double gc = -sc * (1.0 - sc) / cfg.kappa;
    atc_c += sc;
    atc_c_db += gc * c.d_beta;
    atc_c_de += gc * c.d_eta;

    const double ss = Sigmoid((delta - s.value) / cfg.kappa);
    const double gs = -ss * (1.0 - ss) / cfg.kappa;
    atc_s += ss;
    atc_s_db += gs * s.d_beta;
    atc_s_de += gs * s.d_eta;

    ce_clean += CrossEntropy(ex.logits_clean, ex.label, temperature);
    ce_shift += CrossEntropy(ex.logits_shift, ex.label, temperature);
  }

  FusionGradient g;
  g.atc_clean = atc_c / n;
  g.atc_shift = atc_s / n;
  const double l_id = 0.5 * (ce_clean / n + ce_shift / n);
  const double l_cov = cov / n;
  const double l_temp = LossTemp(g.atc_clean, g.atc_shift, prev);
  g.loss = ComposeLoss(l_id, l_cov, l_temp, cfg);

  double temp_db = 0.0;
  double temp_de = 0.0;
  if (prev.has_previous()) {
    const double sgn_c = Sign(g.atc_clean - *prev.prev_clean);
    const double sgn_s = Sign(g.atc_shift - *prev.prev_shift);
    temp_db = sgn_c * atc_c_db / n + sgn_s * atc_s_db / n;
    temp_de = sgn_c * atc_c_de / n + sgn_s * atc_s_de / n;
  }
  g.d_beta_raw = cfg.lambda_cov * cov_db / n + cfg.lambda_temp * temp_db;
  g.d_eta_raw = cfg.lambda_cov * cov_de / n + cfg.lambda_temp * temp_de;
  return g;
}

void AdamUpdate(const FusionGradient& grad, const TrainConfig& cfg, FusionParams& params,
                AdamState& adam) {
  ++adam.step;
  const double b1 = cfg.adam_beta1;
  const double b2 = cfg.adam_beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(adam.step));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(adam.step));
  auto step = [&](double g, double& m, double& v, double& raw) {
    m = b1 * m + (1.0 - b1) * g;
    v = b2 * v + (1.0 - b2) * g * g;
    raw -= cfg.lr * (m / c1) / (std::sqrt(v / c2) + cfg.adam_eps);
  };
  if (!params.beta_override) step(grad.d_beta_raw, adam.m_beta, adam.v_beta, params.beta_raw);
  if (!params.eta_override) step(grad.d_eta_raw, adam.m_eta, adam.v_eta, params.eta_raw);
}

std::vector<EpochLog> FitTimestep(std::span<const TrainingExample> data,
                                  std::uint32_t timestep, const ThresholdState& threshold,
                                  FusionState& state, const TrainConfig& cfg,
                                  double temperature) {
  cfg.Validate();
  if (data.empty()) {
    throw Error(ErrorCode::kEmptyTimestep,
                "no ID training pairs at timestep " + std::to_string(timestep));
  }
  std::vector<EpochLog> log;
  const std::size_t batch_size = static_cast<std::size_t>(cfg.batch_size);

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    Rng rng(DeriveSeed(cfg.seed, {timestep, static_cast<std::uint64_t>(epoch)}));
    const auto order = rng.Permutation(data.size());
    std::vector<TrainingExample> batch;
    batch.reserve(batch_size);
    double sum_id = 0.0, sum_cov = 0.0, sum_temp = 0.0;
    std::size_t num_batches = 0;
    for (std::size_t start = 0; start < order.size(); start += batch_size) {
      batch.clear();
      const std::size_t end = std::min(order.size(), start + batch_size);
      for (std::size_t i = start; i < end; ++i) batch.push_back(data[order[i]]);
      const auto grad = GradFusion(batch, state.params, cfg, threshold, state.atc, temperature);
      AdamUpdate(grad, cfg, state.params, state.adam);
      sum_id += grad.loss.l_id;
      sum_cov += grad.loss.l_cov;
      sum_temp += grad.loss.l_temp;
      ++num_batches;
    }
    const auto full = GradFusion(data, state.params, cfg, threshold, state.atc, temperature);
    const auto nb = static_cast<double>(num_batches);
    log.push_back({timestep, epoch, ComposeLoss(sum_id / nb, sum_cov / nb, sum_temp / nb, cfg),
                   state.params.beta(), state.params.eta(), full.atc_clean, full.atc_shift});
  }

  const auto final_pass = GradFusion(data, state.params, cfg, threshold, state.atc, temperature);
  if (cfg.epochs == 0) {
    log.push_back({timestep, 0, final_pass.loss, state.params.beta(), state.params.eta(),
                   final_pass.atc_clean, final_pass.atc_shift});
  }
  state.atc.prev_clean = final_pass.atc_clean;
  state.atc.prev_shift = final_pass.atc_shift;
  return log;
}

Decision Decide(double s_fused, const ThresholdState& threshold) {
  return s_fused >= threshold.delta() ? Decision::kId : Decision::kOod;
}

Decision Decide(double s_fused, const std::optional<ThresholdState>& threshold) {
  if (!threshold) throw Error(ErrorCode::kUncalibrated, "threshold has not been calibrated");
  return Decide(s_fused, *threshold);
}

}  // namespace driftood
