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

#include "driftood/theory_checks.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "driftood/error.h"
#include "driftood/parallel.h"
#include "driftood/random.h"

namespace driftood {
namespace {

constexpr double kGridTolerance = 1e-12;
constexpr double kMonteCarloTolerance = 1e-9;

std::string FormatVector(std::span<const double> v) {
  std::string out = "[";
  char buf[32];
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%s%.17g", i ? "," : "", v[i]);
    out += buf;
  }
  return out + "]";
}

// Dirichlet draw with a per-trial concentration that is log-uniform in
// [0.05, 5], so that both near-uniform and near-vertex points are visited.
SimplexVector RandomSimplex(Rng& rng, int k) {
  const double alpha = std::exp(std::log(0.05) + rng.Uniform01() * std::log(100.0));
  std::vector<double> w(static_cast<std::size_t>(k));
  for (double& x : w) x = rng.Gamma(alpha);
  return SimplexVector::FromWeights(w);
}

void CheckTrialArgs(std::uint64_t trials, int k) {
  if (trials < 1) throw Error(ErrorCode::kInvalidConfig, "trials must be at least 1");
  if (k < 2) throw Error(ErrorCode::kInvalidConfig, "need at least 2 classes");
}

struct Trial {
  double gap = 0.0;  // lhs - rhs
  std::string input;
};

// Folds per-trial gaps in trial order into a report.
template <typename TrialFn>
CheckReport MonteCarlo(const char* name, std::uint64_t trials, int threads, TrialFn&& fn) {
  std::vector<Trial> results(trials);
  ParallelFor(trials, threads, [&](std::size_t i) { results[i] = fn(i); });
  CheckReport report;
  report.check_name = name;
  report.trials = trials;
  report.tolerance = kMonteCarloTolerance;
  report.max_violation = -std::numeric_limits<double>::infinity();
  for (const auto& r : results) {
    report.max_violation = std::max(report.max_violation, r.gap);
    if (r.gap > report.tolerance) {
      if (report.violations == 0) report.offending_input = r.input;
      ++report.violations;
    }
  }
  return report;
}

}  // namespace

double TopMassEntropy(double p_star, int num_classes) {
  const double rest = (1.0 - p_star) / static_cast<double>(num_classes - 1);
  double h = p_star > 0.0 ? -p_star * std::log(p_star) : 0.0;
  if (rest > 0.0) h -= (1.0 - p_star) * std::log(rest);
  return h;
}

CheckReport CheckEntropyConfidence(int num_classes, int grid) {
  if (num_classes < 2) throw Error(ErrorCode::kInvalidConfig, "need at least 2 classes");
  if (grid < 2) throw Error(ErrorCode::kInvalidConfig, "grid needs at least 2 points");
  const double lo = 1.0 / static_cast<double>(num_classes);
  const double step = (1.0 - lo) / static_cast<double>(grid);
  CheckReport report;
  report.check_name = "entropy_confidence";
  report.trials = static_cast<std::uint64_t>(grid - 1);
  report.tolerance = kGridTolerance;
  report.max_violation = -std::numeric_limits<double>::infinity();
  double prev = TopMassEntropy(lo, num_classes);
  for (int i = 1; i < grid; ++i) {
    const double p = lo + step * i;
    const double h = TopMassEntropy(p, num_classes);
    const double gap = h - prev;
    report.max_violation = std::max(report.max_violation, gap);
    if (gap > report.tolerance) {
      if (report.violations == 0) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "K=%d p*=%.17g", num_classes, p);
        report.offending_input = buf;
      }
      ++report.violations;
    }
    prev = h;
  }
  return report;
}

BoundSides PinskerUniformSides(const SimplexVector& f) {
  const auto u = SimplexVector::Uniform(f.size());
  return {TotalVariation(f, u), std::sqrt(0.5 * KlDivergence(u, f))};
}

BoundSides KlTvChi2Sides(const SimplexVector& p, const SimplexVector& q) {
  return {KlDivergence(p, q), 0.5 * (TotalVariation(p, q) + ChiSquared(p, q))};
}

CheckReport CheckPinskerUniform(std::uint64_t trials, int num_classes, std::uint64_t seed,
                               int threads) {
  CheckTrialArgs(trials, num_classes);
  return MonteCarlo("pinsker_uniform", trials, threads, [&](std::size_t i) {
    Rng rng(DeriveSeed(seed, {static_cast<std::uint64_t>(num_classes), i}));
    const auto f = RandomSimplex(rng, num_classes);
    const auto s = PinskerUniformSides(f);
    return Trial{s.lhs - s.rhs, "F=" + FormatVector(f.probs())};
  });
}

CheckReport CheckKlTvChi2(std::uint64_t trials, int num_classes, std::uint64_t seed, int threads) {
  CheckTrialArgs(trials, num_classes);
  return MonteCarlo("kl_tv_chi2", trials, threads, [&](std::size_t i) {
    Rng rng(DeriveSeed(seed, {static_cast<std::uint64_t>(num_classes), i}));
    const auto p = RandomSimplex(rng, num_classes);
    const auto q = RandomSimplex(rng, num_classes);
    const auto s = KlTvChi2Sides(p, q);
    return Trial{s.lhs - s.rhs, "P=" + FormatVector(p.probs()) + " Q=" + FormatVector(q.probs())};
  });
}

double BernoulliChiSquared(double a, double b) {
  const double d1 = a - b;
  const double d0 = (1.0 - a) - (1.0 - b);
  return d1 * d1 / b + d0 * d0 / (1.0 - b);
}

double BernoulliFisher(double theta) { return 1.0 / (theta * (1.0 - theta)); }

CheckReport CheckChi2FisherExpansion(std::span<const double> deltas, double theta0) {
  auto in_open_unit = [](double x) { return x > 0.0 && x < 1.0; };
  if (!in_open_unit(theta0)) {
    throw Error(ErrorCode::kThetaOutOfRange, "theta0 must lie in (0, 1)");
  }
  if (deltas.empty()) throw Error(ErrorCode::kInvalidConfig, "need at least one delta");
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (deltas[i] == 0.0 || !std::isfinite(deltas[i])) {
      throw Error(ErrorCode::kInvalidConfig, "deltas must be finite and nonzero");
    }
    if (i > 0 && !(std::abs(deltas[i]) < std::abs(deltas[i - 1]))) {
      throw Error(ErrorCode::kInvalidConfig, "deltas must shrink strictly in magnitude");
    }
    if (!in_open_unit(theta0 + deltas[i])) {
      throw Error(ErrorCode::kThetaOutOfRange, "theta0 + delta must lie in (0, 1)");
    }
  }

  const double fisher = BernoulliFisher(theta0);
  CheckReport report;
  report.check_name = "chi2_fisher_expansion";
  report.tolerance = kMonteCarloTolerance;
  report.max_violation = -std::numeric_limits<double>::infinity();
  auto record = [&](double gap, double delta) {
    ++report.trials;
    report.max_violation = std::max(report.max_violation, gap);
    if (gap > report.tolerance) {
      if (report.violations == 0) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "theta0=%.17g delta=%.17g", theta0, delta);
        report.offending_input = buf;
      }
      ++report.violations;
    }
  };

  // Relative errors of the forward ratio are pure rounding; the reversed
  // ratio carries the genuine first-order term.
  double prev_err = 0.0;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    const double d = deltas[i];
    const double forward = BernoulliChiSquared(theta0 + d, theta0) / (d * d);
    record(std::abs(forward - fisher) / fisher, d);

    const double reversed = BernoulliChiSquared(theta0, theta0 + d) / (d * d);
    const double err = std::abs(reversed - fisher) / fisher;
    if (i > 0) {
      const double shrink = std::abs(d / deltas[i - 1]);
      record(err - 1.5 * shrink * prev_err, d);
    }
    prev_err = err;
  }
  return report;
}

std::vector<double> DefaultFisherDeltas(int count) {
  std::vector<double> out;
  double d = 1e-2;
  for (int i = 0; i < count; ++i, d *= 0.5) out.push_back(d);
  return out;
}

}  // namespace driftood
