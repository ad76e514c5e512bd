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

#ifndef DRIFTOOD_THEORY_CHECKS_H_
#define DRIFTOOD_THEORY_CHECKS_H_

// Numerical checks of the divergence inequalities and expansions behind the
// detector's analysis, evaluated on finite distributions.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "driftood/numerics.h"

namespace driftood {

struct CheckReport {
  std::string check_name;
  std::uint64_t trials = 0;
  // Trials whose left side exceeds the right side by more than `tolerance`.
  std::uint64_t violations = 0;
  // Largest lhs - rhs over all trials (may be negative when every trial holds).
  double max_violation = 0.0;
  double tolerance = 0.0;
  // Input of the first violating trial, empty when none.
  std::string offending_input;

  bool ok() const { return violations == 0; }
};

// Entropy of the two-level family: p* on the top class, the rest spread
// evenly over the other K - 1 classes.
double TopMassEntropy(double p_star, int num_classes);

// Scans h(p*) on `grid` evenly spaced points of [1/K, 1) and counts steps
// where h increases by more than 1e-12. Throws kInvalidConfig for K < 2 or
// grid < 2.
CheckReport CheckEntropyConfidence(int num_classes, int grid);

// Both sides of TV(F, U) <= sqrt(KL(U || F) / 2).
struct BoundSides {
  double lhs = 0.0;
  double rhs = 0.0;
};
BoundSides PinskerUniformSides(const SimplexVector& f);

// Both sides of KL(P || Q) <= (TV(P, Q) + chi2(P || Q)) / 2, in nats.
BoundSides KlTvChi2Sides(const SimplexVector& p, const SimplexVector& q);

// Random-simplex sweeps with per-trial derived seeds; the report does not
// depend on `threads`. Throws kInvalidConfig for trials < 1 or K < 2.
CheckReport CheckPinskerUniform(std::uint64_t trials, int num_classes, std::uint64_t seed,
                               int threads = 1);
CheckReport CheckKlTvChi2(std::uint64_t trials, int num_classes, std::uint64_t seed,
                          int threads = 1);

// chi2(Bernoulli(a) || Bernoulli(b)) by direct summation over both outcomes.
double BernoulliChiSquared(double a, double b);
// Fisher information 1 / (theta (1 - theta)).
double BernoulliFisher(double theta);

// Checks chi2(P_{theta0 + d} || P_theta0) / d^2 -> I(theta0) for each delta,
// and that the reversed-direction ratio chi2(P_theta0 || P_{theta0 + d}) / d^2
// converges at least linearly: each time delta shrinks by a factor r its
// error shrinks by at least r / 1.5. Deltas must be nonzero and strictly
// decreasing in magnitude. Throws kThetaOutOfRange when theta0 or any
// theta0 + d leaves (0, 1), kInvalidConfig for bad deltas.
CheckReport CheckChi2FisherExpansion(std::span<const double> deltas, double theta0);

// Halving sequence used by default: 1e-2, 5e-3, ... (`count` entries).
std::vector<double> DefaultFisherDeltas(int count = 12);

}  // namespace driftood

#endif  // DRIFTOOD_THEORY_CHECKS_H_
