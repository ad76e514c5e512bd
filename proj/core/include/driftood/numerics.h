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

#ifndef DRIFTOOD_NUMERICS_H_
#define DRIFTOOD_NUMERICS_H_

// Vector and probability-simplex primitives shared by the scoring engine and
// the theory checks. Everything is double precision; logarithms are natural
// (KL, entropy and cross-entropy are in nats).

#include <cstddef>
#include <span>
#include <vector>

namespace driftood {

// Lower bound applied to every probability before it enters a logarithm.
inline constexpr double kProbFloor = 1e-12;

// Norms below this are treated as the zero vector.
inline constexpr double kMinNorm = 1e-30;

// An l2-normalized real vector. Only obtainable through Normalize().
class UnitVector {
 public:
  std::span<const double> values() const { return values_; }
  std::size_t dim() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

  bool operator==(const UnitVector&) const = default;

 private:
  friend UnitVector Normalize(std::span<const double> v);
  explicit UnitVector(std::vector<double> values) : values_(std::move(values)) {}

  std::vector<double> values_;
};

// A probability vector whose entries are all >= kProbFloor and sum to one
// within 1e-9.
class SimplexVector {
 public:
  // Clamps each entry to kProbFloor and renormalizes. Inputs must be finite
  // and nonnegative-ish (negative rounding noise is clamped away).
  static SimplexVector FromWeights(std::span<const double> weights);
  static SimplexVector Uniform(std::size_t k);

  std::span<const double> probs() const { return probs_; }
  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }

  bool operator==(const SimplexVector&) const = default;

 private:
  explicit SimplexVector(std::vector<double> probs) : probs_(std::move(probs)) {}

  std::vector<double> probs_;
};

double Dot(std::span<const double> a, std::span<const double> b);
double L2Norm(std::span<const double> v);

// Throws kZeroVector when ||v|| < kMinNorm and kNonFinite on NaN/inf input.
UnitVector Normalize(std::span<const double> v);

// Softmax of z / temperature with max-subtraction, then simplex clamping.
SimplexVector TempSoftmax(std::span<const double> logits, double temperature);

// log(sum(exp(z / temperature))), stable.
double LogSumExp(std::span<const double> logits, double temperature);

double KlDivergence(const SimplexVector& p, const SimplexVector& q);
double TotalVariation(const SimplexVector& p, const SimplexVector& q);
double ChiSquared(const SimplexVector& p, const SimplexVector& q);
double Entropy(const SimplexVector& p);

double Softplus(double x);
double Sigmoid(double x);

// Lower nearest-rank quantile: the sorted element at index
// max(ceil(q * n) - 1, 0). At most a q-fraction of the input lies strictly
// below the result.
double NearestRankQuantile(std::span<const double> scores, double q);

// Index of the largest entry; ties resolve to the lowest index.
std::size_t ArgMax(std::span<const double> v);
std::size_t ArgMin(std::span<const double> v);

}  // namespace driftood

#endif  // DRIFTOOD_NUMERICS_H_
