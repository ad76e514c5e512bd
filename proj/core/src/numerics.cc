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

#include "driftood/numerics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "driftood/error.h"

namespace driftood {
namespace {

void CheckSameSize(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::string(what) + ": sizes " + std::to_string(a) + " and " +
                    std::to_string(b));
  }
}

void CheckFinite(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw Error(ErrorCode::kNonFinite, std::string(what) + ": non-finite input");
    }
  }
}

}  // namespace

SimplexVector SimplexVector::FromWeights(std::span<const double> weights) {
  if (weights.empty()) {
    throw Error(ErrorCode::kEmptyInput, "simplex vector needs at least one entry");
  }
  CheckFinite(weights, "SimplexVector");
  std::vector<double> probs(weights.begin(), weights.end());
  double sum = 0.0;
  for (double& p : probs) {
    p = std::max(p, kProbFloor);
    sum += p;
  }
  for (double& p : probs) {
    // Second clamp: dividing by a sum slightly above one can push a floored
    // entry a few ulps under the floor.
    p = std::max(p / sum, kProbFloor);
  }
  return SimplexVector(std::move(probs));
}

SimplexVector SimplexVector::Uniform(std::size_t k) {
  if (k == 0) {
    throw Error(ErrorCode::kEmptyInput, "uniform distribution over zero classes");
  }
  return SimplexVector(std::vector<double>(k, 1.0 / static_cast<double>(k)));
}

double Dot(std::span<const double> a, std::span<const double> b) {
  CheckSameSize(a.size(), b.size(), "Dot");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double L2Norm(std::span<const double> v) {
  // Scaled accumulation so tiny or huge vectors do not under/overflow.
  double scale = 0.0;
  for (double x : v) scale = std::max(scale, std::abs(x));
  if (scale == 0.0 || !std::isfinite(scale)) return scale;
  double acc = 0.0;
  for (double x : v) {
    const double r = x / scale;
    acc += r * r;
  }
  return scale * std::sqrt(acc);
}

UnitVector Normalize(std::span<const double> v) {
  if (v.empty()) {
    throw Error(ErrorCode::kEmptyInput, "cannot normalize an empty vector");
  }
  CheckFinite(v, "Normalize");
  const double norm = L2Norm(v);
  if (norm < kMinNorm) {
    throw Error(ErrorCode::kZeroVector, "vector norm below 1e-30");
  }
  std::vector<double> out(v.begin(), v.end());
  for (double& x : out) x /= norm;
  return UnitVector(std::move(out));
}

SimplexVector TempSoftmax(std::span<const double> logits, double temperature) {
  if (logits.empty()) {
    throw Error(ErrorCode::kEmptyInput, "softmax over zero logits");
  }
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw Error(ErrorCode::kInvalidConfig, "temperature must be positive and finite");
  }
  CheckFinite(logits, "TempSoftmax");
  double m = -std::numeric_limits<double>::infinity();
  for (double z : logits) m = std::max(m, z / temperature);
  std::vector<double> w(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    w[i] = std::exp(logits[i] / temperature - m);
    sum += w[i];
  }
  for (double& x : w) x /= sum;
  return SimplexVector::FromWeights(w);
}

double LogSumExp(std::span<const double> logits, double temperature) {
  if (logits.empty()) {
    throw Error(ErrorCode::kEmptyInput, "log-sum-exp over zero logits");
  }
  double m = -std::numeric_limits<double>::infinity();
  for (double z : logits) m = std::max(m, z / temperature);
  double sum = 0.0;
  for (double z : logits) sum += std::exp(z / temperature - m);
  return m + std::log(sum);
}

double KlDivergence(const SimplexVector& p, const SimplexVector& q) {
  CheckSameSize(p.size(), q.size(), "KlDivergence");
  double acc = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    acc += p[j] * std::log(p[j] / q[j]);
  }
  // Rounding can leave a tiny negative residue for p close to q.
  return std::max(acc, 0.0);
}

double TotalVariation(const SimplexVector& p, const SimplexVector& q) {
  CheckSameSize(p.size(), q.size(), "TotalVariation");
  double acc = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) acc += std::abs(p[j] - q[j]);
  return 0.5 * acc;
}

double ChiSquared(const SimplexVector& p, const SimplexVector& q) {
  CheckSameSize(p.size(), q.size(), "ChiSquared");
  // Sum of (p - q)^2 / q; algebraically equal to sum p^2/q - 1 but without
  // the cancellation when p is close to q.
  double acc = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    const double diff = p[j] - q[j];
    acc += diff * diff / q[j];
  }
  return acc;
}

double Entropy(const SimplexVector& p) {
  double acc = 0.0;
  for (double x : p.probs()) acc -= x * std::log(x);
  return std::max(acc, 0.0);
}

double Softplus(double x) {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

double Sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double NearestRankQuantile(std::span<const double> scores, double q) {
  if (scores.empty()) {
    throw Error(ErrorCode::kEmptyInput, "quantile of an empty score set");
  }
  if (!(q > 0.0 && q < 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "quantile level must lie in (0, 1)");
  }
  std::vector<double> sorted(scores.begin(), scores.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  const double pos = q * n;
  // q * n that is an integer up to rounding (0.07 * 100) must not ceil up.
  double rank = std::floor(pos);
  if (pos - rank > 1e-9 * std::max(1.0, pos)) rank += 1.0;
  const auto index = static_cast<std::size_t>(std::max(rank - 1.0, 0.0));
  return sorted[std::min(index, sorted.size() - 1)];
}

std::size_t ArgMax(std::span<const double> v) {
  if (v.empty()) throw Error(ErrorCode::kEmptyInput, "argmax of empty vector");
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

std::size_t ArgMin(std::span<const double> v) {
  if (v.empty()) throw Error(ErrorCode::kEmptyInput, "argmin of empty vector");
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] < v[best]) best = i;
  }
  return best;
}

}  // namespace driftood
