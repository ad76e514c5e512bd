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

#include "driftood/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <utility>

#include "driftood/error.h"
#include "driftood/numerics.h"

namespace driftood {
namespace {

void RequireBothSides(std::size_t m, std::size_t n) {
  if (m == 0 || n == 0) {
    throw Error(ErrorCode::kEmptySide, "need at least one ID and one OOD score");
  }
}

std::string FormatDouble(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", x);
  return buf;
}

}  // namespace

double Auroc(std::span<const double> id_scores, std::span<const double> ood_scores) {
  RequireBothSides(id_scores.size(), ood_scores.size());
  // Pool, sort, and walk tie groups: each ID score gets credit for every
  // strictly lower OOD score plus half of the tied ones.
  std::vector<std::pair<double, bool>> pooled;
  pooled.reserve(id_scores.size() + ood_scores.size());
  for (double s : id_scores) pooled.emplace_back(s, true);
  for (double s : ood_scores) pooled.emplace_back(s, false);
  std::sort(pooled.begin(), pooled.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  // Counts are integral; keep them exact and divide once at the end.
  std::uint64_t twice_wins = 0;
  std::uint64_t ood_below = 0;
  std::size_t i = 0;
  while (i < pooled.size()) {
    std::size_t j = i;
    std::uint64_t id_tied = 0;
    std::uint64_t ood_tied = 0;
    while (j < pooled.size() && pooled[j].first == pooled[i].first) {
      (pooled[j].second ? id_tied : ood_tied) += 1;
      ++j;
    }
    twice_wins += id_tied * (2 * ood_below + ood_tied);
    ood_below += ood_tied;
    i = j;
  }
  const double pairs =
      static_cast<double>(id_scores.size()) * static_cast<double>(ood_scores.size());
  return static_cast<double>(twice_wins) / (2.0 * pairs);
}

double FprAtTpr(std::span<const double> id_scores, std::span<const double> ood_scores,
                double tpr_target) {
  RequireBothSides(id_scores.size(), ood_scores.size());
  if (!(tpr_target > 0.0 && tpr_target <= 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "TPR target must lie in (0, 1]");
  }
  std::vector<double> desc(id_scores.begin(), id_scores.end());
  std::sort(desc.begin(), desc.end(), std::greater<>());
  const double m = static_cast<double>(desc.size());
  const double pos = tpr_target * m;
  double rank = std::floor(pos);
  if (pos - rank > 1e-9 * std::max(1.0, pos)) rank += 1.0;
  const auto index = static_cast<std::size_t>(std::max(rank - 1.0, 0.0));
  const double tau = desc[std::min(index, desc.size() - 1)];
  std::size_t above = 0;
  for (double s : ood_scores) above += s >= tau ? 1 : 0;
  return static_cast<double>(above) / static_cast<double>(ood_scores.size());
}

double Accuracy(std::span<const std::vector<double>> logits, std::span<const int> labels) {
  if (logits.size() != labels.size()) {
    throw Error(ErrorCode::kLengthMismatch, "logits and labels differ in length");
  }
  if (logits.empty()) throw Error(ErrorCode::kEmptyInput, "accuracy of an empty batch");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    if (labels[i] < 0 || static_cast<std::size_t>(labels[i]) >= logits[i].size()) {
      throw Error(ErrorCode::kLabelOutOfRange, "label " + std::to_string(labels[i]));
    }
    correct += ArgMax(logits[i]) == static_cast<std::size_t>(labels[i]) ? 1 : 0;
  }
  return static_cast<double>(correct) / static_cast<double>(logits.size());
}

void WriteEvalCsvHeader(std::ostream& out) {
  out << "timestep,method,ood_set,fpr95,auroc,acc_clean,acc_shift\n";
}

void WriteEvalCsvRow(std::ostream& out, const EvalResult& r, const std::string& method,
                     const std::string& ood_set) {
  out << r.timestep << ',' << method << ',' << ood_set << ',' << FormatDouble(r.fpr95) << ','
      << FormatDouble(r.auroc) << ',' << FormatDouble(r.acc_clean) << ','
      << FormatDouble(r.acc_shift) << '\n';
}

}  // namespace driftood
