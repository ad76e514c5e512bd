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

#ifndef DRIFTOOD_METRICS_H_
#define DRIFTOOD_METRICS_H_

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace driftood {

// Per-timestep evaluation. Higher fused score means "more ID"; ID samples
// are the positive class.
struct EvalResult {
  std::uint32_t timestep = 0;
  double auroc = 0.0;
  double fpr95 = 0.0;
  double acc_clean = 0.0;
  double acc_shift = 0.0;
  std::size_t n_id = 0;
  std::size_t n_ood = 0;
};

// Mann-Whitney estimate: P(id > ood) + 0.5 P(id == ood). O((m+n) log(m+n)).
double Auroc(std::span<const double> id_scores, std::span<const double> ood_scores);

// FPR on the OOD side at the largest threshold that keeps at least
// `tpr_target` of the ID scores at or above it.
double FprAtTpr(std::span<const double> id_scores, std::span<const double> ood_scores,
                double tpr_target = 0.95);

// Fraction of rows whose argmax (lowest index on ties) equals the label.
double Accuracy(std::span<const std::vector<double>> logits, std::span<const int> labels);

// CSV in the layout: timestep,method,ood_set,fpr95,auroc,acc_clean,acc_shift
void WriteEvalCsvHeader(std::ostream& out);
void WriteEvalCsvRow(std::ostream& out, const EvalResult& r, const std::string& method,
                     const std::string& ood_set);

}  // namespace driftood

#endif  // DRIFTOOD_METRICS_H_
