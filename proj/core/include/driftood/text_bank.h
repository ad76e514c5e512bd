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

#ifndef DRIFTOOD_TEXT_BANK_H_
#define DRIFTOOD_TEXT_BANK_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "driftood/numerics.h"

namespace driftood {

// Raw (pre-normalization) prompt-template embeddings for one class.
struct PromptEmbeddingSet {
  int class_id = 0;
  std::vector<std::vector<double>> embeddings;
};

// Fixed per-class text anchors, one unit row per class. There is no mutating
// API: a bank built once is shared read-only for the whole run.
class TextBank {
 public:
  TextBank(std::vector<UnitVector> rows, std::vector<std::string> class_names);

  std::size_t num_classes() const { return rows_.size(); }
  std::size_t dim() const { return dim_; }
  const UnitVector& row(std::size_t k) const { return rows_[k]; }
  std::span<const UnitVector> rows() const { return rows_; }
  std::span<const std::string> class_names() const { return class_names_; }

  bool operator==(const TextBank&) const = default;

 private:
  std::vector<UnitVector> rows_;
  std::vector<std::string> class_names_;
  std::size_t dim_;
};

// Prompt ensembling: t_k = normalize(sum_i normalize(e_k^(i))). Sets may come
// in any order but must cover class ids 0..K-1 exactly once. When
// `class_names` is empty, names default to "class_<k>".
TextBank BuildTextBank(std::span<const PromptEmbeddingSet> prompt_sets,
                       std::vector<std::string> class_names = {});

// q_c = normalize(raw caption embedding).
UnitVector EncodeCaption(std::span<const double> raw);

}  // namespace driftood

#endif  // DRIFTOOD_TEXT_BANK_H_
