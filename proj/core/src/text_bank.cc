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

#include "driftood/text_bank.h"

#include <string>

#include "driftood/error.h"

namespace driftood {

TextBank::TextBank(std::vector<UnitVector> rows, std::vector<std::string> class_names)
    : rows_(std::move(rows)), class_names_(std::move(class_names)), dim_(0) {
  if (rows_.size() < 2) {
    throw Error(ErrorCode::kInvalidConfig, "text bank needs at least two classes");
  }
  if (class_names_.size() != rows_.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "class name count differs from row count");
  }
  dim_ = rows_.front().dim();
  for (const auto& r : rows_) {
    if (r.dim() != dim_) {
      throw Error(ErrorCode::kDimensionMismatch, "text bank rows differ in dimension");
    }
  }
}

TextBank BuildTextBank(std::span<const PromptEmbeddingSet> prompt_sets,
                       std::vector<std::string> class_names) {
  const std::size_t k = prompt_sets.size();
  std::vector<const PromptEmbeddingSet*> by_class(k, nullptr);
  std::size_t dim = 0;
  for (const auto& set : prompt_sets) {
    if (set.class_id < 0 || static_cast<std::size_t>(set.class_id) >= k) {
      throw Error(ErrorCode::kMissingClass,
                  "class id " + std::to_string(set.class_id) + " outside [0, K)");
    }
    auto& slot = by_class[static_cast<std::size_t>(set.class_id)];
    if (slot != nullptr) {
      throw Error(ErrorCode::kDuplicateClass,
                  "class id " + std::to_string(set.class_id) + " appears twice");
    }
    slot = &set;
    if (set.embeddings.empty()) {
      throw Error(ErrorCode::kEmptyPromptSet,
                  "class " + std::to_string(set.class_id) + " has no prompts");
    }
    for (const auto& e : set.embeddings) {
      if (dim == 0) dim = e.size();
      if (e.size() != dim) {
        throw Error(ErrorCode::kDimensionMismatch, "prompt embeddings differ in dimension");
      }
    }
  }

  std::vector<UnitVector> rows;
  rows.reserve(k);
  for (std::size_t c = 0; c < k; ++c) {
    std::vector<double> sum(dim, 0.0);
    for (const auto& e : by_class[c]->embeddings) {
      const UnitVector u = Normalize(e);
      for (std::size_t i = 0; i < dim; ++i) sum[i] += u[i];
    }
    rows.push_back(Normalize(sum));
  }
  if (class_names.empty()) {
    for (std::size_t c = 0; c < k; ++c) class_names.push_back("class_" + std::to_string(c));
  }
  return TextBank(std::move(rows), std::move(class_names));
}

UnitVector EncodeCaption(std::span<const double> raw) { return Normalize(raw); }

}  // namespace driftood
