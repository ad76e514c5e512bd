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

#include <cmath>
#include <vector>

#include "driftood/error.h"
#include "gtest/gtest.h"
#include "support/test_util.h"

namespace driftood {
namespace {

using ::driftood::testing::CaughtCode;
using ::driftood::testing::RandomGaussian;

std::vector<PromptEmbeddingSet> TwoClassSets() {
  return {{0, {{3.0, 4.0, 0.0}}}, {1, {{0.0, 0.0, 2.0}}}};
}

TEST(BuildTextBankTest, SinglePromptIsItsNormalizedEmbedding) {
  const auto sets = TwoClassSets();
  const TextBank bank = BuildTextBank(sets);
  ASSERT_EQ(bank.num_classes(), 2u);
  EXPECT_EQ(bank.dim(), 3u);
  EXPECT_DOUBLE_EQ(bank.row(0)[0], 0.6);
  EXPECT_DOUBLE_EQ(bank.row(0)[1], 0.8);
  EXPECT_EQ(bank.row(1)[2], 1.0);
  EXPECT_EQ(bank.class_names()[0], "class_0");
  EXPECT_EQ(bank.class_names()[1], "class_1");
}

TEST(BuildTextBankTest, DuplicatePromptIsIdempotent) {
  std::vector<PromptEmbeddingSet> sets = {{0, {{1.0, 2.0}, {1.0, 2.0}}}, {1, {{2.0, -1.0}}}};
  const TextBank bank = BuildTextBank(sets);
  const auto single = Normalize(std::vector<double>{1.0, 2.0});
  EXPECT_NEAR(bank.row(0)[0], single[0], 1e-15);
  EXPECT_NEAR(bank.row(0)[1], single[1], 1e-15);
}

TEST(BuildTextBankTest, SumThenNormalize) {
  std::vector<PromptEmbeddingSet> sets = {{0, {{1.0, 0.0}, {0.0, 1.0}}}, {1, {{1.0, -1.0}}}};
  const TextBank bank = BuildTextBank(sets);
  EXPECT_NEAR(bank.row(0)[0], 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(bank.row(0)[1], 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(BuildTextBankTest, InnerNormalizationWeighsPromptsEqually) {
  // A long prompt does not dominate: [10,0] and [0,1] still average to 45 degrees.
  std::vector<PromptEmbeddingSet> sets = {{0, {{10.0, 0.0}, {0.0, 1.0}}}, {1, {{1.0, 1.0}}}};
  const TextBank bank = BuildTextBank(sets);
  EXPECT_NEAR(bank.row(0)[0], bank.row(0)[1], 1e-15);
}

TEST(BuildTextBankTest, AcceptsSetsInAnyOrderAndNames) {
  std::vector<PromptEmbeddingSet> sets = {{1, {{0.0, 1.0}}}, {0, {{1.0, 0.0}}}};
  const TextBank bank = BuildTextBank(sets, {"cat", "dog"});
  EXPECT_EQ(bank.row(0)[0], 1.0);
  EXPECT_EQ(bank.row(1)[1], 1.0);
  EXPECT_EQ(bank.class_names()[1], "dog");
}

TEST(BuildTextBankTest, Errors) {
  {
    std::vector<PromptEmbeddingSet> sets = {{0, {{1.0, 0.0}}}, {0, {{0.0, 1.0}}}};
    EXPECT_EQ(CaughtCode([&] { BuildTextBank(sets); }), ErrorCode::kDuplicateClass);
  }
  {
    std::vector<PromptEmbeddingSet> sets = {{0, {{1.0, 0.0}}}, {1, {}}};
    EXPECT_EQ(CaughtCode([&] { BuildTextBank(sets); }), ErrorCode::kEmptyPromptSet);
  }
  {
    std::vector<PromptEmbeddingSet> sets = {{0, {{1.0, 0.0}}}, {1, {{0.0, 1.0, 0.0}}}};
    EXPECT_EQ(CaughtCode([&] { BuildTextBank(sets); }), ErrorCode::kDimensionMismatch);
  }
  {
    std::vector<PromptEmbeddingSet> sets = {{0, {{1.0, 0.0}, {1.0}}}, {1, {{0.0, 1.0}}}};
    EXPECT_EQ(CaughtCode([&] { BuildTextBank(sets); }), ErrorCode::kDimensionMismatch);
  }
  {
    std::vector<PromptEmbeddingSet> sets = {{0, {{1.0, 0.0}}}, {2, {{0.0, 1.0}}}};
    EXPECT_EQ(CaughtCode([&] { BuildTextBank(sets); }), ErrorCode::kMissingClass);
  }
  {
    std::vector<PromptEmbeddingSet> sets = {{0, {{1.0, 0.0}}}, {1, {{0.0, 0.0}}}};
    EXPECT_EQ(CaughtCode([&] { BuildTextBank(sets); }), ErrorCode::kZeroVector);
  }
}

TEST(EncodeCaptionTest, Examples) {
  const auto unit = EncodeCaption(std::vector<double>{0.6, 0.8});
  EXPECT_EQ(unit[0], 0.6);
  EXPECT_EQ(unit[1], 0.8);
  const auto scaled = EncodeCaption(std::vector<double>{2.0, 0.0, 0.0});
  EXPECT_EQ(scaled[0], 1.0);
  EXPECT_EQ(scaled[1], 0.0);
  EXPECT_EQ(CaughtCode([] { EncodeCaption(std::vector<double>{0.0, 0.0}); }),
            ErrorCode::kZeroVector);
}

TEST(BuildTextBankProperty, OrderAndScaleInvariance) {
  Rng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t k = 2 + rng.UniformIndex(6);
    const std::size_t d = 2 + rng.UniformIndex(16);
    std::vector<PromptEmbeddingSet> sets(k);
    for (std::size_t c = 0; c < k; ++c) {
      sets[c].class_id = static_cast<int>(c);
      const std::size_t p = 1 + rng.UniformIndex(5);
      for (std::size_t i = 0; i < p; ++i) sets[c].embeddings.push_back(RandomGaussian(rng, d));
    }
    const TextBank base = BuildTextBank(sets);
    for (const auto& row : base.rows()) EXPECT_NEAR(L2Norm(row.values()), 1.0, 1e-12);

    auto shuffled = sets;
    for (auto& s : shuffled) {
      const auto perm = rng.Permutation(s.embeddings.size());
      std::vector<std::vector<double>> e;
      for (std::size_t i : perm) e.push_back(s.embeddings[i]);
      s.embeddings = e;
      for (auto& v : s.embeddings) {
        const double c = std::exp(3.0 * rng.Normal());
        for (double& x : v) x *= c;
      }
    }
    const TextBank other = BuildTextBank(shuffled);
    for (std::size_t c = 0; c < k; ++c) {
      for (std::size_t j = 0; j < d; ++j) EXPECT_NEAR(other.row(c)[j], base.row(c)[j], 1e-12);
    }
  }
}

TEST(TextBankTest, RejectsSingleClass) {
  std::vector<UnitVector> rows = {Normalize(std::vector<double>{1.0, 0.0})};
  EXPECT_EQ(CaughtCode([&] { TextBank(rows, {"only"}); }), ErrorCode::kInvalidConfig);
}

TEST(TextBankTest, CopiesCompareEqual) {
  const auto sets = TwoClassSets();
  const TextBank a = BuildTextBank(sets);
  const TextBank b = a;
  EXPECT_TRUE(a == b);
}

}  // namespace
}  // namespace driftood
