// Copyright 2026 The mixbound Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mixbound/montecarlo.h"

#include <gtest/gtest.h>

#include <cmath>

namespace mixbound {
namespace {

TEST(SplitMix64Test, KnownSequence) {
  // Reference values for seed 0 from the published SplitMix64 algorithm.
  SplitMix64 g(0);
  EXPECT_EQ(g(), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(g(), 0x6e789e6aa1b965f4ULL);
  EXPECT_EQ(g(), 0x06c45d188009454fULL);
}

TEST(SplitMix64Test, UnitInterval) {
  SplitMix64 g(123);
  for (int i = 0; i < 10000; ++i) {
    const double u = g.NextUnit();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(SubstreamSeedTest, DistinctAndDeterministic) {
  EXPECT_EQ(SubstreamSeed(7, 3), SubstreamSeed(7, 3));
  EXPECT_NE(SubstreamSeed(7, 3), SubstreamSeed(7, 4));
  EXPECT_NE(SubstreamSeed(7, 3), SubstreamSeed(8, 3));
}

TEST(SampleMarkov2Test, StationaryFrequency) {
  long ones = 0;
  long total = 0;
  for (std::uint64_t s = 0; s < 2000; ++s) {
    for (std::uint8_t x : SampleMarkov2(0.2, 0.3, 20, SubstreamSeed(1, s))) {
      ones += x;
      ++total;
    }
  }
  EXPECT_NEAR(static_cast<double>(ones) / total, 0.4, 0.01);
}

TEST(MakeEstimateTest, NormalAndDegenerate) {
  const auto e = MakeEstimate(25, 100);
  EXPECT_DOUBLE_EQ(e.estimate, 0.25);
  EXPECT_NEAR(e.std_error, std::sqrt(0.25 * 0.75 / 100), 1e-15);
  EXPECT_NEAR(e.ci_low, 0.25 - 1.96 * e.std_error, 1e-15);
  const auto all = MakeEstimate(100, 100);
  EXPECT_DOUBLE_EQ(all.ci_low, 0.99);
  EXPECT_DOUBLE_EQ(all.ci_high, 1.0);
  const auto none = MakeEstimate(0, 100);
  EXPECT_DOUBLE_EQ(none.ci_low, 0.0);
  EXPECT_DOUBLE_EQ(none.ci_high, 0.03);
}

TEST(EstimateUnionTest, BlockFamilyNearExact) {
  const BlockFamily model(1, 0.1, 5);
  const auto e = EstimateUnion(model, {200000, 9, 2});
  EXPECT_NEAR(e.estimate, model.ExactUnion(), 4 * e.std_error);
}

TEST(EstimateUnionTest, MarkovNearExact) {
  const Markov2Model model(0.05, 0.15, 20);
  const auto e = EstimateUnion(model, {200000, 5, 3});
  EXPECT_NEAR(e.estimate, model.ExactUnion(), 4 * e.std_error);
}

TEST(EstimateUnionTest, WorkerCountDoesNotChangeResult) {
  const Markov2Model model(0.2, 0.3, 30);
  const auto one = EstimateUnion(model, {50001, 77, 1});
  for (unsigned w : {2u, 3u, 8u, 16u}) {
    const auto many = EstimateUnion(model, {50001, 77, w});
    EXPECT_EQ(many.hits, one.hits) << w;
  }
}

TEST(EstimateUnionTest, RejectsZeroTrials) {
  EXPECT_THROW(EstimateUnion(Markov2Model(0.2, 0.3, 3), {0, 1, 1}), Error);
}

}  // namespace
}  // namespace mixbound
