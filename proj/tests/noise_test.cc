// Copyright 2026 The PrivHP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "privhp/noise.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "privhp/domain.h"
#include "test_util.h"

namespace privhp {
namespace {

using ::privhp::testing::StatusIs;

LevelGeometry LineGeometry(int max_level) {
  return HypercubeDomain::Create(1)->Geometry(max_level);
}

TEST(DeriveSeedTest, DeterministicAndSpread) {
  EXPECT_EQ(DeriveSeed(1, 2), DeriveSeed(1, 2));
  EXPECT_NE(DeriveSeed(1, 2), DeriveSeed(1, 3));
  EXPECT_NE(DeriveSeed(1, 2), DeriveSeed(2, 2));
  EXPECT_NE(DeriveSeed(0, 0), 0u);
}

TEST(RandomStreamTest, RangesAndReproducibility) {
  RandomStream a(5);
  RandomStream b(5);
  for (int i = 0; i < 10000; ++i) {
    const double u = a.NextOpenUnit();
    EXPECT_GT(u, 0.0);
    EXPECT_LT(u, 1.0);
    EXPECT_EQ(u, b.NextOpenUnit());
    const double v = a.NextUnit();
    EXPECT_GE(v, 0.0);
    EXPECT_LT(v, 1.0);
    b.NextUnit();
    EXPECT_LT(a.NextBelow(7), 7u);
    b.NextBelow(7);
  }
}

TEST(LaplaceTest, InverseCdfPoints) {
  EXPECT_EQ(LaplaceFromCentredUniform(3.0, 0.0), 0.0);
  EXPECT_NEAR(LaplaceFromCentredUniform(1.0, 0.25), std::log(2.0), 1e-15);
  EXPECT_NEAR(LaplaceFromCentredUniform(1.0, -0.25), -std::log(2.0), 1e-15);
  EXPECT_NEAR(LaplaceFromCentredUniform(2.0, 0.45), 2.0 * std::log(10.0),
              1e-12);
}

TEST(LaplaceTest, ZeroScaleIsNoiseless) {
  RandomStream rng(1);
  RandomStream untouched(1);
  EXPECT_EQ(SampleLaplace(0.0, rng), 0.0);
  EXPECT_EQ(rng.NextBits(), untouched.NextBits());
}

TEST(LaplaceTest, MeanAbsoluteValueIsScale) {
  RandomStream rng(2024);
  double sum_abs = 0.0;
  double sum = 0.0;
  constexpr int kDraws = 1000000;
  for (int i = 0; i < kDraws; ++i) {
    const double x = SampleLaplace(1.0, rng);
    sum_abs += std::fabs(x);
    sum += x;
  }
  EXPECT_NEAR(sum_abs / kDraws, 1.0, 0.01);
  EXPECT_NEAR(sum / kDraws, 0.0, 0.01);
}

TEST(LaplaceTest, VarianceIsTwiceScaleSquared) {
  RandomStream rng(77);
  constexpr int kDraws = 1000000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < kDraws; ++i) {
    const double x = SampleLaplace(2.0, rng);
    sum += x;
    sum_sq += x * x;
  }
  const double mean = sum / kDraws;
  EXPECT_NEAR(sum_sq / kDraws - mean * mean, 8.0, 0.1);
}

TEST(LaplaceTest, KolmogorovSmirnovAgainstAnalyticCdf) {
  constexpr int kDraws = 100000;
  constexpr double kScale = 1.5;
  RandomStream rng(31337);
  std::vector<double> xs(kDraws);
  for (double& x : xs) x = SampleLaplace(kScale, rng);
  std::sort(xs.begin(), xs.end());
  auto cdf = [](double x) {
    return x < 0 ? 0.5 * std::exp(x / kScale)
                 : 1.0 - 0.5 * std::exp(-x / kScale);
  };
  double d = 0.0;
  for (int i = 0; i < kDraws; ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, f - static_cast<double>(i) / kDraws,
                  static_cast<double>(i + 1) / kDraws - f});
  }
  // Asymptotic Kolmogorov 99% quantile.
  EXPECT_LT(d * std::sqrt(static_cast<double>(kDraws)), 1.6276);
}

TEST(AllocateBudgetTest, TwoLevelHandExample) {
  ASSERT_OK_AND_ASSIGN(BudgetPlan plan,
                       AllocateBudget(1.0, 1, 2, 1, 1, LineGeometry(2)));
  ASSERT_EQ(plan.sigmas.size(), 3u);
  // 1/(2 + sqrt(1/2)) and sqrt(1/2)/(2 + sqrt(1/2)).
  EXPECT_NEAR(plan.sigmas[0], 0.3693980625181293, 1e-12);
  EXPECT_NEAR(plan.sigmas[1], 0.3693980625181293, 1e-12);
  EXPECT_NEAR(plan.sigmas[2], 0.2612038749637415, 1e-12);
}

TEST(AllocateBudgetTest, SquareHandExample) {
  ASSERT_OK_AND_ASSIGN(HypercubeDomain square, HypercubeDomain::Create(2));
  ASSERT_OK_AND_ASSIGN(BudgetPlan plan,
                       AllocateBudget(2.0, 3, 6, 5, 3, square.Geometry(6)));
  const std::vector<double> expected = {
      0.17482481939165498, 0.17482481939165498, 0.24723963062310536,
      0.24723963062310536, 0.47877748596288017, 0.33854680700379963,
      0.33854680700379963};
  ASSERT_EQ(plan.sigmas.size(), expected.size());
  for (size_t l = 0; l < expected.size(); ++l) {
    EXPECT_NEAR(plan.sigmas[l], expected[l], 1e-12) << "level " << l;
  }
}

TEST(AllocateBudgetTest, UniformWithoutSketchLevelsOnTheLine) {
  ASSERT_OK_AND_ASSIGN(BudgetPlan plan,
                       AllocateBudget(0.8, 7, 7, 3, 2, LineGeometry(7)));
  for (double s : plan.sigmas) EXPECT_NEAR(s, 0.1, 1e-15);
}

TEST(AllocateBudgetTest, SumsToEpsilonUnderFuzzing) {
  RandomStream rng(99);
  for (int trial = 0; trial < 500; ++trial) {
    const int d = 1 + static_cast<int>(rng.NextBelow(4));
    const int depth = 1 + static_cast<int>(rng.NextBelow(30));
    const int pruning_level = static_cast<int>(rng.NextBelow(depth + 1));
    const int j = 1 + static_cast<int>(rng.NextBelow(25));
    const int k = 1 + static_cast<int>(rng.NextBelow(64));
    const double epsilon = 0.01 + 10 * rng.NextUnit();
    ASSERT_OK_AND_ASSIGN(HypercubeDomain domain, HypercubeDomain::Create(d));
    ASSERT_OK_AND_ASSIGN(
        BudgetPlan plan, AllocateBudget(epsilon, pruning_level, depth, j, k,
                                        domain.Geometry(depth)));
    double total = 0.0;
    for (double s : plan.sigmas) {
      EXPECT_GT(s, 0.0);
      total += s;
    }
    EXPECT_NEAR(total, epsilon, 1e-9 * epsilon);

    if (d >= 2) {
      for (int l = 1; l <= pruning_level; ++l) {
        EXPECT_GE(plan.sigmas[l], plan.sigmas[l - 1]);
      }
    }
  }
}

TEST(AllocateBudgetTest, RejectsBadArguments) {
  const LevelGeometry geometry = LineGeometry(4);
  EXPECT_THAT(AllocateBudget(0.0, 1, 4, 1, 1, geometry),
              StatusIs(absl::StatusCode::kInvalidArgument));
  EXPECT_THAT(AllocateBudget(INFINITY, 1, 4, 1, 1, geometry),
              StatusIs(absl::StatusCode::kInvalidArgument));
  EXPECT_THAT(AllocateBudget(1.0, 5, 4, 1, 1, geometry),
              StatusIs(absl::StatusCode::kInvalidArgument));
  EXPECT_THAT(AllocateBudget(1.0, 1, 4, 0, 1, geometry),
              StatusIs(absl::StatusCode::kInvalidArgument));
  EXPECT_THAT(AllocateBudget(1.0, 1, 4, 1, 0, geometry),
              StatusIs(absl::StatusCode::kInvalidArgument));
  EXPECT_FALSE(AllocateBudget(1.0, 1, 9, 1, 1, geometry).ok());

  LevelGeometry flat;
  flat.max_diameter.assign(5, 0.0);
  flat.total_diameter.assign(5, 0.0);
  EXPECT_THAT(AllocateBudget(1.0, 1, 4, 1, 1, flat),
              StatusIs(absl::StatusCode::kFailedPrecondition));
}

TEST(PerLevelNoiseTest, ScalesFollowTheBudget) {
  BudgetPlan plan;
  plan.epsilon = 1.0;
  plan.pruning_level = 0;
  plan.depth = 1;
  plan.sketch_depth = 4;
  plan.sigmas = {0.5, 0.5};

  LevelNoise root = PerLevelNoise(plan, 0);
  EXPECT_DOUBLE_EQ(root.scale, 2.0);
  EXPECT_EQ(root.target, NoiseTarget::kTreeCounter);

  LevelNoise deep = PerLevelNoise(plan, 1);
  EXPECT_DOUBLE_EQ(deep.scale, 8.0);
  EXPECT_EQ(deep.target, NoiseTarget::kSketchCell);

  BudgetPlan single;
  single.epsilon = 0.25;
  single.sigmas = {0.25};
  EXPECT_DOUBLE_EQ(PerLevelNoise(single, 0).scale, 4.0);

  plan.noiseless = true;
  EXPECT_EQ(PerLevelNoise(plan, 0).scale, 0.0);
  EXPECT_EQ(PerLevelNoise(plan, 1).scale, 0.0);
}

}  // namespace
}  // namespace privhp
