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


#include "privhp/privhp.h"

#include <cmath>
#include <cstdint>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "privhp/grow.h"
#include "privhp/noise.h"
#include "test_util.h"

namespace privhp {
namespace {

using ::privhp::testing::StatusIs;
using ::testing::HasSubstr;

PrivHpConfig SmallConfig(bool noiseless) {
  PrivHpConfig c;
  c.dimension = 2;
  c.epsilon = 1.0;
  c.k = 2;
  c.pruning_level = 3;
  c.depth = 7;
  c.sketch_depth = 4;
  c.sketch_width = 4;
  c.seed = 42;
  c.n_hint = 1000;
  c.noiseless = noiseless;
  return c;
}

std::vector<std::vector<double>> RandomPoints(int n, int d, uint64_t seed) {
  RandomStream rng(seed);
  std::vector<std::vector<double>> points(n, std::vector<double>(d));
  for (auto& p : points) {
    for (double& x : p) x = rng.NextUnit() * rng.NextUnit();
  }
  return points;
}

TEST(DefaultConfigTest, MillionPointExample) {
  ASSERT_OK_AND_ASSIGN(PrivHpConfig c, DefaultConfig(1 << 20, 1.0, 8, 1));
  EXPECT_EQ(c.sketch_depth, 20);
  EXPECT_EQ(c.depth, 20);
  EXPECT_EQ(c.pruning_level, 12);
  EXPECT_EQ(c.sketch_width, 16);
}

TEST(DefaultConfigTest, NonPowersOfTwoRoundUp) {
  ASSERT_OK_AND_ASSIGN(PrivHpConfig c, DefaultConfig(100000, 0.5, 3, 2));
  // ceil(log2 1e5) = 17, ceil(log2 5e4) = 16, ceil(log2(3 * 16.61^2)) = 10.
  EXPECT_EQ(c.sketch_depth, 17);
  EXPECT_EQ(c.depth, 16);
  EXPECT_EQ(c.pruning_level, 10);
  EXPECT_EQ(c.sketch_width, 6);
  EXPECT_EQ(c.dimension, 2);
}

TEST(DefaultConfigTest, LargeKClampsThePruningLevel) {
  ASSERT_OK_AND_ASSIGN(PrivHpConfig c, DefaultConfig(1000, 1.0, 4096, 1));
  EXPECT_EQ(c.pruning_level, c.depth);
  ASSERT_OK_AND_ASSIGN(PrivHp privhp, PrivHp::Create(c));
  EXPECT_TRUE(privhp.sketches().empty());
}

TEST(DefaultConfigTest, RejectsTinyBudgetSizeProduct) {
  EXPECT_THAT(DefaultConfig(100, 0.015, 1, 1),
              StatusIs(absl::StatusCode::kInvalidArgument,
                       HasSubstr("too small")));
  EXPECT_FALSE(DefaultConfig(1, 1.0, 1, 1).ok());
  EXPECT_FALSE(DefaultConfig(100, -1.0, 1, 1).ok());
  EXPECT_FALSE(DefaultConfig(100, 1.0, 0, 1).ok());
  EXPECT_TRUE(DefaultConfig(2, 1.0, 1, 1).ok());
}

TEST(ValidateConfigTest, RejectsInconsistentLevels) {
  PrivHpConfig c = SmallConfig(false);
  c.pruning_level = 8;
  EXPECT_THAT(ValidateConfig(c), StatusIs(absl::StatusCode::kInvalidArgument));
  c = SmallConfig(false);
  c.sketch_width = 0;
  EXPECT_FALSE(ValidateConfig(c).ok());
  c = SmallConfig(false);
  c.dimension = 0;
  EXPECT_FALSE(ValidateConfig(c).ok());
  c = SmallConfig(false);
  c.pruning_level = 29;
  c.depth = 40;
  EXPECT_FALSE(ValidateConfig(c).ok());
  EXPECT_OK(ValidateConfig(SmallConfig(false)));
}

TEST(PrivHpTest, NoiselessInitIsAllZero) {
  PrivHpConfig c = SmallConfig(true);
  c.pruning_level = 2;
  ASSERT_OK_AND_ASSIGN(PrivHp privhp, PrivHp::Create(c));
  EXPECT_EQ(privhp.initial_tree().size(), 7u);
  for (const PartitionNode& node : privhp.initial_tree().nodes()) {
    EXPECT_EQ(node.count, 0.0);
  }
  for (const auto& sketch : privhp.sketches()) {
    for (double cell : sketch.counters()) EXPECT_EQ(cell, 0.0);
  }
  EXPECT_TRUE(privhp.plan().noiseless);
}

TEST(PrivHpTest, NoSketchesWithoutDeepLevels) {
  PrivHpConfig c = SmallConfig(false);
  c.pruning_level = c.depth;
  ASSERT_OK_AND_ASSIGN(PrivHp privhp, PrivHp::Create(c));
  EXPECT_TRUE(privhp.sketches().empty());
  EXPECT_EQ(privhp.memory_cells(), (1 << 8) - 1);
}

TEST(PrivHpTest, InitialNoiseFollowsTheBudget) {
  PrivHpConfig c = SmallConfig(false);
  c.dimension = 1;
  c.pruning_level = 12;
  c.depth = 14;
  ASSERT_OK_AND_ASSIGN(PrivHp privhp, PrivHp::Create(c));
  // Level 12 holds 4096 counters with Laplace(1/sigma_12) noise.
  double sum_abs = 0.0;
  for (int b = 0; b < 4096; ++b) {
    sum_abs += std::fabs(privhp.initial_tree().node(4095 + b).count);
  }
  const double scale = 1.0 / privhp.plan().sigmas[12];
  EXPECT_NEAR(sum_abs / 4096 / scale, 1.0, 0.06);
  ASSERT_EQ(privhp.sketches().size(), 2u);
  EXPECT_DOUBLE_EQ(privhp.sketches()[0].noise_scale(),
                   c.sketch_depth / privhp.plan().sigmas[13]);
  EXPECT_DOUBLE_EQ(privhp.sketches()[1].noise_scale(),
                   c.sketch_depth / privhp.plan().sigmas[14]);
}

TEST(PrivHpTest, MemoryMatchesClosedFormAndIgnoresStreamLength) {
  for (int pruning_level : {0, 2, 5, 7}) {
    PrivHpConfig c = SmallConfig(false);
    c.pruning_level = pruning_level;
    ASSERT_OK_AND_ASSIGN(PrivHp privhp, PrivHp::Create(c));
    const int64_t expected = ((int64_t{1} << (pruning_level + 1)) - 1) +
                             (c.depth - pruning_level) * c.sketch_depth *
                                 c.sketch_width;
    EXPECT_EQ(privhp.memory_cells(), expected);
    EXPECT_EQ(MemoryCells(c), expected);
    for (const auto& p : RandomPoints(2000, 2, 5)) ASSERT_OK(privhp.Update(p));
    EXPECT_EQ(privhp.memory_cells(), expected);
  }
}

TEST(PrivHpTest, OnePointMarksItsPath) {
  PrivHpConfig c = SmallConfig(true);
  ASSERT_OK_AND_ASSIGN(PrivHp privhp, PrivHp::Create(c));
  const std::vector<double> x = {0.6, 0.2};
  ASSERT_OK(privhp.Update(x));
  const Domain& domain = privhp.domain();
  for (const PartitionNode& node : privhp.initial_tree().nodes()) {
    const SubdomainIndex on_path = *domain.Locate(x, node.index.level());
    EXPECT_EQ(node.count, node.index == on_path ? 1.0 : 0.0)
        << node.index.ToString();
  }
  for (size_t s = 0; s < privhp.sketches().size(); ++s) {
    const SubdomainIndex key =
        *domain.Locate(x, c.pruning_level + 1 + static_cast<int>(s));
    EXPECT_EQ(privhp.sketches()[s].Query(key), 1.0);
  }
}

TEST(PrivHpTest, UpdateCostIsFixed) {
  PrivHpConfig c = SmallConfig(false);
  ASSERT_OK_AND_ASSIGN(PrivHp privhp, PrivHp::Create(c));
  const auto points = RandomPoints(500, 2, 9);
  for (const auto& p : points) ASSERT_OK(privhp.Update(p));
  EXPECT_EQ(privhp.operation_counters().tree_increments,
            500 * (c.pruning_level + 1));
  EXPECT_EQ(privhp.operation_counters().sketch_cell_updates,
            500 * (c.depth - c.pruning_level) * c.sketch_depth);
  EXPECT_EQ(privhp.items_seen(), 500);
}

TEST(PrivHpTest, RootCountsTheStream) {
  PrivHpConfig c = SmallConfig(true);
  ASSERT_OK_AND_ASSIGN(PrivHp privhp, PrivHp::Create(c));
  for (const auto& p : RandomPoints(777, 2, 1)) ASSERT_OK(privhp.Update(p));
  EXPECT_EQ(privhp.initial_tree().root_count(), 777.0);
}

TEST(PrivHpTest, RejectsOutOfDomainPoints) {
  ASSERT_OK_AND_ASSIGN(PrivHp privhp, PrivHp::Create(SmallConfig(true)));
  EXPECT_THAT(privhp.Update(std::vector<double>{1.5, 0.5}),
              StatusIs(absl::StatusCode::kOutOfRange));
  EXPECT_FALSE(privhp.Update(std::vector<double>{0.5}).ok());
  EXPECT_EQ(privhp.rejected(), 2);
  EXPECT_EQ(privhp.items_seen(), 0);
  EXPECT_EQ(privhp.initial_tree().root_count(), 0.0);
}

TEST(PrivHpTest, FinalizeOnlyOnce) {
  ASSERT_OK_AND_ASSIGN(PrivHp privhp, PrivHp::Create(SmallConfig(false)));
  ASSERT_OK(privhp.Update(std::vector<double>{0.1, 0.1}));
  ASSERT_OK(privhp.Finalize().status());
  EXPECT_TRUE(privhp.finalized());
  EXPECT_THAT(privhp.Finalize(),
              StatusIs(absl::StatusCode::kFailedPrecondition));
  EXPECT_THAT(privhp.Update(std::vector<double>{0.1, 0.1}),
              StatusIs(absl::StatusCode::kFailedPrecondition));
}

TEST(PrivHpTest, ReplacingOneElementMovesBoundedMass) {
  RandomStream rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    PrivHpConfig c = SmallConfig(true);
    auto points = RandomPoints(300, 2, 100 + trial);
    ASSERT_OK_AND_ASSIGN(PrivHp a, PrivHp::Create(c));
    ASSERT_OK_AND_ASSIGN(PrivHp b, PrivHp::Create(c));
    const size_t replaced = rng.NextBelow(points.size());
    for (size_t i = 0; i < points.size(); ++i) {
      ASSERT_OK(a.Update(points[i]));
      if (i == replaced) {
        ASSERT_OK(b.Update(std::vector<double>{rng.NextUnit(), rng.NextUnit()}));
      } else {
        ASSERT_OK(b.Update(points[i]));
      }
    }
    double tree_l1 = 0.0;
    for (size_t i = 0; i < a.initial_tree().size(); ++i) {
      tree_l1 += std::fabs(a.initial_tree().node(i).count -
                           b.initial_tree().node(i).count);
    }
    EXPECT_LE(tree_l1, 2.0 * (c.pruning_level + 1));
    for (size_t s = 0; s < a.sketches().size(); ++s) {
      double sketch_l1 = 0.0;
      for (size_t i = 0; i < a.sketches()[s].counters().size(); ++i) {
        sketch_l1 += std::fabs(a.sketches()[s].counters()[i] -
                               b.sketches()[s].counters()[i]);
      }
      EXPECT_LE(sketch_l1, 2.0 * c.sketch_depth);
    }
  }
}

TEST(PrivHpTest, EmptyNoiselessStreamGivesZeroTree) {
  PrivHpConfig c = SmallConfig(true);
  ASSERT_OK_AND_ASSIGN(PrivHp privhp, PrivHp::Create(c));
  ASSERT_OK_AND_ASSIGN(PartitionTree tree, privhp.Finalize());
  for (const PartitionNode& node : tree.nodes()) EXPECT_EQ(node.count, 0.0);
}

TEST(PrivHpTest, SinglePointWithKOneIsAPath) {
  PrivHpConfig c = SmallConfig(true);
  c.k = 1;
  c.sketch_width = 2;
  ASSERT_OK_AND_ASSIGN(PrivHp privhp, PrivHp::Create(c));
  const std::vector<double> x = {0.3, 0.9};
  ASSERT_OK(privhp.Update(x));
  ASSERT_OK_AND_ASSIGN(PartitionTree tree, privhp.Finalize());
  EXPECT_EQ(tree.Depth(), c.depth);
  for (int l = 0; l <= c.depth; ++l) {
    auto id = tree.Find(*privhp.domain().Locate(x, l));
    ASSERT_TRUE(id.has_value()) << "level " << l;
    EXPECT_EQ(tree.node(*id).count, 1.0);
  }
  double mass = 0.0;
  for (const PartitionNode& node : tree.nodes()) mass += node.count;
  EXPECT_EQ(mass, c.depth + 1.0);
}

TEST(PrivHpTest, FinalTreeIsConsistentAndReproducible) {
  for (uint64_t seed : {1u, 2u, 3u}) {
    PrivHpConfig c = SmallConfig(false);
    c.seed = seed;
    const auto points = RandomPoints(3000, 2, 77);
    ASSERT_OK_AND_ASSIGN(PrivHp a, PrivHp::Create(c));
    ASSERT_OK_AND_ASSIGN(PrivHp b, PrivHp::Create(c));
    for (const auto& p : points) {
      ASSERT_OK(a.Update(p));
      ASSERT_OK(b.Update(p));
    }
    ASSERT_OK_AND_ASSIGN(PartitionTree ta, a.Finalize());
    ASSERT_OK_AND_ASSIGN(PartitionTree tb, b.Finalize());
    ASSERT_EQ(ta.size(), tb.size());
    for (size_t i = 0; i < ta.size(); ++i) {
      EXPECT_EQ(ta.node(i).index, tb.node(i).index);
      EXPECT_EQ(ta.node(i).count, tb.node(i).count);
    }
    for (const PartitionNode& node : ta.nodes()) {
      EXPECT_GE(node.count, 0.0);
      if (node.is_leaf()) continue;
      EXPECT_NEAR(ta.node(node.children[0]).count +
                      ta.node(node.children[1]).count,
                  node.count, 1e-9 * std::max(1.0, node.count));
    }
    EXPECT_EQ(ta.Depth(), c.depth);
  }
}

TEST(PrivHpTest, DifferentSeedsGiveDifferentNoise) {
  PrivHpConfig c = SmallConfig(false);
  ASSERT_OK_AND_ASSIGN(PrivHp a, PrivHp::Create(c));
  c.seed = 43;
  ASSERT_OK_AND_ASSIGN(PrivHp b, PrivHp::Create(c));
  EXPECT_NE(a.initial_tree().root_count(), b.initial_tree().root_count());
}

TEST(PrivHpTest, ExactModeCountsDeepCellsExactly) {
  PrivHpConfig c = SmallConfig(true);
  c.k = 64;
  ASSERT_OK_AND_ASSIGN(PrivHp privhp,
                       PrivHp::Create(c, DeepCounting::kExactForTesting));
  const std::vector<double> x = {0.1, 0.2};
  const std::vector<double> y = {0.9, 0.8};
  ASSERT_OK(privhp.Update(x));
  ASSERT_OK(privhp.Update(x));
  ASSERT_OK(privhp.Update(y));
  ASSERT_OK_AND_ASSIGN(PartitionTree tree, privhp.Finalize());
  auto leaf_x = tree.Find(*privhp.domain().Locate(x, c.depth));
  auto leaf_y = tree.Find(*privhp.domain().Locate(y, c.depth));
  ASSERT_TRUE(leaf_x.has_value());
  ASSERT_TRUE(leaf_y.has_value());
  EXPECT_EQ(tree.node(*leaf_x).count, 2.0);
  EXPECT_EQ(tree.node(*leaf_y).count, 1.0);
}

}  // namespace
}  // namespace privhp
