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


#include "privhp/sampler.h"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "boost/math/distributions/chi_squared.hpp"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "privhp/domain.h"
#include "privhp/grow.h"
#include "random_trees.h"
#include "test_util.h"

namespace privhp {
namespace {

using ::privhp::testing::RandomConsistentTree;
using ::privhp::testing::StatusIs;

SubdomainIndex P(const char* text) { return *SubdomainIndex::Parse(text); }

// Root 10 with leaves "0" = 5, "10" = 3, "11" = 2.
PartitionTree ThreeLeafTree() {
  PartitionTree tree;
  tree.mutable_node(0).count = 10.0;
  tree.Branch(0, 5.0, 5.0);
  tree.Branch(2, 3.0, 2.0);
  return tree;
}

TEST(SampleLeafTest, DegenerateTreesFail) {
  RandomStream rng(1);
  PartitionTree empty;
  EXPECT_THAT(SampleLeaf(empty, rng),
              StatusIs(absl::StatusCode::kFailedPrecondition,
                       ::testing::HasSubstr("degenerate")));
  PartitionTree negative;
  negative.mutable_node(0).count = -1.0;
  EXPECT_FALSE(SampleLeaf(negative, rng).ok());
}

TEST(SampleLeafTest, AllMassInOneLeaf) {
  PartitionTree tree;
  tree.mutable_node(0).count = 4.0;
  tree.Branch(0, 4.0, 0.0);
  const int32_t first = tree.Branch(1, 4.0, 0.0);
  HypercubeDomain domain = *HypercubeDomain::Create(2);
  const Box box = domain.Bounds(P("00"));
  RandomStream rng(5);
  for (int i = 0; i < 10000; ++i) {
    ASSERT_OK_AND_ASSIGN(int32_t leaf, SampleLeaf(tree, rng));
    EXPECT_EQ(leaf, first);
    ASSERT_OK_AND_ASSIGN(std::vector<double> x, SampleOne(tree, domain, rng));
    EXPECT_TRUE(box.Contains(x));
  }
}

TEST(SampleLeafTest, ZeroMassLeavesAreNeverChosen) {
  PartitionTree tree;
  tree.mutable_node(0).count = 1.0;
  tree.Branch(0, 0.0, 1.0);
  tree.Branch(2, 1.0, 0.0);
  RandomStream rng(8);
  for (int i = 0; i < 20000; ++i) {
    ASSERT_OK_AND_ASSIGN(int32_t leaf, SampleLeaf(tree, rng));
    EXPECT_EQ(tree.node(leaf).index, P("10"));
  }
}

void ExpectFrequencies(const PartitionTree& tree,
                       const std::vector<double>& probabilities, int draws,
                       uint64_t seed) {
  const std::vector<int32_t> leaves = tree.Leaves();
  ASSERT_EQ(leaves.size(), probabilities.size());
  absl::flat_hash_map<int32_t, int> hits;
  RandomStream rng(seed);
  for (int i = 0; i < draws; ++i) {
    ASSERT_OK_AND_ASSIGN(int32_t leaf, SampleLeaf(tree, rng));
    ++hits[leaf];
  }
  for (size_t i = 0; i < leaves.size(); ++i) {
    const double p = probabilities[i];
    const double sigma = std::sqrt(draws * p * (1 - p));
    EXPECT_NEAR(hits[leaves[i]], draws * p, 3 * sigma) << "leaf " << i;
  }
}

TEST(SampleLeafTest, BalancedTreeIsUniform) {
  PartitionTree tree = PartitionTree::Complete(3);
  for (size_t i = 0; i < tree.size(); ++i) {
    const int level = tree.node(i).index.level();
    tree.mutable_node(i).count = 8.0 / (1 << level);
  }
  ExpectFrequencies(tree, std::vector<double>(8, 0.125), 100000, 3);
}

TEST(SampleLeafTest, UnevenLeavesMatchTheirShares) {
  ExpectFrequencies(ThreeLeafTree(), {0.5, 0.3, 0.2}, 100000, 4);
}

// The walk is inverse-CDF sampling over the leaves in left-to-right order:
// fed the same uniform, it picks the same leaf as a direct categorical draw.
TEST(SampleLeafTest, WalkEqualsCategoricalInverseCdf) {
  RandomStream trees(10);
  for (int t = 0; t < 50; ++t) {
    const PartitionTree tree =
        RandomConsistentTree(trees, 1.0 + 100 * trees.NextUnit(), 60, 12);
    std::vector<std::pair<SubdomainIndex, double>> cells =
        TreeTotalAndLevels(tree).back().cells;
    const std::vector<int32_t> leaves = tree.Leaves();
    ASSERT_EQ(cells.size(), leaves.size());

    RandomStream walk(100 + t);
    RandomStream direct(100 + t);
    int agree = 0;
    constexpr int kDraws = 2000;
    for (int i = 0; i < kDraws; ++i) {
      ASSERT_OK_AND_ASSIGN(int32_t leaf, SampleLeaf(tree, walk));
      const double u = direct.NextOpenUnit() * tree.root_count();
      double cumulative = 0.0;
      size_t chosen = cells.size() - 1;
      for (size_t c = 0; c < cells.size(); ++c) {
        cumulative += cells[c].second;
        if (cells[c].second > 0 && cumulative >= u) {
          chosen = c;
          break;
        }
      }
      agree += tree.node(leaf).index == cells[chosen].first;
      EXPECT_GT(tree.node(leaf).count, 0.0);
    }
    // Rounding can move a uniform that lands on a leaf boundary.
    EXPECT_GE(agree, kDraws - 2) << "tree " << t;
  }
}

TEST(SampleManyTest, CountAndSupport) {
  HypercubeDomain domain = *HypercubeDomain::Create(3);
  RandomStream rng(2);
  PartitionTree tree = RandomConsistentTree(rng, 50.0, 40, 9);
  ASSERT_OK_AND_ASSIGN(auto none, SampleMany(tree, domain, 0, rng));
  EXPECT_TRUE(none.empty());
  EXPECT_FALSE(SampleMany(tree, domain, -1, rng).ok());
  ASSERT_OK_AND_ASSIGN(auto points, SampleMany(tree, domain, 5000, rng));
  ASSERT_EQ(points.size(), 5000u);
  for (const auto& p : points) {
    ASSERT_EQ(p.size(), 3u);
    for (double x : p) {
      EXPECT_GE(x, 0.0);
      EXPECT_LE(x, 1.0);
    }
  }
}

TEST(SampleManyTest, SameSeedSameSample) {
  HypercubeDomain domain = *HypercubeDomain::Create(2);
  PartitionTree tree = ThreeLeafTree();
  RandomStream a(77);
  RandomStream b(77);
  ASSERT_OK_AND_ASSIGN(auto first, SampleMany(tree, domain, 100, a));
  ASSERT_OK_AND_ASSIGN(auto second, SampleMany(tree, domain, 100, b));
  EXPECT_EQ(first, second);
}

TEST(SampleManyTest, LeafHistogramPassesChiSquared) {
  HypercubeDomain domain = *HypercubeDomain::Create(2);
  RandomStream rng(12);
  PartitionTree tree = RandomConsistentTree(rng, 1000.0, 30, 10);
  constexpr int kDraws = 100000;
  ASSERT_OK_AND_ASSIGN(auto points, SampleMany(tree, domain, kDraws, rng));
  const std::vector<int32_t> leaves = tree.Leaves();
  absl::flat_hash_map<SubdomainIndex, int> observed;
  for (const auto& p : points) {
    for (int32_t id : leaves) {
      if (domain.Bounds(tree.node(id).index).Contains(p)) {
        ++observed[tree.node(id).index];
        break;
      }
    }
  }
  double chi2 = 0.0;
  int cells = 0;
  for (int32_t id : leaves) {
    const double expected = kDraws * tree.node(id).count / tree.root_count();
    if (expected <= 0) {
      EXPECT_EQ(observed[tree.node(id).index], 0);
      continue;
    }
    const double diff = observed[tree.node(id).index] - expected;
    chi2 += diff * diff / expected;
    ++cells;
  }
  ASSERT_GE(cells, 2);
  boost::math::chi_squared dist(cells - 1);
  EXPECT_LT(chi2, boost::math::quantile(dist, 0.99));
}

// Sampling reads only the finished tree: the sampler's sources pull in no
// stream-side headers.
TEST(SamplerStructureTest, NoDependencyOnStreamState) {
  for (const char* file :
       {"/include/privhp/sampler.h", "/src/sampler.cc"}) {
    std::ifstream in(std::string(PRIVHP_SOURCE_DIR) + file);
    ASSERT_TRUE(in) << file;
    std::stringstream text;
    text << in.rdbuf();
    for (const char* forbidden :
         {"privhp/privhp.h", "privhp/count_min_sketch.h", "privhp/grow.h",
          "privhp/cli/", "privhp/eval/"}) {
      EXPECT_EQ(text.str().find(forbidden), std::string::npos)
          << file << " includes " << forbidden;
    }
  }
}

}  // namespace
}  // namespace privhp
