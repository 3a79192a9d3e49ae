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

#ifndef PRIVHP_GROW_H_
#define PRIVHP_GROW_H_

#include <cstdint>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "privhp/domain.h"
#include "privhp/partition_tree.h"

namespace privhp {

// What EnforceConsistency did to one parent.
struct ConsistencyOutcome {
  // Correction 1: child count was negative and was clamped to 0.
  bool clamped[2] = {false, false};
  // Correction 2: the even split would have gone negative, so the smaller
  // child was zeroed and the larger took the parent's count.
  bool reassigned = false;
  // Lambda = count0 + count1 - parent, measured after correction 1.
  double discrepancy = 0.0;
};

// Makes (count0, count1) nonnegative and summing to `parent_count`, which
// must itself be nonnegative. The discrepancy is split evenly between the
// children unless that would drive one negative.
ConsistencyOutcome EnforceConsistency(double parent_count, double& count0,
                                      double& count1);
ConsistencyOutcome EnforceConsistency(PartitionTree& tree, int32_t parent_id);

// Applies EnforceConsistency to every internal node of the subtree rooted at
// `root_id`, parents before children.
void EnforceConsistencyDepthFirst(PartitionTree& tree, int32_t root_id = 0);

// Count transferred between siblings by a consistency step because of their
// own errors, excluding error inherited through the parent:
// |after0 - exact0 - (parent_after - exact_parent) / 2|. With no correction
// this equals |(err0 - err1) / 2| where err_i = before_i - exact_i.
double ConsistencyError(double parent_after, double exact_parent,
                        double exact0, double after0);

// Frequency estimates for cells below the pruning level.
class LevelCountSource {
 public:
  virtual ~LevelCountSource() = default;
  virtual double Count(const SubdomainIndex& index) const = 0;
};

// Optional record of a growth run.
struct GrowthTrace {
  // hot_sets[i] is the set branched at level pruning_level + i, in
  // lexicographic order.
  std::vector<std::vector<SubdomainIndex>> hot_sets;
  int correction1 = 0;
  int correction2 = 0;
};

// Grows `tree`, complete to `pruning_level`, down to `depth`: makes the tree
// consistent, then level by level branches every hot node with children
// counted by `counts`, enforces consistency at the hot node, and keeps the k
// largest new nodes (ties: lexicographically smaller index first) as the next
// hot set. Level pruning_level is entirely hot. A negative root count is
// clamped to 0 first.
absl::StatusOr<PartitionTree> GrowPartition(PartitionTree tree,
                                            int pruning_level, int depth,
                                            int k,
                                            const LevelCountSource& counts,
                                            GrowthTrace* trace = nullptr);

// Indices of the k largest counts among `candidates` (node ids of `tree`),
// ties broken towards the lexicographically smaller index. The result is in
// lexicographic order.
std::vector<int32_t> SelectTopK(const PartitionTree& tree,
                                std::vector<int32_t> candidates, int k);

struct LevelCounts {
  int level = 0;
  // The tree's cut at this level: nodes at `level` plus leaves above it, in
  // left-to-right order.
  std::vector<std::pair<SubdomainIndex, double>> cells;
  double sum = 0.0;
};

// One entry per level 0..Depth(). In a consistent tree every sum equals the
// root count.
std::vector<LevelCounts> TreeTotalAndLevels(const PartitionTree& tree);

}  // namespace privhp

#endif  // PRIVHP_GROW_H_
