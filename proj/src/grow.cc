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

#include "privhp/grow.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_format.h"

namespace privhp {

ConsistencyOutcome EnforceConsistency(double parent_count, double& count0,
                                      double& count1) {
  ConsistencyOutcome outcome;
  if (count0 < 0) {
    count0 = 0;
    outcome.clamped[0] = true;
  }
  if (count1 < 0) {
    count1 = 0;
    outcome.clamped[1] = true;
  }
  const double lambda = count0 + count1 - parent_count;
  outcome.discrepancy = lambda;
  const double half = lambda / 2;
  if (std::min(count0 - half, count1 - half) < 0) {
    outcome.reassigned = true;
    if (count0 < count1) {
      count0 = 0;
      count1 = parent_count;
    } else {
      count0 = parent_count;
      count1 = 0;
    }
    return outcome;
  }
  count0 -= half;
  // Second child as the remainder.
  count1 = std::max(0.0, parent_count - count0);
  return outcome;
}

ConsistencyOutcome EnforceConsistency(PartitionTree& tree, int32_t parent_id) {
  const PartitionNode& parent = tree.node(parent_id);
  PartitionNode& c0 = tree.mutable_node(parent.children[0]);
  PartitionNode& c1 = tree.mutable_node(parent.children[1]);
  return EnforceConsistency(parent.count, c0.count, c1.count);
}

void EnforceConsistencyDepthFirst(PartitionTree& tree, int32_t root_id) {
  std::vector<int32_t> stack = {root_id};
  while (!stack.empty()) {
    const int32_t id = stack.back();
    stack.pop_back();
    const PartitionNode& n = tree.node(id);
    if (n.is_leaf()) continue;
    EnforceConsistency(tree, id);
    stack.push_back(n.children[1]);
    stack.push_back(n.children[0]);
  }
}

double ConsistencyError(double parent_after, double exact_parent,
                        double exact0, double after0) {
  return std::fabs(after0 - exact0 - (parent_after - exact_parent) / 2);
}

std::vector<int32_t> SelectTopK(const PartitionTree& tree,
                                std::vector<int32_t> candidates, int k) {
  auto hotter = [&tree](int32_t a, int32_t b) {
    const PartitionNode& na = tree.node(a);
    const PartitionNode& nb = tree.node(b);
    if (na.count != nb.count) return na.count > nb.count;
    return na.index < nb.index;
  };
  if (static_cast<size_t>(k) < candidates.size()) {
    std::nth_element(candidates.begin(), candidates.begin() + k,
                     candidates.end(), hotter);
    candidates.resize(k);
  }
  std::sort(candidates.begin(), candidates.end(),
            [&tree](int32_t a, int32_t b) {
              return tree.node(a).index < tree.node(b).index;
            });
  return candidates;
}

absl::StatusOr<PartitionTree> GrowPartition(PartitionTree tree,
                                            int pruning_level, int depth,
                                            int k,
                                            const LevelCountSource& counts,
                                            GrowthTrace* trace) {
  if (pruning_level < 0 || pruning_level > depth || depth > kMaxLevel) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "need 0 <= L_star <= L <= %d, got L_star=%d L=%d", kMaxLevel,
        pruning_level, depth));
  }
  if (k < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("k must be >= 1, got %d", k));
  }
  std::vector<int32_t> hot = tree.Leaves();
  for (int32_t id : hot) {
    if (tree.node(id).index.level() != pruning_level) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "initial tree must be complete to level %d; leaf %s is at level %d",
          pruning_level, tree.node(id).index.ToString(),
          tree.node(id).index.level()));
    }
  }

  PartitionNode& root = tree.mutable_node(0);
  if (root.count < 0) root.count = 0;

  auto record = [trace](const ConsistencyOutcome& o) {
    if (trace == nullptr) return;
    trace->correction1 += o.clamped[0] + o.clamped[1];
    trace->correction2 += o.reassigned;
  };
  {
    std::vector<int32_t> stack = {0};
    while (!stack.empty()) {
      const int32_t id = stack.back();
      stack.pop_back();
      const PartitionNode& n = tree.node(id);
      if (n.is_leaf()) continue;
      record(EnforceConsistency(tree, id));
      stack.push_back(n.children[1]);
      stack.push_back(n.children[0]);
    }
  }

  // Leaves() is already lexicographic.
  for (int level = pruning_level + 1; level <= depth; ++level) {
    if (trace != nullptr) {
      std::vector<SubdomainIndex> indices;
      indices.reserve(hot.size());
      for (int32_t id : hot) indices.push_back(tree.node(id).index);
      trace->hot_sets.push_back(std::move(indices));
    }
    std::vector<int32_t> attached;
    attached.reserve(2 * hot.size());
    for (int32_t id : hot) {
      const SubdomainIndex index = tree.node(id).index;
      const double count0 = counts.Count(index.Child(0));
      const double count1 = counts.Count(index.Child(1));
      const int32_t first = tree.Branch(id, count0, count1);
      record(EnforceConsistency(tree, id));
      attached.push_back(first);
      attached.push_back(first + 1);
    }
    if (level < depth) hot = SelectTopK(tree, std::move(attached), k);
  }
  return tree;
}

std::vector<LevelCounts> TreeTotalAndLevels(const PartitionTree& tree) {
  const int depth = tree.Depth();
  std::vector<LevelCounts> levels(depth + 1);
  for (int l = 0; l <= depth; ++l) levels[l].level = l;
  // Preorder walk emits each level's cut in left-to-right order.
  std::vector<int32_t> stack = {0};
  while (!stack.empty()) {
    const int32_t id = stack.back();
    stack.pop_back();
    const PartitionNode& n = tree.node(id);
    const int l = n.index.level();
    const int last = n.is_leaf() ? depth : l;
    for (int level = l; level <= last; ++level) {
      levels[level].cells.emplace_back(n.index, n.count);
      levels[level].sum += n.count;
    }
    if (!n.is_leaf()) {
      stack.push_back(n.children[1]);
      stack.push_back(n.children[0]);
    }
  }
  return levels;
}

}  // namespace privhp
