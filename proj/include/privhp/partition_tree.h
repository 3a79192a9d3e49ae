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

#ifndef PRIVHP_PARTITION_TREE_H_
#define PRIVHP_PARTITION_TREE_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "privhp/domain.h"

namespace privhp {

inline constexpr int32_t kNoNode = -1;

struct PartitionNode {
  SubdomainIndex index;
  double count = 0.0;
  // Either both children are present or neither is.
  int32_t children[2] = {kNoNode, kNoNode};

  bool is_leaf() const { return children[0] == kNoNode; }
};

// Binary tree of subdomains with real-valued counts. Node 0 is the root.
// Nodes are never removed, so node ids are stable.
class PartitionTree {
 public:
  // A single root node with count 0.
  PartitionTree();

  // Complete tree of the given depth with zero counts, stored in
  // breadth-first order: the node for (level l, bits b) has id 2^l - 1 + b.
  static PartitionTree Complete(int depth);

  size_t size() const { return nodes_.size(); }
  const PartitionNode& node(int32_t id) const { return nodes_[id]; }
  PartitionNode& mutable_node(int32_t id) { return nodes_[id]; }
  const std::vector<PartitionNode>& nodes() const { return nodes_; }
  double root_count() const { return nodes_[0].count; }

  // Attaches children theta0, theta1 to leaf `id`; returns the id of theta0
  // (theta1 follows it).
  int32_t Branch(int32_t id, double count0, double count1);

  std::optional<int32_t> Find(const SubdomainIndex& index) const;

  // Leaf ids in left-to-right order.
  std::vector<int32_t> Leaves() const;
  // Largest leaf level.
  int Depth() const;

 private:
  std::vector<PartitionNode> nodes_;
};

}  // namespace privhp

#endif  // PRIVHP_PARTITION_TREE_H_
