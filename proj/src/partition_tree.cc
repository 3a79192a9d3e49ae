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

#include "privhp/partition_tree.h"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

namespace privhp {

PartitionTree::PartitionTree() : nodes_(1) {}

PartitionTree PartitionTree::Complete(int depth) {
  PartitionTree tree;
  tree.nodes_.reserve((size_t{2} << depth) - 1);
  // Branching in id order yields breadth-first layout.
  const size_t internal = (size_t{1} << depth) - 1;
  for (size_t id = 0; id < internal; ++id) {
    tree.Branch(static_cast<int32_t>(id), 0.0, 0.0);
  }
  return tree;
}

int32_t PartitionTree::Branch(int32_t id, double count0, double count1) {
  const auto first = static_cast<int32_t>(nodes_.size());
  const SubdomainIndex parent = nodes_[id].index;
  nodes_.push_back(PartitionNode{parent.Child(0), count0});
  nodes_.push_back(PartitionNode{parent.Child(1), count1});
  nodes_[id].children[0] = first;
  nodes_[id].children[1] = first + 1;
  return first;
}

std::optional<int32_t> PartitionTree::Find(const SubdomainIndex& index) const {
  int32_t id = 0;
  for (int t = 0; t < index.level(); ++t) {
    if (nodes_[id].is_leaf()) return std::nullopt;
    id = nodes_[id].children[index.bit(t)];
  }
  return id;
}

std::vector<int32_t> PartitionTree::Leaves() const {
  std::vector<int32_t> leaves;
  std::vector<int32_t> stack = {0};
  while (!stack.empty()) {
    const int32_t id = stack.back();
    stack.pop_back();
    const PartitionNode& n = nodes_[id];
    if (n.is_leaf()) {
      leaves.push_back(id);
    } else {
      stack.push_back(n.children[1]);
      stack.push_back(n.children[0]);
    }
  }
  return leaves;
}

int PartitionTree::Depth() const {
  int depth = 0;
  for (const PartitionNode& n : nodes_) depth = std::max(depth, n.index.level());
  return depth;
}

}  // namespace privhp
