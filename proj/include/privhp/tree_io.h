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

// Line-oriented text format for partition trees:
//
//   privhp-tree 1
//   dimension <d>
//   epsilon <e>            (optional metadata lines, any order)
//   ...
//   nodes <N>
//   <index> <count>        (N lines, preorder; root index is "-")
//
// Counts are written with 17 significant digits and read back bit-exactly.
// Blank lines and lines starting with '#' are ignored.

#ifndef PRIVHP_TREE_IO_H_
#define PRIVHP_TREE_IO_H_

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "privhp/partition_tree.h"

namespace privhp {

// Provenance stored next to a tree. Everything except `dimension` is
// informational.
struct TreeMetadata {
  int dimension = 1;
  double epsilon = 0.0;
  int k = 0;
  int depth = 0;
  int pruning_level = 0;
  int sketch_depth = 0;
  int sketch_width = 0;
  int64_t memory_cells = 0;
  int64_t items_seen = 0;
  bool noiseless = false;
};

struct StoredTree {
  TreeMetadata metadata;
  PartitionTree tree;
};

// Shortest decimal with 17 significant digits.
std::string FormatReal(double value);

absl::Status WriteTree(const PartitionTree& tree, const TreeMetadata& metadata,
                       std::ostream& out);
absl::StatusOr<StoredTree> ReadTree(std::istream& in);

absl::Status SaveTree(const PartitionTree& tree, const TreeMetadata& metadata,
                      const std::string& path);
absl::StatusOr<StoredTree> LoadTree(const std::string& path);

}  // namespace privhp

#endif  // PRIVHP_TREE_IO_H_
