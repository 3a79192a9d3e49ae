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

#include "privhp/tree_io.h"

#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"
#include "absl/strings/strip.h"

namespace privhp {
namespace {

constexpr absl::string_view kMagic = "privhp-tree";
constexpr int kVersion = 1;

absl::Status ParseError(int line, absl::string_view what) {
  return absl::InvalidArgumentError(
      absl::StrFormat("tree file line %d: %s", line, what));
}

}  // namespace

std::string FormatReal(double value) { return absl::StrFormat("%.17g", value); }

absl::Status WriteTree(const PartitionTree& tree, const TreeMetadata& metadata,
                       std::ostream& out) {
  out << kMagic << ' ' << kVersion << '\n';
  out << "dimension " << metadata.dimension << '\n';
  out << "epsilon " << FormatReal(metadata.epsilon) << '\n';
  out << "k " << metadata.k << '\n';
  out << "L " << metadata.depth << '\n';
  out << "L_star " << metadata.pruning_level << '\n';
  out << "j " << metadata.sketch_depth << '\n';
  out << "w_cells " << metadata.sketch_width << '\n';
  out << "memory_cells " << metadata.memory_cells << '\n';
  out << "items_seen " << metadata.items_seen << '\n';
  out << "noiseless " << (metadata.noiseless ? 1 : 0) << '\n';
  out << "nodes " << tree.size() << '\n';
  std::vector<int32_t> stack = {0};
  while (!stack.empty()) {
    const int32_t id = stack.back();
    stack.pop_back();
    const PartitionNode& n = tree.node(id);
    out << n.index.ToString() << ' ' << FormatReal(n.count) << '\n';
    if (!n.is_leaf()) {
      stack.push_back(n.children[1]);
      stack.push_back(n.children[0]);
    }
  }
  if (!out) return absl::DataLossError("failed writing tree");
  return absl::OkStatus();
}

absl::StatusOr<StoredTree> ReadTree(std::istream& in) {
  StoredTree stored;
  TreeMetadata& meta = stored.metadata;
  std::string line;
  int line_number = 0;
  bool header_seen = false;
  int64_t declared_nodes = -1;
  absl::flat_hash_map<SubdomainIndex, double> counts;

  while (std::getline(in, line)) {
    ++line_number;
    absl::string_view view = absl::StripAsciiWhitespace(line);
    if (view.empty() || view.front() == '#') continue;
    std::vector<absl::string_view> fields =
        absl::StrSplit(view, ' ', absl::SkipEmpty());
    if (fields.size() != 2) return ParseError(line_number, "expected 2 fields");
    const absl::string_view key = fields[0];
    const absl::string_view value = fields[1];

    if (!header_seen) {
      int version = 0;
      if (key != kMagic || !absl::SimpleAtoi(value, &version) ||
          version != kVersion) {
        return ParseError(line_number, "missing 'privhp-tree 1' header");
      }
      header_seen = true;
      continue;
    }
    if (declared_nodes >= 0) {
      absl::StatusOr<SubdomainIndex> index = SubdomainIndex::Parse(std::string_view(key.data(), key.size()));
      if (!index.ok()) return ParseError(line_number, index.status().message());
      double count = 0;
      if (!absl::SimpleAtod(value, &count)) {
        return ParseError(line_number, "bad count");
      }
      if (!counts.emplace(*index, count).second) {
        return ParseError(line_number, "duplicate node");
      }
      continue;
    }

    bool ok = true;
    int flag = 0;
    if (key == "dimension") {
      ok = absl::SimpleAtoi(value, &meta.dimension);
    } else if (key == "epsilon") {
      ok = absl::SimpleAtod(value, &meta.epsilon);
    } else if (key == "k") {
      ok = absl::SimpleAtoi(value, &meta.k);
    } else if (key == "L") {
      ok = absl::SimpleAtoi(value, &meta.depth);
    } else if (key == "L_star") {
      ok = absl::SimpleAtoi(value, &meta.pruning_level);
    } else if (key == "j") {
      ok = absl::SimpleAtoi(value, &meta.sketch_depth);
    } else if (key == "w_cells") {
      ok = absl::SimpleAtoi(value, &meta.sketch_width);
    } else if (key == "memory_cells") {
      ok = absl::SimpleAtoi(value, &meta.memory_cells);
    } else if (key == "items_seen") {
      ok = absl::SimpleAtoi(value, &meta.items_seen);
    } else if (key == "noiseless") {
      ok = absl::SimpleAtoi(value, &flag);
      meta.noiseless = flag != 0;
    } else if (key == "nodes") {
      ok = absl::SimpleAtoi(value, &declared_nodes) && declared_nodes >= 1;
    } else {
      return ParseError(line_number,
                        absl::StrFormat("unknown key '%s'", key));
    }
    if (!ok) {
      return ParseError(line_number,
                        absl::StrFormat("bad value for '%s'", key));
    }
  }
  if (!header_seen) return absl::InvalidArgumentError("empty tree file");
  if (declared_nodes < 0) {
    return absl::InvalidArgumentError("tree file has no 'nodes' section");
  }
  if (static_cast<int64_t>(counts.size()) != declared_nodes) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "tree file declares %d nodes but lists %d", declared_nodes,
        counts.size()));
  }
  auto root = counts.find(SubdomainIndex());
  if (root == counts.end()) return absl::InvalidArgumentError("missing root");

  PartitionTree& tree = stored.tree;
  tree.mutable_node(0).count = root->second;
  std::vector<int32_t> stack = {0};
  while (!stack.empty()) {
    const int32_t id = stack.back();
    stack.pop_back();
    const SubdomainIndex index = tree.node(id).index;
    if (index.level() == kMaxLevel) continue;
    auto c0 = counts.find(index.Child(0));
    auto c1 = counts.find(index.Child(1));
    if (c0 == counts.end() && c1 == counts.end()) continue;
    if (c0 == counts.end() || c1 == counts.end()) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "node %s has exactly one child", index.ToString()));
    }
    const int32_t first = tree.Branch(id, c0->second, c1->second);
    stack.push_back(first + 1);
    stack.push_back(first);
  }
  if (static_cast<int64_t>(tree.size()) != declared_nodes) {
    return absl::InvalidArgumentError(
        "tree file contains nodes whose parent is missing");
  }
  return stored;
}

absl::Status SaveTree(const PartitionTree& tree, const TreeMetadata& metadata,
                      const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    return absl::NotFoundError(
        absl::StrFormat("cannot open '%s' for writing", path));
  }
  return WriteTree(tree, metadata, out);
}

absl::StatusOr<StoredTree> LoadTree(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    return absl::NotFoundError(absl::StrFormat("cannot open '%s'", path));
  }
  return ReadTree(in);
}

}  // namespace privhp
