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

#include "privhp/eval/exact_hierarchy.h"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "absl/container/flat_hash_set.h"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_format.h"

namespace privhp {
namespace {

// Complete trees beyond this depth are refused.
constexpr int kMaxFullDepth = 24;

}  // namespace

absl::StatusOr<ExactHierarchy> ExactHierarchy::Build(
    const Domain& domain, std::span<const std::vector<double>> points,
    int depth) {
  std::vector<SubdomainIndex> keys;
  keys.reserve(points.size());
  for (const std::vector<double>& p : points) {
    absl::StatusOr<SubdomainIndex> key = domain.Locate(p, depth);
    if (!key.ok()) return key.status();
    keys.push_back(*key);
  }
  return FromLeafKeys(keys, depth);
}

absl::StatusOr<ExactHierarchy> ExactHierarchy::FromLeafKeys(
    std::span<const SubdomainIndex> keys, int depth) {
  if (depth < 0 || depth > kMaxLevel) {
    return absl::InvalidArgumentError(
        absl::StrFormat("depth %d outside [0, %d]", depth, kMaxLevel));
  }
  ExactHierarchy h;
  h.levels_.resize(depth + 1);
  for (const SubdomainIndex& key : keys) {
    if (key.level() != depth) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "key %s is not at level %d", key.ToString(), depth));
    }
    for (int l = 0; l <= depth; ++l) ++h.levels_[l][key.bits() >> (depth - l)];
  }
  h.total_ = static_cast<int64_t>(keys.size());
  return h;
}

int64_t ExactHierarchy::Count(const SubdomainIndex& index) const {
  if (index.level() > depth()) return 0;
  const auto& level = levels_[index.level()];
  auto it = level.find(index.bits());
  return it == level.end() ? 0 : it->second;
}

absl::StatusOr<TailStats> ComputeTailStats(const ExactHierarchy& hierarchy,
                                           int level, int k) {
  if (level < 0 || level > hierarchy.depth()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "level %d outside the histogram's range [0, %d]", level,
        hierarchy.depth()));
  }
  if (k < 0) {
    return absl::InvalidArgumentError(
        absl::StrFormat("k must be >= 0, got %d", k));
  }
  std::vector<int64_t> counts;
  counts.reserve(hierarchy.Level(level).size());
  for (const auto& [bits, count] : hierarchy.Level(level)) {
    counts.push_back(count);
  }
  std::sort(counts.begin(), counts.end(), std::greater<>());
  TailStats stats{level, k, 0};
  for (size_t i = static_cast<size_t>(k); i < counts.size(); ++i) {
    stats.tail_norm += counts[i];
  }
  return stats;
}

absl::StatusOr<PartitionTree> ExactPruneTree(const ExactHierarchy& hierarchy,
                                             int k, int pruning_level,
                                             int depth) {
  if (pruning_level < 0 || pruning_level > depth ||
      depth > hierarchy.depth()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "need 0 <= L_star <= L <= %d, got L_star=%d L=%d", hierarchy.depth(),
        pruning_level, depth));
  }
  if (pruning_level > kMaxFullDepth) {
    return absl::InvalidArgumentError("pruning level too deep");
  }
  if (k < 1) return absl::InvalidArgumentError("k must be >= 1");

  // branched[l] holds the bits of the level-l cells whose children exist.
  std::vector<absl::flat_hash_set<uint64_t>> branched(depth);
  for (int l = 0; l < std::min(pruning_level, depth); ++l) {
    for (uint64_t b = 0; b < (uint64_t{1} << l); ++b) branched[l].insert(b);
  }
  if (pruning_level < depth) {
    for (uint64_t b = 0; b < (uint64_t{1} << pruning_level); ++b) {
      branched[pruning_level].insert(b);
    }
  }
  for (int l = pruning_level + 1; l < depth; ++l) {
    std::vector<std::pair<int64_t, uint64_t>> candidates;
    for (uint64_t parent : branched[l - 1]) {
      for (uint64_t c = 0; c < 2; ++c) {
        const uint64_t bits = (parent << 1) | c;
        candidates.emplace_back(
            hierarchy.Count(*SubdomainIndex::Create(bits, l)), bits);
      }
    }
    std::sort(candidates.begin(), candidates.end(),
              [](const auto& a, const auto& b) {
                if (a.first != b.first) return a.first > b.first;
                return a.second < b.second;
              });
    const size_t keep = std::min(candidates.size(), static_cast<size_t>(k));
    for (size_t i = 0; i < keep; ++i) branched[l].insert(candidates[i].second);
  }

  PartitionTree tree;
  tree.mutable_node(0).count = static_cast<double>(hierarchy.total());
  std::vector<int32_t> stack = {0};
  while (!stack.empty()) {
    const int32_t id = stack.back();
    stack.pop_back();
    const SubdomainIndex index = tree.node(id).index;
    if (index.level() >= depth ||
        !branched[index.level()].contains(index.bits())) {
      continue;
    }
    const int32_t first =
        tree.Branch(id, static_cast<double>(hierarchy.Count(index.Child(0))),
                    static_cast<double>(hierarchy.Count(index.Child(1))));
    stack.push_back(first + 1);
    stack.push_back(first);
  }
  return tree;
}

absl::StatusOr<PartitionTree> FullTree(const ExactHierarchy& hierarchy,
                                       int depth) {
  if (depth < 0 || depth > hierarchy.depth() || depth > kMaxFullDepth) {
    return absl::InvalidArgumentError(
        absl::StrFormat("full tree depth %d not supported", depth));
  }
  PartitionTree tree = PartitionTree::Complete(depth);
  for (size_t id = 0; id < tree.size(); ++id) {
    PartitionNode& n = tree.mutable_node(static_cast<int32_t>(id));
    n.count = static_cast<double>(hierarchy.Count(n.index));
  }
  return tree;
}

}  // namespace privhp
