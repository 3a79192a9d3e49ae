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

// Exact (non-private) per-level histograms of a stream and the reference
// trees built from them. This is evaluation instrumentation: nothing here is
// used when building a private tree.

#ifndef PRIVHP_EVAL_EXACT_HIERARCHY_H_
#define PRIVHP_EVAL_EXACT_HIERARCHY_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "absl/status/statusor.h"
#include "privhp/domain.h"
#include "privhp/partition_tree.h"

namespace privhp {

class ExactHierarchy {
 public:
  // Counts `points` in every cell of levels 0..depth. Points outside the
  // domain are an error.
  static absl::StatusOr<ExactHierarchy> Build(
      const Domain& domain, std::span<const std::vector<double>> points,
      int depth);
  // Same, from keys already located at level `depth`.
  static absl::StatusOr<ExactHierarchy> FromLeafKeys(
      std::span<const SubdomainIndex> keys, int depth);

  int depth() const { return static_cast<int>(levels_.size()) - 1; }
  int64_t total() const { return total_; }
  int64_t Count(const SubdomainIndex& index) const;
  // Nonzero cells of one level.
  const absl::flat_hash_map<uint64_t, int64_t>& Level(int level) const {
    return levels_[level];
  }

 private:
  std::vector<absl::flat_hash_map<uint64_t, int64_t>> levels_;
  int64_t total_ = 0;
};

struct TailStats {
  int level = 0;
  int k = 0;
  // Sum of level-r cell counts with the k largest removed.
  int64_t tail_norm = 0;
};

absl::StatusOr<TailStats> ComputeTailStats(const ExactHierarchy& hierarchy,
                                           int level, int k);

// Exact pruning: complete to L_star, then at every level below L_star only
// the k cells with the largest exact counts (ties: lexicographically smaller
// first) among the current candidates are branched. Counts are exact.
absl::StatusOr<PartitionTree> ExactPruneTree(const ExactHierarchy& hierarchy,
                                             int k, int pruning_level,
                                             int depth);

// Complete tree to `depth` with exact counts.
absl::StatusOr<PartitionTree> FullTree(const ExactHierarchy& hierarchy,
                                       int depth);

}  // namespace privhp

#endif  // PRIVHP_EVAL_EXACT_HIERARCHY_H_
