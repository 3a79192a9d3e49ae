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

#ifndef PRIVHP_SAMPLER_H_
#define PRIVHP_SAMPLER_H_

#include <cstdint>
#include <vector>

#include "absl/status/statusor.h"
#include "privhp/domain.h"
#include "privhp/noise.h"
#include "privhp/partition_tree.h"

namespace privhp {

// Synthetic-data generation from a released tree.

// Root-to-leaf inverse-CDF walk: u ~ U(0, root count]; at each node go left
// when the left child's count is >= u, otherwise go right with u reduced by
// the left child's count. Returns the leaf's node id. Fails when the root
// count is not positive.
absl::StatusOr<int32_t> SampleLeaf(const PartitionTree& tree,
                                   RandomStream& rng);

// A point drawn uniformly from the box of a leaf chosen by SampleLeaf.
absl::StatusOr<std::vector<double>> SampleOne(const PartitionTree& tree,
                                              const Domain& domain,
                                              RandomStream& rng);

absl::StatusOr<std::vector<std::vector<double>>> SampleMany(
    const PartitionTree& tree, const Domain& domain, int64_t m,
    RandomStream& rng);

}  // namespace privhp

#endif  // PRIVHP_SAMPLER_H_
