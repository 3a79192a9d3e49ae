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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_format.h"

namespace privhp {

absl::StatusOr<int32_t> SampleLeaf(const PartitionTree& tree,
                                   RandomStream& rng) {
  const double total = tree.root_count();
  if (!(total > 0.0)) {
    return absl::FailedPreconditionError(absl::StrFormat(
        "degenerate generator: root count is %g", total));
  }
  double u = rng.NextOpenUnit() * total;
  int32_t id = 0;
  while (!tree.node(id).is_leaf()) {
    const PartitionNode& n = tree.node(id);
    const double left = tree.node(n.children[0]).count;
    const double right = tree.node(n.children[1]).count;
    if ((left >= u && left > 0.0) || !(right > 0.0)) {
      id = n.children[0];
    } else {
      u -= left;
      id = n.children[1];
    }
  }
  return id;
}

absl::StatusOr<std::vector<double>> SampleOne(const PartitionTree& tree,
                                              const Domain& domain,
                                              RandomStream& rng) {
  absl::StatusOr<int32_t> leaf = SampleLeaf(tree, rng);
  if (!leaf.ok()) return leaf.status();
  const Box box = domain.Bounds(tree.node(*leaf).index);
  std::vector<double> point(box.lower.size());
  for (size_t c = 0; c < point.size(); ++c) {
    point[c] = box.lower[c] + rng.NextUnit() * (box.upper[c] - box.lower[c]);
    if (point[c] >= box.upper[c] && box.upper[c] < 1.0) {
      point[c] = std::nextafter(box.upper[c], box.lower[c]);
    }
  }
  return point;
}

absl::StatusOr<std::vector<std::vector<double>>> SampleMany(
    const PartitionTree& tree, const Domain& domain, int64_t m,
    RandomStream& rng) {
  if (m < 0) {
    return absl::InvalidArgumentError(
        absl::StrFormat("sample count must be >= 0, got %d", m));
  }
  std::vector<std::vector<double>> samples;
  samples.reserve(static_cast<size_t>(m));
  for (int64_t i = 0; i < m; ++i) {
    absl::StatusOr<std::vector<double>> point = SampleOne(tree, domain, rng);
    if (!point.ok()) return point.status();
    samples.push_back(*std::move(point));
  }
  return samples;
}

}  // namespace privhp
