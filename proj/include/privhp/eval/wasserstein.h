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

// 1-Wasserstein distances used to score generators.

#ifndef PRIVHP_EVAL_WASSERSTEIN_H_
#define PRIVHP_EVAL_WASSERSTEIN_H_

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "absl/status/statusor.h"
#include "privhp/domain.h"
#include "privhp/partition_tree.h"

namespace privhp {

// W1 between two empirical measures on the line, each sample weighted
// uniformly: the integral of |F_a - F_b|, evaluated exactly over the merged
// order statistics. Inputs must be sorted and nonempty.
absl::StatusOr<double> W1Exact1d(std::span<const double> sorted_a,
                                 std::span<const double> sorted_b);

// Piecewise-uniform measure on [0,1]: `mass[i]` spread evenly over
// [lower[i], upper[i]). Intervals are sorted and disjoint.
struct IntervalMeasure {
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<double> mass;
};

// The sampling distribution of a 1-D tree: one interval per leaf, masses
// normalized by the root count. Fails when the root count is not positive.
absl::StatusOr<IntervalMeasure> TreeIntervalMeasure(const PartitionTree& tree,
                                                    const Domain& domain);

// Exact W1 between the empirical measure of `sorted_points` and an interval
// measure.
absl::StatusOr<double> W1PointsToIntervals(std::span<const double> sorted_points,
                                           const IntervalMeasure& measure);

// Discrete measure on the cells of one level, keyed by cell bits.
struct CellMeasure {
  int level = 0;
  absl::flat_hash_map<uint64_t, double> mass;
};

// Upper bound on the support handled by W1LeafFlow.
inline constexpr size_t kMaxFlowSupport = 4096;

// Counts of points per level-`level` cell.
absl::StatusOr<CellMeasure> PointsCellMeasure(
    const Domain& domain, std::span<const std::vector<double>> points,
    int level);

// A tree's distribution pushed to level `level`: leaves above it spread their
// count evenly over their descendant cells, leaves below it are merged into
// their ancestor cell. Refuses to expand beyond kMaxFlowSupport cells.
absl::StatusOr<CellMeasure> TreeCellMeasure(const PartitionTree& tree,
                                            int level);

// Exact W1 under the l-infinity ground metric between two cell measures of
// the same level, each normalized to unit mass and placed at cell centers,
// solved as a min-cost transportation problem. Combined support must not
// exceed kMaxFlowSupport.
absl::StatusOr<double> W1LeafFlow(const CellMeasure& mu, const CellMeasure& nu,
                                  const Domain& domain);

// Minimum transport cost moving `supply` onto `demand` (equal totals) with
// per-unit cost `cost(i, j)`. Successive shortest paths with potentials on
// the dense bipartite graph.
double MinCostTransport(std::span<const double> supply,
                        std::span<const double> demand,
                        const std::function<double(size_t, size_t)>& cost);

}  // namespace privhp

#endif  // PRIVHP_EVAL_WASSERSTEIN_H_
