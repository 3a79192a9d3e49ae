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


// Trial drivers shared by the benchmark command and the acceptance checks.
// Everything here reads the raw stream without privacy; it is measurement.

#ifndef PRIVHP_EVAL_EXPERIMENT_H_
#define PRIVHP_EVAL_EXPERIMENT_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "privhp/domain.h"
#include "privhp/eval/report.h"
#include "privhp/eval/workload.h"
#include "privhp/partition_tree.h"
#include "privhp/privhp.h"

namespace privhp {

struct W1Result {
  double w1 = 0.0;
  W1Method method = W1Method::kExact1d;
  double slack = 0.0;
};

// W1 between the empirical measure of `points` and the sampling distribution
// of `tree`. Exact in 1-D; otherwise a leaf flow at level
// min(tree depth, flow_level).
absl::StatusOr<W1Result> TreeUtility(const Domain& domain,
                                     std::span<const Point> points,
                                     const PartitionTree& tree,
                                     int flow_level);

// W1 between two point sets, exact in 1-D, leaf flow at `flow_level`
// otherwise.
absl::StatusOr<W1Result> SampleUtility(const Domain& domain,
                                       std::span<const Point> a,
                                       std::span<const Point> b,
                                       int flow_level);

// Streams `points` through a fresh PrivHp and finalizes it.
struct BuiltTree {
  PartitionTree tree;
  int64_t memory_cells = 0;
  int64_t rejected = 0;
};
absl::StatusOr<BuiltTree> BuildTree(
    const PrivHpConfig& config, std::span<const Point> points,
    DeepCounting deep_counting = DeepCounting::kPrivateSketch);

// The no-pruning baseline: complete private tree to depth L, no sketches.
PrivHpConfig NoPruningConfig(const PrivHpConfig& config);

// Runs `trials` independent builds of `config`, trial t seeded with
// DeriveSeed(master_seed, t), on up to `threads` threads. Results are in
// trial order and do not depend on the thread count.
absl::StatusOr<std::vector<W1Result>> RunTrials(const PrivHpConfig& config,
                                                std::span<const Point> points,
                                                int trials,
                                                uint64_t master_seed,
                                                int flow_level, int threads);

struct Summary {
  double mean = 0.0;
  // Standard error of the mean; 0 for fewer than two values.
  double stderr_mean = 0.0;
};
Summary Summarize(std::span<const double> values);

struct BoundCheck {
  double lhs = 0.0;    // measured W1(empirical, exact pruned tree)
  double rhs = 0.0;    // tail_k^L / n * sum_{l=L_star+1}^{L-1} gamma_l
  double slack = 0.0;  // gamma_L plus evaluator slack
  bool holds() const { return lhs <= rhs + slack; }
};

// Builds the exactly pruned tree of `points` and compares its utility with
// the constant-free tail bound. Requires L <= 12 when d >= 2.
absl::StatusOr<BoundCheck> TailBoundCheck(const Domain& domain,
                                          std::span<const Point> points,
                                          int k, int pruning_level,
                                          int depth);

}  // namespace privhp

#endif  // PRIVHP_EVAL_EXPERIMENT_H_
