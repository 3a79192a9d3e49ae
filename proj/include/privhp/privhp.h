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

#ifndef PRIVHP_PRIVHP_H_
#define PRIVHP_PRIVHP_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "privhp/count_min_sketch.h"
#include "privhp/domain.h"
#include "privhp/noise.h"
#include "privhp/partition_tree.h"

namespace privhp {

// Parameters of one streaming run. The text config keys are given in
// brackets.
struct PrivHpConfig {
  int dimension = 1;        // [d]
  double epsilon = 1.0;     // [epsilon]
  int k = 1;                // [k] pruning parameter
  int pruning_level = 0;    // [L_star]
  int depth = 1;            // [L]
  int sketch_depth = 1;     // [j]
  int sketch_width = 2;     // [w_cells], normally 2k
  uint64_t seed = 0;        // [seed]
  int64_t n_hint = 2;       // [n_hint] expected stream length
  bool noiseless = false;   // [noiseless] NOT private; oracle testing only
};

absl::Status ValidateConfig(const PrivHpConfig& config);

// Hypercube defaults for a stream of about `n_hint` items:
// j = ceil(log2 n), L = max(1, ceil(log2(epsilon n))),
// L_star = min(L, ceil(log2(k log2(n)^2))), w_cells = 2k.
absl::StatusOr<PrivHpConfig> DefaultConfig(int64_t n_hint, double epsilon,
                                           int k, int dimension);

// Closed-form memory: (2^(L_star+1) - 1) tree counters plus
// (L - L_star) * j * w_cells sketch cells.
int64_t MemoryCells(const PrivHpConfig& config);

// How counts below the pruning level are kept.
enum class DeepCounting {
  kPrivateSketch,
  // Exact per-cell counts in a hash map. Unbounded memory and not private;
  // for checking the growth step against exact pruning.
  kExactForTesting,
};

struct OperationCounters {
  int64_t tree_increments = 0;
  int64_t sketch_cell_updates = 0;
};

// One-pass builder: holds the complete noisy tree to L_star and one private
// sketch per level L_star+1..L, consumes the stream, then grows the released
// tree.
class PrivHp {
 public:
  static absl::StatusOr<PrivHp> Create(
      const PrivHpConfig& config,
      DeepCounting deep_counting = DeepCounting::kPrivateSketch);

  // Adds one point of [0,1]^d. Out-of-domain points are rejected and
  // counted; nothing is recorded for them.
  absl::Status Update(std::span<const double> point);

  // Closes the stream and returns the grown, consistent tree. Callable once.
  absl::StatusOr<PartitionTree> Finalize();

  const PrivHpConfig& config() const { return config_; }
  const BudgetPlan& plan() const { return plan_; }
  const Domain& domain() const { return *domain_; }
  int64_t items_seen() const { return items_seen_; }
  int64_t rejected() const { return rejected_; }
  bool finalized() const { return finalized_; }
  const OperationCounters& operation_counters() const { return ops_; }

  // Counters held: tree nodes plus sketch cells (plus map entries in exact
  // mode).
  int64_t memory_cells() const;

  // State before growth; exposed for calibration checks.
  const PartitionTree& initial_tree() const { return tree_; }
  const std::vector<PrivateCountMinSketch>& sketches() const {
    return sketches_;
  }

 private:
  PrivHp(const PrivHpConfig& config, BudgetPlan plan,
         std::unique_ptr<Domain> domain, DeepCounting deep_counting)
      : config_(config),
        plan_(std::move(plan)),
        domain_(std::move(domain)),
        deep_counting_(deep_counting) {}

  PrivHpConfig config_;
  BudgetPlan plan_;
  std::unique_ptr<Domain> domain_;
  DeepCounting deep_counting_;
  PartitionTree tree_;
  std::vector<PrivateCountMinSketch> sketches_;  // level L_star+1+i at [i]
  std::vector<absl::flat_hash_map<uint64_t, double>> exact_counts_;
  int64_t items_seen_ = 0;
  int64_t rejected_ = 0;
  bool finalized_ = false;
  OperationCounters ops_;
};

}  // namespace privhp

#endif  // PRIVHP_PRIVHP_H_
