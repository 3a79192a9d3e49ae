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

#include "privhp/privhp.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_format.h"
#include "privhp/grow.h"

namespace privhp {
namespace {

// Largest pruning level whose complete tree still fits 32-bit node ids.
constexpr int kMaxPruningLevel = 28;

constexpr uint64_t kTreeNoiseStream = 0;
constexpr uint64_t kSketchStreamBase = 1;

int CeilLog2(double x) {
  // The small offset keeps exact powers of two from rounding up.
  return static_cast<int>(std::ceil(std::log2(x) - 1e-12));
}

class SketchCounts final : public LevelCountSource {
 public:
  SketchCounts(const std::vector<PrivateCountMinSketch>& sketches,
               int first_level)
      : sketches_(sketches), first_level_(first_level) {}

  double Count(const SubdomainIndex& index) const override {
    return sketches_[index.level() - first_level_].Query(index);
  }

 private:
  const std::vector<PrivateCountMinSketch>& sketches_;
  int first_level_;
};

class ExactCounts final : public LevelCountSource {
 public:
  ExactCounts(const std::vector<absl::flat_hash_map<uint64_t, double>>& maps,
              int first_level)
      : maps_(maps), first_level_(first_level) {}

  double Count(const SubdomainIndex& index) const override {
    const auto& map = maps_[index.level() - first_level_];
    auto it = map.find(index.bits());
    return it == map.end() ? 0.0 : it->second;
  }

 private:
  const std::vector<absl::flat_hash_map<uint64_t, double>>& maps_;
  int first_level_;
};

}  // namespace

absl::Status ValidateConfig(const PrivHpConfig& c) {
  if (c.dimension < 1 || c.dimension > kMaxDimension) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "d must be in [1, %d], got %d", kMaxDimension, c.dimension));
  }
  if (!(c.epsilon > 0.0) || !std::isfinite(c.epsilon)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("epsilon must be positive, got %g", c.epsilon));
  }
  if (c.k < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("k must be >= 1, got %d", c.k));
  }
  if (c.pruning_level < 0 || c.pruning_level > c.depth ||
      c.depth > kMaxLevel) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "need 0 <= L_star <= L <= %d, got L_star=%d L=%d", kMaxLevel,
        c.pruning_level, c.depth));
  }
  if (c.pruning_level > kMaxPruningLevel) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "L_star=%d would allocate more than 2^%d tree nodes", c.pruning_level,
        kMaxPruningLevel + 1));
  }
  if (c.sketch_depth < 1 || c.sketch_width < 1) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "sketch dimensions must be positive, got j=%d w_cells=%d",
        c.sketch_depth, c.sketch_width));
  }
  if (c.n_hint < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("n_hint must be positive, got %d", c.n_hint));
  }
  return absl::OkStatus();
}

absl::StatusOr<PrivHpConfig> DefaultConfig(int64_t n_hint, double epsilon,
                                           int k, int dimension) {
  if (n_hint < 2) {
    return absl::InvalidArgumentError(
        absl::StrFormat("n_hint must be >= 2, got %d", n_hint));
  }
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("epsilon must be positive, got %g", epsilon));
  }
  if (k < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("k must be >= 1, got %d", k));
  }
  const double n = static_cast<double>(n_hint);
  if (epsilon * n < 2.0) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "budget-size product too small for any hierarchy: epsilon * n = %g",
        epsilon * n));
  }
  PrivHpConfig config;
  config.dimension = dimension;
  config.epsilon = epsilon;
  config.k = k;
  config.n_hint = n_hint;
  config.sketch_depth = CeilLog2(n);
  config.depth = std::min(kMaxLevel, std::max(1, CeilLog2(epsilon * n)));
  const double log_n = std::log2(n);
  config.pruning_level =
      std::min({config.depth, CeilLog2(k * log_n * log_n), kMaxPruningLevel});
  config.sketch_width = 2 * k;
  if (absl::Status s = ValidateConfig(config); !s.ok()) return s;
  return config;
}

int64_t MemoryCells(const PrivHpConfig& c) {
  return ((int64_t{2} << c.pruning_level) - 1) +
         static_cast<int64_t>(c.depth - c.pruning_level) * c.sketch_depth *
             c.sketch_width;
}

absl::StatusOr<PrivHp> PrivHp::Create(const PrivHpConfig& config,
                                      DeepCounting deep_counting) {
  if (absl::Status s = ValidateConfig(config); !s.ok()) return s;
  absl::StatusOr<HypercubeDomain> cube =
      HypercubeDomain::Create(config.dimension);
  if (!cube.ok()) return cube.status();
  const LevelGeometry geometry = cube->Geometry(config.depth);
  absl::StatusOr<BudgetPlan> plan =
      AllocateBudget(config.epsilon, config.pruning_level, config.depth,
                     config.sketch_depth, config.k, geometry);
  if (!plan.ok()) return plan.status();
  plan->noiseless = config.noiseless;

  PrivHp state(config, *std::move(plan),
               std::make_unique<HypercubeDomain>(*std::move(cube)),
               deep_counting);
  state.tree_ = PartitionTree::Complete(config.pruning_level);

  RandomStream tree_rng(DeriveSeed(config.seed, kTreeNoiseStream));
  for (size_t id = 0; id < state.tree_.size(); ++id) {
    PartitionNode& node = state.tree_.mutable_node(static_cast<int32_t>(id));
    const double scale = PerLevelNoise(state.plan_, node.index.level()).scale;
    node.count = SampleLaplace(scale, tree_rng);
  }

  const int deep_levels = config.depth - config.pruning_level;
  if (deep_counting == DeepCounting::kExactForTesting) {
    state.exact_counts_.resize(deep_levels);
  } else {
    state.sketches_.reserve(deep_levels);
    for (int l = config.pruning_level + 1; l <= config.depth; ++l) {
      absl::StatusOr<PrivateCountMinSketch> sketch =
          PrivateCountMinSketch::Create(
              config.sketch_depth, config.sketch_width,
              PerLevelNoise(state.plan_, l).scale,
              DeriveSeed(config.seed, kSketchStreamBase + l));
      if (!sketch.ok()) return sketch.status();
      state.sketches_.push_back(*std::move(sketch));
    }
  }
  return state;
}

absl::Status PrivHp::Update(std::span<const double> point) {
  if (finalized_) {
    return absl::FailedPreconditionError("update after finalize");
  }
  absl::StatusOr<SubdomainIndex> leaf = domain_->Locate(point, config_.depth);
  if (!leaf.ok()) {
    ++rejected_;
    return leaf.status();
  }
  for (int l = 0; l <= config_.pruning_level; ++l) {
    const uint64_t bits = leaf->Prefix(l).bits();
    const auto id = static_cast<int32_t>((uint64_t{1} << l) - 1 + bits);
    tree_.mutable_node(id).count += 1.0;
  }
  ops_.tree_increments += config_.pruning_level + 1;
  for (int l = config_.pruning_level + 1; l <= config_.depth; ++l) {
    const int slot = l - config_.pruning_level - 1;
    const SubdomainIndex cell = leaf->Prefix(l);
    if (deep_counting_ == DeepCounting::kExactForTesting) {
      exact_counts_[slot][cell.bits()] += 1.0;
      ops_.sketch_cell_updates += 1;
    } else {
      if (absl::Status s = sketches_[slot].Update(cell, 1.0); !s.ok()) {
        return s;
      }
      ops_.sketch_cell_updates += config_.sketch_depth;
    }
  }
  ++items_seen_;
  return absl::OkStatus();
}

absl::StatusOr<PartitionTree> PrivHp::Finalize() {
  if (finalized_) return absl::FailedPreconditionError("already finalized");
  finalized_ = true;
  for (PrivateCountMinSketch& sketch : sketches_) sketch.Seal();
  const int first_deep_level = config_.pruning_level + 1;
  if (deep_counting_ == DeepCounting::kExactForTesting) {
    ExactCounts counts(exact_counts_, first_deep_level);
    return GrowPartition(tree_, config_.pruning_level, config_.depth,
                         config_.k, counts);
  }
  SketchCounts counts(sketches_, first_deep_level);
  return GrowPartition(tree_, config_.pruning_level, config_.depth, config_.k,
                       counts);
}

int64_t PrivHp::memory_cells() const {
  int64_t cells = static_cast<int64_t>(tree_.size());
  for (const PrivateCountMinSketch& s : sketches_) {
    cells += static_cast<int64_t>(s.memory_cells());
  }
  for (const auto& map : exact_counts_) {
    cells += static_cast<int64_t>(map.size());
  }
  return cells;
}

}  // namespace privhp
