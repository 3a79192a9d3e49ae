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

#include "privhp/noise.h"

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_format.h"
#include "privhp/domain.h"

namespace privhp {

uint64_t DeriveSeed(uint64_t master, uint64_t stream) {
  uint64_t z = master + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double RandomStream::NextOpenUnit() {
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::NextUnit() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

uint64_t RandomStream::NextBelow(uint64_t n) {
  // Rejection keeps the result exactly uniform.
  const uint64_t limit = std::numeric_limits<uint64_t>::max() -
                         std::numeric_limits<uint64_t>::max() % n;
  uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

double LaplaceFromCentredUniform(double scale, double u) {
  if (u == 0.0) return 0.0;
  const double magnitude = -scale * std::log1p(-2.0 * std::fabs(u));
  return u > 0 ? magnitude : -magnitude;
}

double SampleLaplace(double scale, RandomStream& rng) {
  if (scale == 0.0) return 0.0;
  return LaplaceFromCentredUniform(scale, rng.NextOpenUnit() - 0.5);
}

absl::StatusOr<BudgetPlan> AllocateBudget(double epsilon, int pruning_level,
                                          int depth, int sketch_depth, int k,
                                          const LevelGeometry& geometry) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("epsilon must be positive and finite, got %g",
                        epsilon));
  }
  if (pruning_level < 0 || pruning_level > depth) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "need 0 <= L_star <= L, got L_star=%d L=%d", pruning_level, depth));
  }
  if (sketch_depth < 1 || k < 1) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "sketch depth and k must be >= 1, got j=%d k=%d", sketch_depth, k));
  }
  if (geometry.max_level() < depth) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "geometry covers %d levels, need %d", geometry.max_level(), depth));
  }

  std::vector<double> weights(depth + 1);
  double total = 0.0;
  for (int l = 0; l <= depth; ++l) {
    const double w =
        l <= pruning_level
            ? std::sqrt(geometry.TotalDiameter(l - 1))
            : std::sqrt(static_cast<double>(sketch_depth) * k *
                        geometry.MaxDiameter(l - 1));
    if (!(w > 0.0) || !std::isfinite(w)) {
      return absl::FailedPreconditionError(absl::StrFormat(
          "degenerate geometry: level %d has weight %g", l, w));
    }
    weights[l] = w;
    total += w;
  }

  BudgetPlan plan;
  plan.epsilon = epsilon;
  plan.pruning_level = pruning_level;
  plan.depth = depth;
  plan.sketch_depth = sketch_depth;
  plan.k = k;
  plan.sigmas.resize(depth + 1);
  for (int l = 0; l <= depth; ++l) {
    plan.sigmas[l] = epsilon * weights[l] / total;
  }
  return plan;
}

LevelNoise PerLevelNoise(const BudgetPlan& plan, int level) {
  LevelNoise noise;
  noise.target = level <= plan.pruning_level ? NoiseTarget::kTreeCounter
                                             : NoiseTarget::kSketchCell;
  if (plan.noiseless) return noise;
  const double sensitivity =
      noise.target == NoiseTarget::kTreeCounter ? 1.0 : plan.sketch_depth;
  noise.scale = sensitivity / plan.sigmas[level];
  return noise;
}

}  // namespace privhp
