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

#include "privhp/count_min_sketch.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_format.h"
#include "privhp/noise.h"

namespace privhp {
namespace {

// Seed streams under the sketch's master seed.
constexpr uint64_t kNoiseStream = 0;
constexpr uint64_t kHashStreamBase = 1;

uint64_t Mix(uint64_t x) {
  x ^= x >> 33;
  x *= 0xFF51AFD7ED558CCDULL;
  x ^= x >> 33;
  x *= 0xC4CEB9FE1A85EC53ULL;
  x ^= x >> 33;
  return x;
}

}  // namespace

absl::StatusOr<PrivateCountMinSketch> PrivateCountMinSketch::Create(
    int depth, int width, double noise_scale, uint64_t seed) {
  if (depth < 1 || width < 1) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "sketch dimensions must be positive, got j=%d w=%d", depth, width));
  }
  if (!(noise_scale >= 0.0) || !std::isfinite(noise_scale)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("invalid noise scale %g", noise_scale));
  }
  PrivateCountMinSketch sketch(depth, width, noise_scale);
  for (int i = 0; i < depth; ++i) {
    sketch.row_seeds_[i] = DeriveSeed(seed, kHashStreamBase + i);
  }
  if (noise_scale > 0.0) {
    RandomStream rng(DeriveSeed(seed, kNoiseStream));
    for (double& c : sketch.counters_) c = SampleLaplace(noise_scale, rng);
  }
  return sketch;
}

size_t PrivateCountMinSketch::Bucket(int row,
                                     const SubdomainIndex& key) const {
  const uint64_t h = Mix(key.bits() ^ row_seeds_[row]) +
                     static_cast<uint64_t>(key.level()) * 0x9E3779B97F4A7C15ULL;
  return static_cast<size_t>(Mix(h) % static_cast<uint64_t>(width_));
}

absl::Status PrivateCountMinSketch::Update(const SubdomainIndex& key,
                                           double delta) {
  if (sealed_) {
    return absl::FailedPreconditionError("update on a sealed sketch");
  }
  for (int i = 0; i < depth_; ++i) {
    counters_[static_cast<size_t>(i) * width_ + Bucket(i, key)] += delta;
  }
  return absl::OkStatus();
}

double PrivateCountMinSketch::Query(const SubdomainIndex& key) const {
  double estimate = std::numeric_limits<double>::infinity();
  for (int i = 0; i < depth_; ++i) {
    estimate = std::min(estimate, cell(i, static_cast<int>(Bucket(i, key))));
  }
  return estimate;
}

}  // namespace privhp
