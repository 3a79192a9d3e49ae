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

#ifndef PRIVHP_COUNT_MIN_SKETCH_H_
#define PRIVHP_COUNT_MIN_SKETCH_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "privhp/domain.h"

namespace privhp {

// Count-Min sketch whose j x w counters start at i.i.d. Laplace(noise_scale)
// draws. Updates are linear; Query returns the minimum over rows of the key's
// bucket.
//
// Lifecycle: counters accept updates until Seal() is called, after which the
// sketch is read-only.
class PrivateCountMinSketch {
 public:
  // `seed` determines both the row hash seeds and the initial noise. A
  // `noise_scale` of 0 gives an ordinary (non-private) Count-Min sketch.
  static absl::StatusOr<PrivateCountMinSketch> Create(int depth, int width,
                                                      double noise_scale,
                                                      uint64_t seed);

  // Adds `delta` to bucket (i, h_i(key)) of every row i.
  absl::Status Update(const SubdomainIndex& key, double delta);
  double Query(const SubdomainIndex& key) const;

  void Seal() { sealed_ = true; }
  bool sealed() const { return sealed_; }

  int depth() const { return depth_; }
  int width() const { return width_; }
  double noise_scale() const { return noise_scale_; }
  size_t memory_cells() const { return counters_.size(); }

  size_t Bucket(int row, const SubdomainIndex& key) const;
  double cell(int row, int column) const {
    return counters_[static_cast<size_t>(row) * width_ + column];
  }
  std::span<const double> counters() const { return counters_; }

 private:
  PrivateCountMinSketch(int depth, int width, double noise_scale)
      : depth_(depth),
        width_(width),
        noise_scale_(noise_scale),
        counters_(static_cast<size_t>(depth) * width, 0.0),
        row_seeds_(depth) {}

  int depth_;
  int width_;
  double noise_scale_;
  std::vector<double> counters_;  // row-major, depth_ x width_
  std::vector<uint64_t> row_seeds_;
  bool sealed_ = false;
};

}  // namespace privhp

#endif  // PRIVHP_COUNT_MIN_SKETCH_H_
