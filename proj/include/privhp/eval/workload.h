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

// Synthetic skewed workloads for tests and benchmarks.

#ifndef PRIVHP_EVAL_WORKLOAD_H_
#define PRIVHP_EVAL_WORKLOAD_H_

#include <cstdint>
#include <vector>

#include "absl/status/statusor.h"
#include "privhp/domain.h"
#include "privhp/noise.h"

namespace privhp {

using Point = std::vector<double>;

// Zipf law over ranks 0..num_keys-1: P(rank r) proportional to (r+1)^-s.
class ZipfSampler {
 public:
  ZipfSampler(int64_t num_keys, double exponent);

  int64_t Sample(RandomStream& rng) const;
  double Probability(int64_t rank) const;
  int64_t num_keys() const { return static_cast<int64_t>(cdf_.size()); }

 private:
  std::vector<double> cdf_;
};

// A stream of `n` keys at level `key_level`, Zipf-ranked through a seeded
// random permutation of the 2^key_level cells.
std::vector<SubdomainIndex> ZipfKeys(int64_t n, int key_level,
                                     double exponent, uint64_t seed);

enum class Placement {
  // Uniform inside the key's cell on every draw.
  kUniformInCell,
  // Every occurrence of a key is the same point, fixed once per key inside
  // its cell; the stream has heavy hitters at every resolution.
  kAtom,
};

struct ZipfWorkload {
  int64_t n = 1000;
  int dimension = 1;
  int key_level = 12;
  double exponent = 1.2;
  Placement placement = Placement::kAtom;
  uint64_t seed = 1;
};

absl::StatusOr<std::vector<Point>> GenerateZipfPoints(
    const ZipfWorkload& workload);

// `n` points uniform on [0,1]^d.
std::vector<Point> GenerateUniformPoints(int64_t n, int dimension,
                                         uint64_t seed);

}  // namespace privhp

#endif  // PRIVHP_EVAL_WORKLOAD_H_
