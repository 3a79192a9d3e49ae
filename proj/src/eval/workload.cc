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

#include "privhp/eval/workload.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_format.h"

namespace privhp {
namespace {

std::vector<uint64_t> SeededPermutation(uint64_t size, RandomStream& rng) {
  std::vector<uint64_t> perm(size);
  std::iota(perm.begin(), perm.end(), uint64_t{0});
  for (uint64_t i = size; i > 1; --i) {
    std::swap(perm[i - 1], perm[rng.NextBelow(i)]);
  }
  return perm;
}

}  // namespace

ZipfSampler::ZipfSampler(int64_t num_keys, double exponent)
    : cdf_(static_cast<size_t>(num_keys)) {
  double total = 0;
  for (int64_t r = 0; r < num_keys; ++r) {
    total += std::pow(static_cast<double>(r + 1), -exponent);
    cdf_[r] = total;
  }
  for (double& c : cdf_) c /= total;
  cdf_.back() = 1.0;
}

int64_t ZipfSampler::Sample(RandomStream& rng) const {
  const double u = rng.NextUnit();
  return std::upper_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin();
}

double ZipfSampler::Probability(int64_t rank) const {
  return rank == 0 ? cdf_[0] : cdf_[rank] - cdf_[rank - 1];
}

std::vector<SubdomainIndex> ZipfKeys(int64_t n, int key_level,
                                     double exponent, uint64_t seed) {
  RandomStream rng(seed);
  const uint64_t cells = uint64_t{1} << key_level;
  const std::vector<uint64_t> perm = SeededPermutation(cells, rng);
  const ZipfSampler zipf(static_cast<int64_t>(cells), exponent);
  std::vector<SubdomainIndex> keys;
  keys.reserve(static_cast<size_t>(n));
  for (int64_t i = 0; i < n; ++i) {
    keys.push_back(*SubdomainIndex::Create(perm[zipf.Sample(rng)], key_level));
  }
  return keys;
}

absl::StatusOr<std::vector<Point>> GenerateZipfPoints(
    const ZipfWorkload& w) {
  if (w.key_level < 0 || w.key_level > 24) {
    return absl::InvalidArgumentError(
        absl::StrFormat("key_level must be in [0, 24], got %d", w.key_level));
  }
  absl::StatusOr<HypercubeDomain> domain = HypercubeDomain::Create(w.dimension);
  if (!domain.ok()) return domain.status();
  const std::vector<SubdomainIndex> keys =
      ZipfKeys(w.n, w.key_level, w.exponent, w.seed);
  RandomStream rng(DeriveSeed(w.seed, 1));
  auto uniform_in = [&](const SubdomainIndex& key) {
    const Box box = domain->Bounds(key);
    Point p(w.dimension);
    for (int c = 0; c < w.dimension; ++c) {
      p[c] = box.lower[c] + rng.NextUnit() * (box.upper[c] - box.lower[c]);
    }
    return p;
  };
  std::vector<Point> points;
  points.reserve(keys.size());
  absl::flat_hash_map<SubdomainIndex, Point> atoms;
  for (const SubdomainIndex& key : keys) {
    if (w.placement == Placement::kUniformInCell) {
      points.push_back(uniform_in(key));
      continue;
    }
    auto it = atoms.find(key);
    if (it == atoms.end()) it = atoms.emplace(key, uniform_in(key)).first;
    points.push_back(it->second);
  }
  return points;
}

std::vector<Point> GenerateUniformPoints(int64_t n, int dimension,
                                         uint64_t seed) {
  RandomStream rng(seed);
  std::vector<Point> points(static_cast<size_t>(n), Point(dimension));
  for (Point& p : points) {
    for (double& x : p) x = rng.NextUnit();
  }
  return points;
}

}  // namespace privhp
