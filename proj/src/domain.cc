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

#include "privhp/domain.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_format.h"

namespace privhp {

absl::StatusOr<SubdomainIndex> SubdomainIndex::Create(uint64_t bits,
                                                      int level) {
  if (level < 0 || level > kMaxLevel) {
    return absl::InvalidArgumentError(
        absl::StrFormat("level %d outside [0, %d]", level, kMaxLevel));
  }
  if (level < 64 && (bits >> level) != 0) {
    return absl::InvalidArgumentError(
        absl::StrFormat("bits 0x%x do not fit in %d levels", bits, level));
  }
  return SubdomainIndex(bits, level);
}

absl::StatusOr<SubdomainIndex> SubdomainIndex::Parse(std::string_view text) {
  if (text == "-") text = "";
  if (text.size() > static_cast<size_t>(kMaxLevel)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("index '%s' deeper than %d levels", std::string(text), kMaxLevel));
  }
  uint64_t bits = 0;
  for (char c : text) {
    if (c != '0' && c != '1') {
      return absl::InvalidArgumentError(
          absl::StrFormat("index '%s' contains a non-binary digit", std::string(text)));
    }
    bits = (bits << 1) | static_cast<uint64_t>(c - '0');
  }
  return SubdomainIndex(bits, static_cast<int>(text.size()));
}

int SubdomainIndex::bit(int i) const {
  return static_cast<int>((bits_ >> (level_ - 1 - i)) & 1u);
}

SubdomainIndex SubdomainIndex::Child(int b) const {
  return SubdomainIndex((bits_ << 1) | static_cast<uint64_t>(b & 1),
                        level_ + 1);
}

SubdomainIndex SubdomainIndex::Parent() const {
  return SubdomainIndex(bits_ >> 1, level_ - 1);
}

SubdomainIndex SubdomainIndex::Prefix(int length) const {
  return SubdomainIndex(bits_ >> (level_ - length), length);
}

bool SubdomainIndex::IsPrefixOf(const SubdomainIndex& other) const {
  return level_ <= other.level_ && other.Prefix(level_) == *this;
}

std::string SubdomainIndex::ToString() const {
  if (level_ == 0) return "-";
  std::string out(level_, '0');
  for (int i = 0; i < level_; ++i) {
    if (bit(i)) out[i] = '1';
  }
  return out;
}

bool Box::Contains(std::span<const double> point) const {
  if (point.size() != lower.size()) return false;
  for (size_t c = 0; c < point.size(); ++c) {
    const double x = point[c];
    if (x < lower[c]) return false;
    if (x < upper[c]) continue;
    if (!(x == upper[c] && upper[c] == 1.0)) return false;
  }
  return true;
}

std::vector<double> Box::Center() const {
  std::vector<double> center(lower.size());
  for (size_t c = 0; c < lower.size(); ++c) {
    center[c] = 0.5 * (lower[c] + upper[c]);
  }
  return center;
}

double LevelGeometry::MaxDiameter(int level) const {
  return max_diameter[std::max(level, 0)];
}

double LevelGeometry::TotalDiameter(int level) const {
  return total_diameter[std::max(level, 0)];
}

absl::StatusOr<HypercubeDomain> HypercubeDomain::Create(int dimension) {
  if (dimension < 1 || dimension > kMaxDimension) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "dimension must be in [1, %d], got %d", kMaxDimension, dimension));
  }
  return HypercubeDomain(dimension);
}

int HypercubeDomain::CutsOnCoordinate(int coordinate, int level) const {
  if (level <= coordinate) return 0;
  return (level - 1 - coordinate) / dimension_ + 1;
}

absl::StatusOr<SubdomainIndex> HypercubeDomain::Locate(
    std::span<const double> point, int level) const {
  if (static_cast<int>(point.size()) != dimension_) {
    return absl::InvalidArgumentError(
        absl::StrFormat("point has %d coordinates, domain dimension is %d",
                        point.size(), dimension_));
  }
  if (level < 0 || level > kMaxLevel) {
    return absl::InvalidArgumentError(
        absl::StrFormat("level %d outside [0, %d]", level, kMaxLevel));
  }
  // Cell index along each coordinate at the resolution that coordinate has
  // reached by `level`.
  uint64_t cells[kMaxDimension];
  int cuts[kMaxDimension];
  for (int c = 0; c < dimension_; ++c) {
    const double x = point[c];
    if (!(x >= 0.0 && x <= 1.0)) {
      return absl::OutOfRangeError(absl::StrFormat(
          "coordinate %d = %g lies outside [0, 1]", c, x));
    }
    cuts[c] = CutsOnCoordinate(c, level);
    const uint64_t resolution = uint64_t{1} << cuts[c];
    const auto cell = static_cast<uint64_t>(std::ldexp(x, cuts[c]));
    cells[c] = std::min(cell, resolution - 1);
  }
  uint64_t bits = 0;
  for (int t = 0; t < level; ++t) {
    const int c = t % dimension_;
    const int position = t / dimension_;
    bits = (bits << 1) | ((cells[c] >> (cuts[c] - 1 - position)) & 1u);
  }
  return *SubdomainIndex::Create(bits, level);
}

Box HypercubeDomain::Bounds(const SubdomainIndex& index) const {
  std::vector<uint64_t> cells(dimension_, 0);
  for (int t = 0; t < index.level(); ++t) {
    const int c = t % dimension_;
    cells[c] = (cells[c] << 1) | static_cast<uint64_t>(index.bit(t));
  }
  Box box{std::vector<double>(dimension_), std::vector<double>(dimension_)};
  for (int c = 0; c < dimension_; ++c) {
    const int m = CutsOnCoordinate(c, index.level());
    box.lower[c] = std::ldexp(static_cast<double>(cells[c]), -m);
    box.upper[c] = std::ldexp(static_cast<double>(cells[c] + 1), -m);
  }
  return box;
}

double HypercubeDomain::Diameter(const SubdomainIndex& index) const {
  return std::ldexp(1.0, -(index.level() / dimension_));
}

LevelGeometry HypercubeDomain::Geometry(int max_level) const {
  LevelGeometry geometry;
  geometry.max_diameter.resize(max_level + 1);
  geometry.total_diameter.resize(max_level + 1);
  for (int l = 0; l <= max_level; ++l) {
    geometry.max_diameter[l] = std::ldexp(1.0, -(l / dimension_));
    geometry.total_diameter[l] = std::ldexp(geometry.max_diameter[l], l);
  }
  return geometry;
}

}  // namespace privhp
