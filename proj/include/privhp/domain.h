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

#ifndef PRIVHP_DOMAIN_H_
#define PRIVHP_DOMAIN_H_

#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"

namespace privhp {

// Deepest level representable by a SubdomainIndex.
inline constexpr int kMaxLevel = 62;
inline constexpr int kMaxDimension = 64;

// Address of a subdomain in a binary hierarchical decomposition: a bit
// sequence theta in {0,1}^l. The empty sequence is the whole domain. Bits are
// packed most-significant-first, so for two indices of the same level the
// integer order of bits() equals the lexicographic order of the sequences.
class SubdomainIndex {
 public:
  SubdomainIndex() = default;

  static absl::StatusOr<SubdomainIndex> Create(uint64_t bits, int level);
  // Accepts "" or "-" for the root, otherwise a string of '0'/'1'.
  static absl::StatusOr<SubdomainIndex> Parse(std::string_view text);

  int level() const { return level_; }
  uint64_t bits() const { return bits_; }
  bool is_root() const { return level_ == 0; }

  // Bit at position `i`, 0 being the first cut below the root.
  int bit(int i) const;

  SubdomainIndex Child(int b) const;
  SubdomainIndex Parent() const;
  // First `length` bits. Requires length <= level().
  SubdomainIndex Prefix(int length) const;
  bool IsPrefixOf(const SubdomainIndex& other) const;

  // "0110"; the root is rendered as "-".
  std::string ToString() const;

  // Orders by level, then lexicographically.
  friend std::strong_ordering operator<=>(const SubdomainIndex& a,
                                          const SubdomainIndex& b) {
    if (auto c = a.level_ <=> b.level_; c != 0) return c;
    return a.bits_ <=> b.bits_;
  }
  friend bool operator==(const SubdomainIndex&,
                         const SubdomainIndex&) = default;

  template <typename H>
  friend H AbslHashValue(H h, const SubdomainIndex& index) {
    return H::combine(std::move(h), index.bits_, index.level_);
  }

 private:
  SubdomainIndex(uint64_t bits, int level) : bits_(bits), level_(level) {}

  uint64_t bits_ = 0;
  int level_ = 0;
};

// Axis-aligned box. Cells are half-open on their upper faces except where the
// upper face is the global boundary 1.0, which belongs to the top cell.
struct Box {
  std::vector<double> lower;
  std::vector<double> upper;

  bool Contains(std::span<const double> point) const;
  std::vector<double> Center() const;
};

// Per-level diameter tables: gamma_l (largest cell diameter at level l) and
// Gamma_l (sum of cell diameters at level l).
struct LevelGeometry {
  std::vector<double> max_diameter;
  std::vector<double> total_diameter;

  int max_level() const { return static_cast<int>(max_diameter.size()) - 1; }
  // Level -1 maps to level 0.
  double MaxDiameter(int level) const;
  double TotalDiameter(int level) const;
};

// A hierarchically decomposable domain with fixed cell boundaries.
class Domain {
 public:
  virtual ~Domain() = default;

  virtual int dimension() const = 0;

  // Index of the unique level-`level` cell containing `point`.
  virtual absl::StatusOr<SubdomainIndex> Locate(std::span<const double> point,
                                                int level) const = 0;
  virtual Box Bounds(const SubdomainIndex& index) const = 0;
  virtual double Diameter(const SubdomainIndex& index) const = 0;
  virtual LevelGeometry Geometry(int max_level) const = 0;
};

// [0,1]^d under the l-infinity metric, bisected cyclically: the cut at depth
// t (0-based) halves coordinate t mod d, bit 0 selecting the lower half.
class HypercubeDomain final : public Domain {
 public:
  static absl::StatusOr<HypercubeDomain> Create(int dimension);

  int dimension() const override { return dimension_; }
  absl::StatusOr<SubdomainIndex> Locate(std::span<const double> point,
                                        int level) const override;
  Box Bounds(const SubdomainIndex& index) const override;
  double Diameter(const SubdomainIndex& index) const override;
  LevelGeometry Geometry(int max_level) const override;

  // Number of cuts applied to `coordinate` by the first `level` bits.
  int CutsOnCoordinate(int coordinate, int level) const;

 private:
  explicit HypercubeDomain(int dimension) : dimension_(dimension) {}

  int dimension_;
};

}  // namespace privhp

template <>
struct std::hash<privhp::SubdomainIndex> {
  size_t operator()(const privhp::SubdomainIndex& index) const noexcept {
    return std::hash<uint64_t>()(index.bits() * 0x9E3779B97F4A7C15ULL ^
                                 static_cast<uint64_t>(index.level()));
  }
};

#endif  // PRIVHP_DOMAIN_H_
