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

#include "privhp/eval/wasserstein.h"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_format.h"

namespace privhp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Integral over a segment of length `dx` of |g| where g is linear from g0 to
// g1.
double AbsLinearIntegral(double g0, double g1, double dx) {
  if ((g0 >= 0 && g1 >= 0) || (g0 <= 0 && g1 <= 0)) {
    return 0.5 * (std::fabs(g0) + std::fabs(g1)) * dx;
  }
  return 0.5 * (g0 * g0 + g1 * g1) / (std::fabs(g0) + std::fabs(g1)) * dx;
}

// Cumulative mass of an IntervalMeasure, evaluated at nondecreasing x.
class IntervalCdf {
 public:
  explicit IntervalCdf(const IntervalMeasure& m) : m_(m) {}

  double At(double x) {
    while (next_ < m_.mass.size() && m_.upper[next_] <= x) {
      before_ += m_.mass[next_];
      ++next_;
    }
    if (next_ == m_.mass.size() || x <= m_.lower[next_]) return before_;
    const double width = m_.upper[next_] - m_.lower[next_];
    return before_ + m_.mass[next_] * (x - m_.lower[next_]) / width;
  }

 private:
  const IntervalMeasure& m_;
  size_t next_ = 0;
  double before_ = 0.0;
};

}  // namespace

absl::StatusOr<double> W1Exact1d(std::span<const double> a,
                                 std::span<const double> b) {
  if (a.empty() || b.empty()) {
    return absl::InvalidArgumentError("W1 of an empty sample is undefined");
  }
  if (!std::is_sorted(a.begin(), a.end()) ||
      !std::is_sorted(b.begin(), b.end())) {
    return absl::InvalidArgumentError("W1Exact1d requires sorted samples");
  }
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  size_t i = 0;
  size_t j = 0;
  double prev = std::min(a[0], b[0]);
  double total = 0.0;
  while (i < a.size() || j < b.size()) {
    const double x = std::min(i < a.size() ? a[i] : kInf,
                              j < b.size() ? b[j] : kInf);
    total += std::fabs(i / na - j / nb) * (x - prev);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    prev = x;
  }
  return total;
}

absl::StatusOr<IntervalMeasure> TreeIntervalMeasure(const PartitionTree& tree,
                                                    const Domain& domain) {
  if (domain.dimension() != 1) {
    return absl::InvalidArgumentError("interval measures are 1-D only");
  }
  const double total = tree.root_count();
  if (!(total > 0.0)) {
    return absl::FailedPreconditionError(
        absl::StrFormat("tree has non-positive mass %g", total));
  }
  IntervalMeasure m;
  for (int32_t id : tree.Leaves()) {
    const PartitionNode& leaf = tree.node(id);
    const Box box = domain.Bounds(leaf.index);
    m.lower.push_back(box.lower[0]);
    m.upper.push_back(box.upper[0]);
    m.mass.push_back(std::max(leaf.count, 0.0) / total);
  }
  return m;
}

absl::StatusOr<double> W1PointsToIntervals(std::span<const double> points,
                                           const IntervalMeasure& measure) {
  if (points.empty()) {
    return absl::InvalidArgumentError("W1 of an empty sample is undefined");
  }
  if (!std::is_sorted(points.begin(), points.end())) {
    return absl::InvalidArgumentError("points must be sorted");
  }
  std::vector<double> breaks(points.begin(), points.end());
  breaks.insert(breaks.end(), measure.lower.begin(), measure.lower.end());
  breaks.insert(breaks.end(), measure.upper.begin(), measure.upper.end());
  breaks.push_back(std::min(0.0, points.front()));
  breaks.push_back(std::max(1.0, points.back()));
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  const double n = static_cast<double>(points.size());
  IntervalCdf cdf(measure);
  size_t seen = 0;
  double total = 0.0;
  double g_left = cdf.At(breaks[0]);
  for (size_t t = 0; t + 1 < breaks.size(); ++t) {
    while (seen < points.size() && points[seen] <= breaks[t]) ++seen;
    const double f = seen / n;
    const double g_right = cdf.At(breaks[t + 1]);
    total += AbsLinearIntegral(g_left - f, g_right - f,
                               breaks[t + 1] - breaks[t]);
    g_left = g_right;
  }
  return total;
}

absl::StatusOr<CellMeasure> PointsCellMeasure(
    const Domain& domain, std::span<const std::vector<double>> points,
    int level) {
  CellMeasure m;
  m.level = level;
  for (const std::vector<double>& p : points) {
    absl::StatusOr<SubdomainIndex> cell = domain.Locate(p, level);
    if (!cell.ok()) return cell.status();
    m.mass[cell->bits()] += 1.0;
  }
  return m;
}

absl::StatusOr<CellMeasure> TreeCellMeasure(const PartitionTree& tree,
                                            int level) {
  if (level < 0 || level > kMaxLevel) {
    return absl::InvalidArgumentError(
        absl::StrFormat("level %d outside [0, %d]", level, kMaxLevel));
  }
  const std::vector<int32_t> leaves = tree.Leaves();
  size_t expanded = 0;
  for (int32_t id : leaves) {
    const PartitionNode& leaf = tree.node(id);
    if (!(leaf.count > 0.0)) continue;
    const int spread = level - leaf.index.level();
    if (spread > 20) expanded = kMaxFlowSupport + 1;
    if (spread > 0) expanded += size_t{1} << std::min(spread, 20);
    if (expanded > kMaxFlowSupport) {
      return absl::ResourceExhaustedError(absl::StrFormat(
          "tree expands to more than %d cells at level %d; use a coarser level",
          kMaxFlowSupport, level));
    }
  }
  CellMeasure m;
  m.level = level;
  for (int32_t id : leaves) {
    const PartitionNode& leaf = tree.node(id);
    if (!(leaf.count > 0.0)) continue;
    const int l = leaf.index.level();
    if (l >= level) {
      m.mass[leaf.index.bits() >> (l - level)] += leaf.count;
      continue;
    }
    const uint64_t cells = uint64_t{1} << (level - l);
    const uint64_t base = leaf.index.bits() << (level - l);
    const double share = leaf.count / static_cast<double>(cells);
    for (uint64_t t = 0; t < cells; ++t) m.mass[base + t] += share;
  }
  return m;
}

absl::StatusOr<double> W1LeafFlow(const CellMeasure& mu, const CellMeasure& nu,
                                  const Domain& domain) {
  if (mu.level != nu.level) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "cell measures at different levels (%d vs %d)", mu.level, nu.level));
  }
  double mu_total = 0.0;
  double nu_total = 0.0;
  for (const auto& [bits, mass] : mu.mass) mu_total += std::max(mass, 0.0);
  for (const auto& [bits, mass] : nu.mass) nu_total += std::max(mass, 0.0);
  if (!(mu_total > 0.0) || !(nu_total > 0.0)) {
    return absl::InvalidArgumentError("W1 of an empty measure is undefined");
  }

  // Mass present in both measures stays in place at zero cost.
  absl::flat_hash_map<uint64_t, double> excess;
  for (const auto& [bits, mass] : mu.mass) {
    if (mass > 0.0) excess[bits] += mass / mu_total;
  }
  for (const auto& [bits, mass] : nu.mass) {
    if (mass > 0.0) excess[bits] -= mass / nu_total;
  }
  std::vector<uint64_t> sources;
  std::vector<uint64_t> sinks;
  std::vector<double> supply;
  std::vector<double> demand;
  for (const auto& [bits, delta] : excess) {
    if (delta > 0.0) {
      sources.push_back(bits);
    } else if (delta < 0.0) {
      sinks.push_back(bits);
    }
  }
  if (sources.size() + sinks.size() > kMaxFlowSupport) {
    return absl::ResourceExhaustedError(absl::StrFormat(
        "transport support %d exceeds %d cells; use a coarser level",
        sources.size() + sinks.size(), kMaxFlowSupport));
  }
  if (sources.empty() || sinks.empty()) return 0.0;
  // Deterministic ordering independent of hash iteration.
  std::sort(sources.begin(), sources.end());
  std::sort(sinks.begin(), sinks.end());
  for (uint64_t bits : sources) supply.push_back(excess[bits]);
  for (uint64_t bits : sinks) demand.push_back(-excess[bits]);

  auto centers = [&](const std::vector<uint64_t>& cells) {
    std::vector<std::vector<double>> out;
    out.reserve(cells.size());
    for (uint64_t bits : cells) {
      out.push_back(
          domain.Bounds(*SubdomainIndex::Create(bits, mu.level)).Center());
    }
    return out;
  };
  const auto source_centers = centers(sources);
  const auto sink_centers = centers(sinks);
  auto cost = [&](size_t i, size_t j) {
    double d = 0.0;
    for (size_t c = 0; c < source_centers[i].size(); ++c) {
      d = std::max(d, std::fabs(source_centers[i][c] - sink_centers[j][c]));
    }
    return d;
  };
  return MinCostTransport(supply, demand, cost);
}

double MinCostTransport(std::span<const double> supply,
                        std::span<const double> demand,
                        const std::function<double(size_t, size_t)>& cost) {
  const size_t n = supply.size();
  const size_t m = demand.size();
  const size_t v_count = n + m;
  std::vector<double> rem_supply(supply.begin(), supply.end());
  std::vector<double> rem_demand(demand.begin(), demand.end());
  double total = 0.0;
  for (double s : supply) total += s;
  const double tol = 1e-13 * std::max(total, 1.0);

  // Dense cost matrix; supports are bounded by kMaxFlowSupport.
  std::vector<double> c(n * m);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < m; ++j) c[i * m + j] = cost(i, j);
  }
  // flow_in[j] lists sources with positive flow into sink j.
  std::vector<absl::flat_hash_map<size_t, double>> flow_in(m);
  std::vector<double> potential(v_count, 0.0);
  std::vector<double> dist(v_count);
  std::vector<int64_t> prev(v_count);
  std::vector<char> done(v_count);

  const size_t max_rounds = 64 * v_count + 1024;
  for (size_t round = 0; round < max_rounds; ++round) {
    bool any_supply = false;
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(prev.begin(), prev.end(), -1);
    std::fill(done.begin(), done.end(), 0);
    for (size_t i = 0; i < n; ++i) {
      if (rem_supply[i] > tol) {
        dist[i] = 0.0;
        any_supply = true;
      }
    }
    if (!any_supply) break;

    int64_t target = -1;
    while (true) {
      size_t u = v_count;
      double best = kInf;
      for (size_t v = 0; v < v_count; ++v) {
        if (!done[v] && dist[v] < best) {
          best = dist[v];
          u = v;
        }
      }
      if (u == v_count) break;
      done[u] = 1;
      if (u >= n && rem_demand[u - n] > tol) {
        target = static_cast<int64_t>(u);
        break;
      }
      if (u < n) {
        for (size_t j = 0; j < m; ++j) {
          const size_t v = n + j;
          if (done[v]) continue;
          const double rc =
              std::max(0.0, c[u * m + j] + potential[u] - potential[v]);
          if (dist[u] + rc < dist[v]) {
            dist[v] = dist[u] + rc;
            prev[v] = static_cast<int64_t>(u);
          }
        }
      } else {
        const size_t j = u - n;
        for (const auto& [i, f] : flow_in[j]) {
          if (done[i] || f <= tol) continue;
          const double rc =
              std::max(0.0, -c[i * m + j] + potential[u] - potential[i]);
          if (dist[u] + rc < dist[i]) {
            dist[i] = dist[u] + rc;
            prev[i] = static_cast<int64_t>(u);
          }
        }
      }
    }
    if (target < 0) break;

    const double reach = dist[target];
    for (size_t v = 0; v < v_count; ++v) {
      potential[v] += std::min(dist[v], reach);
    }

    double amount = rem_demand[target - n];
    int64_t v = target;
    while (prev[v] >= 0) {
      const int64_t u = prev[v];
      if (u >= static_cast<int64_t>(n)) {
        amount = std::min(amount, flow_in[u - n][v]);
      }
      v = u;
    }
    amount = std::min(amount, rem_supply[v]);
    const int64_t origin = v;

    v = target;
    while (prev[v] >= 0) {
      const int64_t u = prev[v];
      if (u < static_cast<int64_t>(n)) {
        flow_in[v - n][u] += amount;
      } else {
        auto it = flow_in[u - n].find(v);
        it->second -= amount;
        if (it->second <= tol) flow_in[u - n].erase(it);
      }
      v = u;
    }
    rem_supply[origin] -= amount;
    rem_demand[target - n] -= amount;
  }

  double result = 0.0;
  for (size_t j = 0; j < m; ++j) {
    for (const auto& [i, f] : flow_in[j]) result += f * c[i * m + j];
  }
  return result;
}

}  // namespace privhp
