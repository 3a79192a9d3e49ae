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


#include "privhp/eval/experiment.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <span>
#include <thread>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_format.h"
#include "privhp/eval/exact_hierarchy.h"
#include "privhp/eval/wasserstein.h"
#include "privhp/noise.h"

namespace privhp {
namespace {

std::vector<double> SortedFirstCoordinate(std::span<const Point> points) {
  std::vector<double> xs;
  xs.reserve(points.size());
  for (const Point& p : points) xs.push_back(p[0]);
  std::sort(xs.begin(), xs.end());
  return xs;
}

double LevelDiameter(const Domain& domain, int level) {
  return domain.Diameter(*SubdomainIndex::Create(0, level));
}

}  // namespace

absl::StatusOr<W1Result> TreeUtility(const Domain& domain,
                                     std::span<const Point> points,
                                     const PartitionTree& tree,
                                     int flow_level) {
  if (points.empty()) {
    return absl::InvalidArgumentError("utility of an empty stream");
  }
  if (domain.dimension() == 1) {
    absl::StatusOr<IntervalMeasure> measure = TreeIntervalMeasure(tree, domain);
    if (!measure.ok()) return measure.status();
    const std::vector<double> xs = SortedFirstCoordinate(points);
    absl::StatusOr<double> w1 = W1PointsToIntervals(xs, *measure);
    if (!w1.ok()) return w1.status();
    return W1Result{*w1, W1Method::kExact1d, 0.0};
  }
  const int level = std::min(tree.Depth(), flow_level);
  absl::StatusOr<CellMeasure> mu = PointsCellMeasure(domain, points, level);
  if (!mu.ok()) return mu.status();
  absl::StatusOr<CellMeasure> nu = TreeCellMeasure(tree, level);
  if (!nu.ok()) return nu.status();
  absl::StatusOr<double> w1 = W1LeafFlow(*mu, *nu, domain);
  if (!w1.ok()) return w1.status();
  return W1Result{*w1, W1Method::kLeafFlow, LevelDiameter(domain, level)};
}

absl::StatusOr<W1Result> SampleUtility(const Domain& domain,
                                       std::span<const Point> a,
                                       std::span<const Point> b,
                                       int flow_level) {
  if (a.empty() || b.empty()) {
    return absl::InvalidArgumentError("utility of an empty sample");
  }
  if (domain.dimension() == 1) {
    absl::StatusOr<double> w1 =
        W1Exact1d(SortedFirstCoordinate(a), SortedFirstCoordinate(b));
    if (!w1.ok()) return w1.status();
    return W1Result{*w1, W1Method::kExact1d, 0.0};
  }
  absl::StatusOr<CellMeasure> mu = PointsCellMeasure(domain, a, flow_level);
  if (!mu.ok()) return mu.status();
  absl::StatusOr<CellMeasure> nu = PointsCellMeasure(domain, b, flow_level);
  if (!nu.ok()) return nu.status();
  absl::StatusOr<double> w1 = W1LeafFlow(*mu, *nu, domain);
  if (!w1.ok()) return w1.status();
  return W1Result{*w1, W1Method::kLeafFlow, LevelDiameter(domain, flow_level)};
}

absl::StatusOr<BuiltTree> BuildTree(const PrivHpConfig& config,
                                    std::span<const Point> points,
                                    DeepCounting deep_counting) {
  absl::StatusOr<PrivHp> privhp = PrivHp::Create(config, deep_counting);
  if (!privhp.ok()) return privhp.status();
  for (const Point& p : points) {
    absl::Status s = privhp->Update(p);
    if (!s.ok() && !absl::IsOutOfRange(s)) return s;
  }
  absl::StatusOr<PartitionTree> tree = privhp->Finalize();
  if (!tree.ok()) return tree.status();
  return BuiltTree{*std::move(tree), privhp->memory_cells(),
                   privhp->rejected()};
}

PrivHpConfig NoPruningConfig(const PrivHpConfig& config) {
  PrivHpConfig baseline = config;
  baseline.pruning_level = config.depth;
  baseline.k = config.depth >= 31 ? (1 << 30) : (1 << (config.depth - 1));
  return baseline;
}

absl::StatusOr<std::vector<W1Result>> RunTrials(const PrivHpConfig& config,
                                                std::span<const Point> points,
                                                int trials,
                                                uint64_t master_seed,
                                                int flow_level, int threads) {
  if (trials < 1) return absl::InvalidArgumentError("trials must be >= 1");
  absl::StatusOr<HypercubeDomain> domain =
      HypercubeDomain::Create(config.dimension);
  if (!domain.ok()) return domain.status();

  std::vector<absl::StatusOr<W1Result>> results(
      trials, absl::UnknownError("trial did not run"));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int t = next++; t < trials; t = next++) {
      PrivHpConfig trial_config = config;
      trial_config.seed = DeriveSeed(master_seed, static_cast<uint64_t>(t));
      absl::StatusOr<BuiltTree> built = BuildTree(trial_config, points);
      if (!built.ok()) {
        results[t] = built.status();
        continue;
      }
      results[t] = TreeUtility(*domain, points, built->tree, flow_level);
    }
  };
  const int pool = std::clamp(threads, 1, trials);
  std::vector<std::thread> workers;
  for (int i = 1; i < pool; ++i) workers.emplace_back(worker);
  worker();
  for (std::thread& w : workers) w.join();

  std::vector<W1Result> out;
  out.reserve(trials);
  for (auto& r : results) {
    if (!r.ok()) return r.status();
    out.push_back(*r);
  }
  return out;
}

Summary Summarize(std::span<const double> values) {
  Summary s;
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() < 2) return s;
  double squares = 0.0;
  for (double v : values) squares += (v - s.mean) * (v - s.mean);
  const double n = static_cast<double>(values.size());
  s.stderr_mean = std::sqrt(squares / (n - 1.0) / n);
  return s;
}

absl::StatusOr<BoundCheck> TailBoundCheck(const Domain& domain,
                                          std::span<const Point> points,
                                          int k, int pruning_level,
                                          int depth) {
  if (domain.dimension() > 1 && depth > 12) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "depth %d too fine for a leaf flow; use L <= 12", depth));
  }
  absl::StatusOr<ExactHierarchy> hierarchy =
      ExactHierarchy::Build(domain, points, depth);
  if (!hierarchy.ok()) return hierarchy.status();
  absl::StatusOr<PartitionTree> tree =
      ExactPruneTree(*hierarchy, k, pruning_level, depth);
  if (!tree.ok()) return tree.status();
  absl::StatusOr<TailStats> tail = ComputeTailStats(*hierarchy, depth, k);
  if (!tail.ok()) return tail.status();
  absl::StatusOr<W1Result> w1 = TreeUtility(domain, points, *tree, depth);
  if (!w1.ok()) return w1.status();

  double gamma_sum = 0.0;
  for (int l = pruning_level + 1; l <= depth - 1; ++l) {
    gamma_sum += LevelDiameter(domain, l);
  }
  BoundCheck check;
  check.lhs = w1->w1;
  check.rhs = static_cast<double>(tail->tail_norm) /
              static_cast<double>(hierarchy->total()) * gamma_sum;
  check.slack = LevelDiameter(domain, depth) + w1->slack;
  return check;
}

}  // namespace privhp
