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


#include "privhp/cli/commands.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "absl/container/flat_hash_set.h"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_replace.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"
#include "privhp/cli/io.h"
#include "privhp/domain.h"
#include "privhp/eval/exact_hierarchy.h"
#include "privhp/eval/experiment.h"
#include "privhp/noise.h"
#include "privhp/privhp.h"
#include "privhp/sampler.h"
#include "privhp/tree_io.h"

namespace privhp {
namespace {

bool InUnitCube(const Point& p) {
  for (double x : p) {
    if (!(x >= 0.0 && x <= 1.0)) return false;
  }
  return true;
}

absl::StatusOr<std::vector<Point>> ReadDomainPoints(const std::string& path,
                                                    int* dimension,
                                                    bool strict) {
  absl::StatusOr<std::vector<Point>> points = ReadPoints(path, 0, strict);
  if (!points.ok()) return points.status();
  if (!points->empty()) *dimension = static_cast<int>(points->front().size());
  std::erase_if(*points, [](const Point& p) { return !InUnitCube(p); });
  return points;
}

absl::Status CheckDimension(const std::string& path, int found, int expected) {
  if (found == 0 || found == expected) return absl::OkStatus();
  return absl::InvalidArgumentError(absl::StrFormat(
      "dimension mismatch: '%s' has %d columns, expected %d", path, found,
      expected));
}

absl::StatusOr<int64_t> TailNorm(const Domain& domain,
                                 std::span<const Point> points, int level,
                                 int k) {
  absl::StatusOr<ExactHierarchy> hierarchy =
      ExactHierarchy::Build(domain, points, level);
  if (!hierarchy.ok()) return hierarchy.status();
  absl::StatusOr<TailStats> tail = ComputeTailStats(*hierarchy, level, k);
  if (!tail.ok()) return tail.status();
  return tail->tail_norm;
}

template <typename T, typename Parse>
absl::StatusOr<std::vector<T>> ParseList(absl::string_view value,
                                         Parse parse) {
  std::vector<T> out;
  for (absl::string_view item : absl::StrSplit(value, ',')) {
    T v{};
    if (!parse(absl::StripAsciiWhitespace(item), &v)) {
      return absl::InvalidArgumentError(
          absl::StrCat("bad list item '", item, "'"));
    }
    out.push_back(v);
  }
  return out;
}

bool ParseInt(absl::string_view s, int* v) { return absl::SimpleAtoi(s, v); }
bool ParseInt64(absl::string_view s, int64_t* v) {
  return absl::SimpleAtoi(s, v);
}
bool ParseReal(absl::string_view s, double* v) {
  return absl::SimpleAtod(s, v);
}

std::string CsvField(std::string_view text) {
  return absl::StrReplaceAll(absl::string_view(text.data(), text.size()),
                             {{",", ";"}, {"\n", " "}});
}

struct SummaryRow {
  int64_t memory_cells = 0;
  double mean = 0.0;
  std::string label;
};

// Scatter plot of memory (log x) against mean W1 (log y).
std::string PlotSvg(const std::vector<SummaryRow>& rows) {
  constexpr double kWidth = 640, kHeight = 420, kMargin = 60;
  std::vector<SummaryRow> points;
  for (const SummaryRow& r : rows) {
    if (r.memory_cells > 0 && r.mean > 0) points.push_back(r);
  }
  std::string svg = absl::StrFormat(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\">\n"
      "<rect width=\"100%%\" height=\"100%%\" fill=\"white\"/>\n",
      static_cast<int>(kWidth), static_cast<int>(kHeight));
  absl::StrAppendFormat(
      &svg,
      "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"black\"/>\n"
      "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"black\"/>\n"
      "<text x=\"%g\" y=\"%g\" text-anchor=\"middle\">memory_cells "
      "(log)</text>\n"
      "<text x=\"15\" y=\"%g\" transform=\"rotate(-90 15 %g)\" "
      "text-anchor=\"middle\">mean W1 (log)</text>\n",
      kMargin, kHeight - kMargin, kWidth - kMargin, kHeight - kMargin, kMargin,
      kMargin, kMargin, kHeight - kMargin, kWidth / 2, kHeight - 20,
      kHeight / 2, kHeight / 2);
  if (!points.empty()) {
    double x_lo = INFINITY, x_hi = -INFINITY, y_lo = INFINITY,
           y_hi = -INFINITY;
    for (const SummaryRow& r : points) {
      x_lo = std::min(x_lo, std::log10(double(r.memory_cells)));
      x_hi = std::max(x_hi, std::log10(double(r.memory_cells)));
      y_lo = std::min(y_lo, std::log10(r.mean));
      y_hi = std::max(y_hi, std::log10(r.mean));
    }
    const double x_span = std::max(x_hi - x_lo, 1e-9);
    const double y_span = std::max(y_hi - y_lo, 1e-9);
    for (const SummaryRow& r : points) {
      const double x =
          kMargin + 10 + (std::log10(double(r.memory_cells)) - x_lo) /
                             x_span * (kWidth - 2 * kMargin - 20);
      const double y = kHeight - kMargin - 10 -
                       (std::log10(r.mean) - y_lo) / y_span *
                           (kHeight - 2 * kMargin - 20);
      absl::StrAppendFormat(
          &svg,
          "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"4\" fill=\"steelblue\">"
          "<title>%s</title></circle>\n",
          x, y, r.label);
    }
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace

absl::StatusOr<BuildSummary> RunBuild(const BuildOptions& options,
                                      std::ostream& log) {
  absl::StatusOr<ConfigFile> file = LoadConfig(options.config_path);
  if (!file.ok()) return file.status();
  PrivHpConfig config = file->config;
  absl::StatusOr<uint64_t> seed = ResolveSeed(options.seed, file->seed);
  if (!seed.ok()) return seed.status();
  config.seed = *seed;
  if (options.noiseless) config.noiseless = true;
  if (config.noiseless) log << kNonPrivateWarning << "\n";

  absl::StatusOr<PrivHp> privhp = PrivHp::Create(config);
  if (!privhp.ok()) return privhp.status();
  absl::StatusOr<CsvPointReader> reader = CsvPointReader::Open(
      options.input_path, config.dimension, options.strict);
  if (!reader.ok()) return reader.status();
  while (true) {
    absl::StatusOr<std::optional<Point>> row = reader->Next();
    if (!row.ok()) return row.status();
    if (!row->has_value()) break;
    absl::Status s = privhp->Update(**row);
    if (!s.ok() && !absl::IsOutOfRange(s)) return s;
    if (!s.ok() && options.strict) {
      return absl::OutOfRangeError(absl::StrFormat(
          "%s: row %d: %s", options.input_path, reader->stats().rows,
          s.message()));
    }
  }
  absl::StatusOr<PartitionTree> tree = privhp->Finalize();
  if (!tree.ok()) return tree.status();

  TreeMetadata meta;
  meta.dimension = config.dimension;
  meta.epsilon = config.epsilon;
  meta.k = config.k;
  meta.depth = config.depth;
  meta.pruning_level = config.pruning_level;
  meta.sketch_depth = config.sketch_depth;
  meta.sketch_width = config.sketch_width;
  meta.memory_cells = privhp->memory_cells();
  meta.items_seen = privhp->items_seen();
  meta.noiseless = config.noiseless;
  if (absl::Status s = SaveTree(*tree, meta, options.output_path); !s.ok()) {
    return s;
  }

  BuildSummary summary;
  summary.items_seen = privhp->items_seen();
  summary.rejected = privhp->rejected();
  summary.skipped = reader->stats().skipped;
  summary.memory_cells = privhp->memory_cells();
  summary.bytes_read = reader->stats().bytes_read;
  summary.input_opens = reader->stats().opens;
  log << "memory_cells " << summary.memory_cells << "\n"
      << "items_seen " << summary.items_seen << "\n"
      << "rejected " << summary.rejected << "\n"
      << "skipped " << summary.skipped << "\n";
  return summary;
}

absl::Status RunGenerate(const GenerateOptions& options) {
  if (options.count < 0) {
    return absl::InvalidArgumentError("sample count must be >= 0");
  }
  absl::StatusOr<StoredTree> stored = LoadTree(options.tree_path);
  if (!stored.ok()) return stored.status();
  absl::StatusOr<HypercubeDomain> domain =
      HypercubeDomain::Create(stored->metadata.dimension);
  if (!domain.ok()) return domain.status();
  absl::StatusOr<uint64_t> seed = ResolveSeed(options.seed, std::nullopt);
  if (!seed.ok()) return seed.status();

  std::vector<Point> samples;
  if (options.count > 0) {
    RandomStream rng(DeriveSeed(*seed, 0));
    absl::StatusOr<std::vector<Point>> drawn =
        SampleMany(stored->tree, *domain, options.count, rng);
    if (!drawn.ok()) {
      return absl::Status(drawn.status().code(),
                          absl::StrCat(options.tree_path, ": ",
                                       drawn.status().message()));
    }
    samples = *std::move(drawn);
  }
  return SavePoints(samples, stored->metadata.dimension, options.output_path);
}

absl::StatusOr<UtilityReport> RunEvaluate(const EvaluateOptions& options) {
  if (options.tree_path.empty() == options.synthetic_path.empty()) {
    return absl::InvalidArgumentError(
        "evaluate needs exactly one of a tree or a synthetic file");
  }
  int input_dimension = 0;
  absl::StatusOr<std::vector<Point>> points =
      ReadDomainPoints(options.input_path, &input_dimension, options.strict);
  if (!points.ok()) return points.status();
  if (points->empty()) {
    return absl::InvalidArgumentError("input has no points in [0,1]^d");
  }

  UtilityReport report;
  absl::StatusOr<uint64_t> seed = ResolveSeed(options.seed, std::nullopt);
  if (!seed.ok()) return seed.status();
  report.seed = *seed;

  if (!options.tree_path.empty()) {
    absl::StatusOr<StoredTree> stored = LoadTree(options.tree_path);
    if (!stored.ok()) return stored.status();
    const TreeMetadata& meta = stored->metadata;
    if (absl::Status s = CheckDimension(options.input_path, input_dimension,
                                        meta.dimension);
        !s.ok()) {
      return s;
    }
    absl::StatusOr<HypercubeDomain> domain =
        HypercubeDomain::Create(meta.dimension);
    if (!domain.ok()) return domain.status();
    const int level =
        options.level < 0 ? std::min(meta.depth, 11) : options.level;
    absl::StatusOr<W1Result> w1 =
        TreeUtility(*domain, *points, stored->tree, level);
    if (!w1.ok()) return w1.status();
    absl::StatusOr<int64_t> tail =
        TailNorm(*domain, *points, meta.depth, std::max(meta.k, 1));
    if (!tail.ok()) return tail.status();
    report.w1 = w1->w1;
    report.w1_method = w1->method;
    report.w1_slack = w1->slack;
    report.tail_norm = *tail;
    report.memory_cells = meta.memory_cells;
    report.epsilon = meta.epsilon;
    report.k = meta.k;
    report.depth = meta.depth;
    report.pruning_level = meta.pruning_level;
    report.sketch_depth = meta.sketch_depth;
    report.non_private = meta.noiseless;
  } else {
    int synthetic_dimension = 0;
    absl::StatusOr<std::vector<Point>> synthetic = ReadDomainPoints(
        options.synthetic_path, &synthetic_dimension, options.strict);
    if (!synthetic.ok()) return synthetic.status();
    if (absl::Status s = CheckDimension(options.synthetic_path,
                                        synthetic_dimension, input_dimension);
        !s.ok()) {
      return s;
    }
    absl::StatusOr<HypercubeDomain> domain =
        HypercubeDomain::Create(input_dimension);
    if (!domain.ok()) return domain.status();
    const int level = options.level < 0 ? 10 : options.level;
    absl::StatusOr<W1Result> w1 =
        SampleUtility(*domain, *points, *synthetic, level);
    if (!w1.ok()) return w1.status();
    absl::StatusOr<int64_t> tail = TailNorm(*domain, *points, level, options.k);
    if (!tail.ok()) return tail.status();
    report.w1 = w1->w1;
    report.w1_method = w1->method;
    report.w1_slack = w1->slack;
    report.tail_norm = *tail;
    report.k = options.k;
    report.depth = level;
  }
  report.trials = 1;
  report.mean = report.w1;
  report.stderr_w1 = 0.0;
  return report;
}

absl::StatusOr<BenchGrid> ParseBenchGrid(std::string_view text) {
  BenchGrid grid;
  absl::flat_hash_set<std::string> seen;
  int line_number = 0;
  for (absl::string_view line :
       absl::StrSplit(absl::string_view(text.data(), text.size()), '\n')) {
    ++line_number;
    if (size_t hash = line.find('#'); hash != absl::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = absl::StripAsciiWhitespace(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == absl::string_view::npos) {
      return absl::InvalidArgumentError(
          absl::StrFormat("grid line %d: expected 'key = value'", line_number));
    }
    const std::string key(absl::StripAsciiWhitespace(line.substr(0, eq)));
    const absl::string_view value =
        absl::StripAsciiWhitespace(line.substr(eq + 1));
    if (!seen.insert(key).second) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "grid line %d: key '%s' given twice", line_number, key));
    }
    absl::Status status;
    bool ok = true;
    if (key == "k") {
      auto v = ParseList<int>(value, ParseInt);
      status = v.status();
      if (v.ok()) grid.k = *v;
    } else if (key == "epsilon") {
      auto v = ParseList<double>(value, ParseReal);
      status = v.status();
      if (v.ok()) grid.epsilon = *v;
    } else if (key == "d") {
      auto v = ParseList<int>(value, ParseInt);
      status = v.status();
      if (v.ok()) grid.dimension = *v;
    } else if (key == "n") {
      auto v = ParseList<int64_t>(value, ParseInt64);
      status = v.status();
      if (v.ok()) grid.n = *v;
    } else if (key == "zipf") {
      ok = absl::SimpleAtod(value, &grid.zipf);
    } else if (key == "key_level") {
      ok = absl::SimpleAtoi(value, &grid.key_level);
    } else if (key == "flow_level") {
      ok = absl::SimpleAtoi(value, &grid.flow_level);
    } else if (key == "threads") {
      ok = absl::SimpleAtoi(value, &grid.threads) && grid.threads >= 1;
    } else if (key == "placement") {
      if (value == "uniform") {
        grid.placement = Placement::kUniformInCell;
      } else if (value == "atom") {
        grid.placement = Placement::kAtom;
      } else {
        ok = false;
      }
    } else {
      return absl::InvalidArgumentError(absl::StrFormat(
          "grid line %d: unknown key '%s'", line_number, key));
    }
    if (!status.ok() || !ok) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "grid line %d: bad value for '%s'", line_number, key));
    }
  }
  return grid;
}

absl::StatusOr<BenchOutcome> RunBench(const BenchOptions& options,
                                      std::ostream& log) {
  if (options.trials < 1) {
    return absl::InvalidArgumentError("trials must be >= 1");
  }
  std::ifstream grid_in(options.grid_path);
  if (!grid_in) {
    return absl::NotFoundError("cannot open grid '" + options.grid_path + "'");
  }
  std::stringstream grid_text;
  grid_text << grid_in.rdbuf();
  absl::StatusOr<BenchGrid> grid = ParseBenchGrid(grid_text.str());
  if (!grid.ok()) return grid.status();
  absl::StatusOr<uint64_t> master = ResolveSeed(options.seed, std::nullopt);
  if (!master.ok()) return master.status();

  std::error_code ec;
  std::filesystem::create_directories(options.out_dir, ec);
  if (ec) {
    return absl::PermissionDeniedError(
        absl::StrCat("cannot create '", options.out_dir, "': ", ec.message()));
  }
  const std::filesystem::path dir(options.out_dir);
  std::ofstream reports_out(dir / "reports.jsonl", std::ios::binary);
  std::ofstream summary_out(dir / "summary.csv", std::ios::binary);
  if (!reports_out || !summary_out) {
    return absl::PermissionDeniedError("cannot write into " + options.out_dir);
  }
  summary_out << "d,n,epsilon,k,L,L_star,j,w_cells,memory_cells,tail_norm,"
                 "trials,mean,stderr,status\n";

  BenchOutcome outcome;
  std::vector<SummaryRow> plotted;
  for (int d : grid->dimension) {
    for (int64_t n : grid->n) {
      ZipfWorkload workload;
      workload.n = n;
      workload.dimension = d;
      workload.key_level = grid->key_level;
      workload.exponent = grid->zipf;
      workload.placement = grid->placement;
      workload.seed = DeriveSeed(*master, 0);
      absl::StatusOr<std::vector<Point>> points = GenerateZipfPoints(workload);
      absl::StatusOr<HypercubeDomain> domain = HypercubeDomain::Create(d);
      for (double epsilon : grid->epsilon) {
        for (int k : grid->k) {
          const uint64_t cell_seed =
              DeriveSeed(DeriveSeed(*master, 1), outcome.cells);
          ++outcome.cells;
          std::string row_prefix = absl::StrFormat(
              "%d,%d,%s,%d", d, n, FormatReal(epsilon), k);
          auto fail = [&](const absl::Status& s) {
            ++outcome.failed_cells;
            log << "cell d=" << d << " n=" << n << " epsilon=" << epsilon
                << " k=" << k << " failed: " << s << "\n";
            summary_out << row_prefix << ",,,,,,,,,," << CsvField(s.ToString())
                        << "\n";
          };
          if (!points.ok()) {
            fail(points.status());
            continue;
          }
          if (!domain.ok()) {
            fail(domain.status());
            continue;
          }
          absl::StatusOr<PrivHpConfig> config =
              DefaultConfig(n, epsilon, k, d);
          if (!config.ok()) {
            fail(config.status());
            continue;
          }
          absl::StatusOr<PrivHp> probe = PrivHp::Create(*config);
          if (!probe.ok()) {
            fail(probe.status());
            continue;
          }
          const int64_t memory_cells = probe->memory_cells();
          absl::StatusOr<int64_t> tail =
              TailNorm(*domain, *points, config->depth, k);
          if (!tail.ok()) {
            fail(tail.status());
            continue;
          }
          absl::StatusOr<std::vector<W1Result>> results =
              RunTrials(*config, *points, options.trials, cell_seed,
                        grid->flow_level, grid->threads);
          if (!results.ok()) {
            fail(results.status());
            continue;
          }
          std::vector<double> values;
          for (size_t t = 0; t < results->size(); ++t) {
            const W1Result& r = (*results)[t];
            UtilityReport report;
            report.w1 = r.w1;
            report.w1_method = r.method;
            report.w1_slack = r.slack;
            report.tail_norm = *tail;
            report.memory_cells = memory_cells;
            report.epsilon = epsilon;
            report.k = k;
            report.depth = config->depth;
            report.pruning_level = config->pruning_level;
            report.sketch_depth = config->sketch_depth;
            report.trials = 1;
            report.mean = r.w1;
            report.seed = DeriveSeed(cell_seed, t);
            reports_out << ReportToJson(report) << "\n";
            outcome.reports.push_back(report);
            values.push_back(r.w1);
          }
          const Summary summary = Summarize(values);
          summary_out << row_prefix << ","
                      << absl::StrFormat(
                             "%d,%d,%d,%d,%d,%d,%d,%s,%s,ok\n", config->depth,
                             config->pruning_level, config->sketch_depth,
                             config->sketch_width, memory_cells, *tail,
                             options.trials, FormatReal(summary.mean),
                             FormatReal(summary.stderr_mean));
          plotted.push_back(
              {memory_cells, summary.mean,
               absl::StrFormat("d=%d n=%d eps=%g k=%d", d, n, epsilon, k)});
          log << absl::StrFormat(
              "cell d=%d n=%d epsilon=%g k=%d memory_cells=%d mean_w1=%.6g "
              "stderr=%.3g\n",
              d, n, epsilon, k, memory_cells, summary.mean,
              summary.stderr_mean);
        }
      }
    }
  }
  if (options.plot) {
    std::ofstream svg(dir / "memory_vs_w1.svg", std::ios::binary);
    svg << PlotSvg(plotted);
  }
  if (!reports_out || !summary_out) {
    return absl::DataLossError("failed writing bench outputs");
  }
  return outcome;
}

}  // namespace privhp
