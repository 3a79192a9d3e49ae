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


// privhp: build private trees from CSV streams, sample synthetic data from
// them, and measure utility.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "privhp/cli/commands.h"
#include "privhp/eval/report.h"

namespace {

int Fail(const absl::Status& status) {
  std::cerr << "privhp: " << status << "\n";
  return 1;
}

std::optional<uint64_t> SeedFlag(const CLI::Option* option, uint64_t value) {
  if (option->count() == 0) return std::nullopt;
  return value;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differentially private hierarchical synthetic data"};
  app.require_subcommand(1);

  privhp::BuildOptions build;
  uint64_t build_seed = 0;
  CLI::App* build_cmd =
      app.add_subcommand("build", "Stream a CSV once and write a private tree");
  build_cmd->add_option("--config", build.config_path, "Config file")
      ->required();
  build_cmd->add_option("--input", build.input_path, "Input CSV")->required();
  build_cmd->add_option("--output", build.output_path, "Tree file to write")
      ->required();
  CLI::Option* build_seed_opt =
      build_cmd->add_option("--seed", build_seed, "Master seed");
  build_cmd->add_flag("--strict", build.strict, "Abort on a malformed row");
  build_cmd->add_flag("--noiseless", build.noiseless,
                      "Disable noise (NOT private)");

  privhp::GenerateOptions generate;
  uint64_t generate_seed = 0;
  CLI::App* generate_cmd =
      app.add_subcommand("generate", "Sample synthetic rows from a tree");
  generate_cmd->add_option("--input", generate.tree_path, "Tree file")
      ->required();
  generate_cmd->add_option("--output", generate.output_path, "CSV to write")
      ->required();
  generate_cmd->add_option("-m,--count", generate.count, "Rows to sample")
      ->required();
  CLI::Option* generate_seed_opt =
      generate_cmd->add_option("--seed", generate_seed, "Sampling seed");

  privhp::EvaluateOptions evaluate;
  uint64_t evaluate_seed = 0;
  std::string evaluate_output;
  CLI::App* evaluate_cmd = app.add_subcommand(
      "evaluate", "W1 between a stream and a tree or synthetic sample");
  evaluate_cmd->add_option("--input", evaluate.input_path, "Original CSV")
      ->required();
  CLI::Option* tree_opt =
      evaluate_cmd->add_option("--tree", evaluate.tree_path, "Tree file");
  CLI::Option* synthetic_opt = evaluate_cmd->add_option(
      "--synthetic", evaluate.synthetic_path, "Synthetic CSV");
  tree_opt->excludes(synthetic_opt);
  evaluate_cmd->add_option("--level", evaluate.level,
                           "Leaf-flow level r for d >= 2");
  evaluate_cmd->add_option("--k", evaluate.k,
                           "k for tail_norm with --synthetic");
  evaluate_cmd->add_option("--output", evaluate_output,
                           "Write the JSON report here instead of stdout");
  CLI::Option* evaluate_seed_opt =
      evaluate_cmd->add_option("--seed", evaluate_seed, "Echoed in the report");
  evaluate_cmd->add_flag("--strict", evaluate.strict,
                         "Abort on a malformed row");

  privhp::BenchOptions bench;
  uint64_t bench_seed = 0;
  bool no_plot = false;
  CLI::App* bench_cmd =
      app.add_subcommand("bench", "Memory and utility sweep over a grid");
  bench_cmd->add_option("--config", bench.grid_path, "Grid file")->required();
  bench_cmd->add_option("--output", bench.out_dir, "Output directory")
      ->required();
  bench_cmd->add_option("--trials", bench.trials, "Trials per grid cell");
  CLI::Option* bench_seed_opt =
      bench_cmd->add_option("--seed", bench_seed, "Master seed");
  bench_cmd->add_flag("--no-plot", no_plot, "Skip the SVG plot");

  CLI11_PARSE(app, argc, argv);

  if (build_cmd->parsed()) {
    build.seed = SeedFlag(build_seed_opt, build_seed);
    absl::StatusOr<privhp::BuildSummary> summary =
        privhp::RunBuild(build, std::cout);
    return summary.ok() ? 0 : Fail(summary.status());
  }
  if (generate_cmd->parsed()) {
    generate.seed = SeedFlag(generate_seed_opt, generate_seed);
    absl::Status status = privhp::RunGenerate(generate);
    return status.ok() ? 0 : Fail(status);
  }
  if (evaluate_cmd->parsed()) {
    evaluate.seed = SeedFlag(evaluate_seed_opt, evaluate_seed);
    absl::StatusOr<privhp::UtilityReport> report =
        privhp::RunEvaluate(evaluate);
    if (!report.ok()) return Fail(report.status());
    if (report->non_private) std::cerr << privhp::kNonPrivateWarning << "\n";
    const std::string json = privhp::ReportToJson(*report);
    if (evaluate_output.empty()) {
      std::cout << json << "\n";
    } else {
      std::ofstream out(evaluate_output, std::ios::binary);
      out << json << "\n";
      if (!out) {
        return Fail(absl::PermissionDeniedError("cannot write " +
                                                evaluate_output));
      }
    }
    return 0;
  }
  bench.seed = SeedFlag(bench_seed_opt, bench_seed);
  bench.plot = !no_plot;
  absl::StatusOr<privhp::BenchOutcome> outcome =
      privhp::RunBench(bench, std::cerr);
  if (!outcome.ok()) return Fail(outcome.status());
  std::cout << "cells " << outcome->cells << "\nfailed_cells "
            << outcome->failed_cells << "\nreports " << outcome->reports.size()
            << "\n";
  return 0;
}
