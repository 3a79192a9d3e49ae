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


// The build, generate, evaluate and bench commands, callable without a
// process boundary.

#ifndef PRIVHP_CLI_COMMANDS_H_
#define PRIVHP_CLI_COMMANDS_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "privhp/eval/report.h"
#include "privhp/eval/workload.h"

namespace privhp {

inline constexpr std::string_view kNonPrivateWarning =
    "WARNING: NON-PRIVATE RUN. Noise is disabled; the output reveals the "
    "input exactly and carries no differential privacy guarantee.";

struct BuildOptions {
  std::string config_path;
  std::string input_path;
  std::string output_path;
  std::optional<uint64_t> seed;
  bool strict = false;
  bool noiseless = false;
};

struct BuildSummary {
  int64_t items_seen = 0;
  int64_t rejected = 0;  // parsed rows outside the domain
  int64_t skipped = 0;   // malformed rows
  int64_t memory_cells = 0;
  int64_t bytes_read = 0;
  int64_t input_opens = 0;
};

// Streams the input once through PrivHp and writes the finalized tree.
absl::StatusOr<BuildSummary> RunBuild(const BuildOptions& options,
                                      std::ostream& log);

struct GenerateOptions {
  std::string tree_path;
  std::string output_path;
  int64_t count = 0;
  std::optional<uint64_t> seed;
};

absl::Status RunGenerate(const GenerateOptions& options);

struct EvaluateOptions {
  std::string input_path;
  // Exactly one of the two.
  std::string tree_path;
  std::string synthetic_path;
  // Leaf-flow level for d >= 2; -1 picks min(L, 11).
  int level = -1;
  // Used for tail_norm when comparing against a synthetic file.
  int k = 1;
  std::optional<uint64_t> seed;
  bool strict = false;
};

absl::StatusOr<UtilityReport> RunEvaluate(const EvaluateOptions& options);

// Sweep description: comma lists for k, epsilon, d and n; scalars zipf
// (exponent), key_level, placement (uniform|atom), flow_level, threads.
struct BenchGrid {
  std::vector<int> k = {4};
  std::vector<double> epsilon = {1.0};
  std::vector<int> dimension = {1};
  std::vector<int64_t> n = {10000};
  double zipf = 1.5;
  int key_level = 12;
  Placement placement = Placement::kUniformInCell;
  int flow_level = 10;
  int threads = 1;
};

absl::StatusOr<BenchGrid> ParseBenchGrid(std::string_view text);

struct BenchOptions {
  std::string grid_path;
  std::string out_dir;
  int trials = 1;
  std::optional<uint64_t> seed;
  bool plot = true;
};

struct BenchOutcome {
  int cells = 0;
  int failed_cells = 0;
  std::vector<UtilityReport> reports;
};

// Writes reports.jsonl, summary.csv and, when enabled, memory_vs_w1.svg to
// out_dir. A failing cell is logged and recorded in summary.csv; the sweep
// continues.
absl::StatusOr<BenchOutcome> RunBench(const BenchOptions& options,
                                      std::ostream& log);

}  // namespace privhp

#endif  // PRIVHP_CLI_COMMANDS_H_
