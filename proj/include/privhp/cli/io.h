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


// File formats used by the command-line tool: flat key = value configs and
// CSV point files.

#ifndef PRIVHP_CLI_IO_H_
#define PRIVHP_CLI_IO_H_

#include <cstdint>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "privhp/eval/workload.h"
#include "privhp/privhp.h"

namespace privhp {

struct ConfigFile {
  PrivHpConfig config;
  // Set when the file names a seed explicitly.
  std::optional<uint64_t> seed;
};

// One `key = value` per line, '#' starts a comment. Keys are d, epsilon, k,
// L_star, L, j, w_cells, seed, n_hint, noiseless. Missing structural keys
// (L, L_star, j, w_cells) are filled from DefaultConfig, which then needs
// n_hint. Unknown or repeated keys are errors.
absl::StatusOr<ConfigFile> ParseConfig(std::string_view text);
absl::StatusOr<ConfigFile> LoadConfig(const std::string& path);
std::string FormatConfig(const PrivHpConfig& config);

// Seed precedence: flag, then config file, then PRIVHP_SEED, then 0.
absl::StatusOr<uint64_t> ResolveSeed(std::optional<uint64_t> flag,
                                     std::optional<uint64_t> config);

struct CsvStats {
  int64_t rows = 0;     // data rows returned
  int64_t skipped = 0;  // malformed rows dropped
  int64_t header_lines = 0;
  int64_t bytes_read = 0;
  int64_t opens = 0;
};

// Streams rows of comma-separated decimals. A first line that does not parse
// as numbers is taken as a header. Each row must have `dimension` fields
// (0 infers it from the first data row). Malformed rows are skipped and
// counted, or reported as errors in strict mode. Range checks are left to the
// consumer.
class CsvPointReader {
 public:
  static absl::StatusOr<CsvPointReader> Open(const std::string& path,
                                             int dimension, bool strict);

  // Next data row, or nullopt at end of file.
  absl::StatusOr<std::optional<Point>> Next();

  int dimension() const { return dimension_; }
  const CsvStats& stats() const { return stats_; }

 private:
  CsvPointReader(std::string path, std::unique_ptr<std::ifstream> in,
                 int dimension, bool strict)
      : path_(std::move(path)),
        in_(std::move(in)),
        dimension_(dimension),
        strict_(strict) {}

  std::string path_;
  std::unique_ptr<std::ifstream> in_;
  int dimension_;
  bool strict_;
  int64_t line_number_ = 0;
  CsvStats stats_;
};

absl::StatusOr<std::vector<Point>> ReadPoints(const std::string& path,
                                              int dimension, bool strict,
                                              CsvStats* stats = nullptr);

// Header x0,...,x{d-1}, then one row per point at 17 significant digits.
absl::Status WritePoints(const std::vector<Point>& points, int dimension,
                         std::ostream& out);
absl::Status SavePoints(const std::vector<Point>& points, int dimension,
                        const std::string& path);

}  // namespace privhp

#endif  // PRIVHP_CLI_IO_H_
