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


#include "privhp/cli/io.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <memory>
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
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"
#include "privhp/tree_io.h"

namespace privhp {
namespace {

absl::Status ConfigError(int line, absl::string_view what) {
  return absl::InvalidArgumentError(
      absl::StrFormat("config line %d: %s", line, what));
}

bool ParseBool(absl::string_view text, bool* out) {
  if (text == "true" || text == "1") {
    *out = true;
    return true;
  }
  if (text == "false" || text == "0") {
    *out = false;
    return true;
  }
  return false;
}

// Parses one CSV line into doubles; false if any field is not a finite
// number.
bool ParseRow(absl::string_view line, Point* out) {
  out->clear();
  for (absl::string_view field : absl::StrSplit(line, ',')) {
    double v = 0;
    if (!absl::SimpleAtod(absl::StripAsciiWhitespace(field), &v) ||
        !std::isfinite(v)) {
      return false;
    }
    out->push_back(v);
  }
  return true;
}

}  // namespace

absl::StatusOr<ConfigFile> ParseConfig(std::string_view text) {
  ConfigFile file;
  PrivHpConfig& c = file.config;
  std::optional<int> depth;
  std::optional<int> pruning_level;
  std::optional<int> sketch_depth;
  std::optional<int> sketch_width;
  std::optional<int64_t> n_hint;
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
      return ConfigError(line_number, "expected 'key = value'");
    }
    const std::string key(absl::StripAsciiWhitespace(line.substr(0, eq)));
    const absl::string_view value =
        absl::StripAsciiWhitespace(line.substr(eq + 1));
    if (!seen.insert(key).second) {
      return ConfigError(line_number,
                         absl::StrFormat("key '%s' given twice", key));
    }
    bool ok = true;
    int int_value = 0;
    if (key == "d") {
      ok = absl::SimpleAtoi(value, &c.dimension);
    } else if (key == "epsilon") {
      ok = absl::SimpleAtod(value, &c.epsilon);
    } else if (key == "k") {
      ok = absl::SimpleAtoi(value, &c.k);
    } else if (key == "L") {
      ok = absl::SimpleAtoi(value, &int_value);
      depth = int_value;
    } else if (key == "L_star") {
      ok = absl::SimpleAtoi(value, &int_value);
      pruning_level = int_value;
    } else if (key == "j") {
      ok = absl::SimpleAtoi(value, &int_value);
      sketch_depth = int_value;
    } else if (key == "w_cells") {
      ok = absl::SimpleAtoi(value, &int_value);
      sketch_width = int_value;
    } else if (key == "seed") {
      uint64_t seed = 0;
      ok = absl::SimpleAtoi(value, &seed);
      file.seed = seed;
    } else if (key == "n_hint") {
      int64_t n = 0;
      ok = absl::SimpleAtoi(value, &n);
      n_hint = n;
    } else if (key == "noiseless") {
      ok = ParseBool(value, &c.noiseless);
    } else {
      return ConfigError(line_number,
                         absl::StrFormat("unknown key '%s'", key));
    }
    if (!ok) {
      return ConfigError(line_number,
                         absl::StrFormat("bad value for '%s'", key));
    }
  }

  if (!depth || !pruning_level || !sketch_depth || !sketch_width) {
    if (!n_hint) {
      return absl::InvalidArgumentError(
          "config needs n_hint unless L, L_star, j and w_cells are all set");
    }
    absl::StatusOr<PrivHpConfig> defaults =
        DefaultConfig(*n_hint, c.epsilon, c.k, c.dimension);
    if (!defaults.ok()) return defaults.status();
    if (!depth) depth = defaults->depth;
    if (!pruning_level) pruning_level = std::min(defaults->pruning_level, *depth);
    if (!sketch_depth) sketch_depth = defaults->sketch_depth;
    if (!sketch_width) sketch_width = defaults->sketch_width;
  }
  c.depth = *depth;
  c.pruning_level = *pruning_level;
  c.sketch_depth = *sketch_depth;
  c.sketch_width = *sketch_width;
  if (n_hint) c.n_hint = *n_hint;
  if (file.seed) c.seed = *file.seed;
  if (absl::Status s = ValidateConfig(c); !s.ok()) return s;
  return file;
}

absl::StatusOr<ConfigFile> LoadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError("cannot open config '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  absl::StatusOr<ConfigFile> file = ParseConfig(buffer.str());
  if (!file.ok()) {
    return absl::Status(file.status().code(),
                        path + ": " + std::string(file.status().message()));
  }
  return file;
}

std::string FormatConfig(const PrivHpConfig& c) {
  return absl::StrFormat(
      "d = %d\nepsilon = %s\nk = %d\nL_star = %d\nL = %d\nj = %d\n"
      "w_cells = %d\nn_hint = %d\nnoiseless = %s\n",
      c.dimension, FormatReal(c.epsilon), c.k, c.pruning_level, c.depth,
      c.sketch_depth, c.sketch_width, c.n_hint,
      c.noiseless ? "true" : "false");
}

absl::StatusOr<uint64_t> ResolveSeed(std::optional<uint64_t> flag,
                                     std::optional<uint64_t> config) {
  if (flag) return *flag;
  if (config) return *config;
  if (const char* env = std::getenv("PRIVHP_SEED"); env != nullptr) {
    uint64_t seed = 0;
    if (!absl::SimpleAtoi(env, &seed)) {
      return absl::InvalidArgumentError(
          absl::StrFormat("PRIVHP_SEED='%s' is not an unsigned integer", env));
    }
    return seed;
  }
  return 0;
}

absl::StatusOr<CsvPointReader> CsvPointReader::Open(const std::string& path,
                                                    int dimension,
                                                    bool strict) {
  if (dimension < 0) return absl::InvalidArgumentError("negative dimension");
  auto in = std::make_unique<std::ifstream>(path, std::ios::binary);
  if (!*in) return absl::NotFoundError("cannot open input '" + path + "'");
  CsvPointReader reader(path, std::move(in), dimension, strict);
  reader.stats_.opens = 1;
  return reader;
}

absl::StatusOr<std::optional<Point>> CsvPointReader::Next() {
  std::string line;
  Point row;
  while (std::getline(*in_, line)) {
    ++line_number_;
    stats_.bytes_read += static_cast<int64_t>(line.size());
    if (!in_->eof()) ++stats_.bytes_read;  // the newline
    absl::string_view view = absl::StripAsciiWhitespace(line);
    if (view.empty()) continue;
    const bool parsed = ParseRow(view, &row);
    if (!parsed && line_number_ == 1) {
      ++stats_.header_lines;
      continue;
    }
    if (parsed && dimension_ == 0) dimension_ = static_cast<int>(row.size());
    if (parsed && static_cast<int>(row.size()) == dimension_) {
      ++stats_.rows;
      return std::optional<Point>(std::move(row));
    }
    if (strict_) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "%s:%d: malformed row (expected %d numbers)", path_, line_number_,
          dimension_));
    }
    ++stats_.skipped;
  }
  if (in_->bad()) {
    return absl::DataLossError("read error on '" + path_ + "'");
  }
  return std::optional<Point>();
}

absl::StatusOr<std::vector<Point>> ReadPoints(const std::string& path,
                                              int dimension, bool strict,
                                              CsvStats* stats) {
  absl::StatusOr<CsvPointReader> reader =
      CsvPointReader::Open(path, dimension, strict);
  if (!reader.ok()) return reader.status();
  std::vector<Point> points;
  while (true) {
    absl::StatusOr<std::optional<Point>> row = reader->Next();
    if (!row.ok()) return row.status();
    if (!row->has_value()) break;
    points.push_back(**std::move(row));
  }
  if (stats != nullptr) *stats = reader->stats();
  return points;
}

absl::Status WritePoints(const std::vector<Point>& points, int dimension,
                         std::ostream& out) {
  for (int c = 0; c < dimension; ++c) out << (c ? ",x" : "x") << c;
  out << '\n';
  for (const Point& p : points) {
    if (static_cast<int>(p.size()) != dimension) {
      return absl::InvalidArgumentError("point of the wrong dimension");
    }
    for (int c = 0; c < dimension; ++c) {
      if (c) out << ',';
      out << FormatReal(p[c]);
    }
    out << '\n';
  }
  if (!out) return absl::DataLossError("failed writing points");
  return absl::OkStatus();
}

absl::Status SavePoints(const std::vector<Point>& points, int dimension,
                        const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return absl::NotFoundError("cannot open output '" + path + "'");
  return WritePoints(points, dimension, out);
}

}  // namespace privhp
