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


// Utility reports and their JSON form.

#ifndef PRIVHP_EVAL_REPORT_H_
#define PRIVHP_EVAL_REPORT_H_

#include <cstdint>
#include <string>
#include <string_view>

#include "absl/status/statusor.h"

namespace privhp {

enum class W1Method { kExact1d, kLeafFlow };

// "exact-1d" or "leaf-flow".
std::string W1MethodName(W1Method method);
absl::StatusOr<W1Method> ParseW1Method(std::string_view name);

struct UtilityReport {
  double w1 = 0.0;
  W1Method w1_method = W1Method::kExact1d;
  // Discretization slack of the evaluator: 0 for exact-1d, gamma_r for a
  // level-r leaf flow.
  double w1_slack = 0.0;
  int64_t tail_norm = 0;
  int64_t memory_cells = 0;
  double epsilon = 0.0;
  int k = 0;
  int depth = 0;          // L
  int pruning_level = 0;  // L_star
  int sketch_depth = 0;   // j
  int trials = 1;
  double mean = 0.0;
  double stderr_w1 = 0.0;
  uint64_t seed = 0;
  bool non_private = false;
};

// One JSON object on a single line, reals at 17 significant digits.
std::string ReportToJson(const UtilityReport& report);
absl::StatusOr<UtilityReport> ReportFromJson(std::string_view text);

}  // namespace privhp

#endif  // PRIVHP_EVAL_REPORT_H_
