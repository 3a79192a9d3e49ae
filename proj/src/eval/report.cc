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


#include "privhp/eval/report.h"

#include <cstdint>
#include <string>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "nlohmann/json.hpp"

namespace privhp {
namespace {

using Json = nlohmann::ordered_json;

}  // namespace

std::string W1MethodName(W1Method method) {
  return method == W1Method::kExact1d ? "exact-1d" : "leaf-flow";
}

absl::StatusOr<W1Method> ParseW1Method(std::string_view name) {
  if (name == "exact-1d") return W1Method::kExact1d;
  if (name == "leaf-flow") return W1Method::kLeafFlow;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown w1_method '", std::string(name), "'"));
}

std::string ReportToJson(const UtilityReport& r) {
  Json j;
  j["w1"] = r.w1;
  j["w1_method"] = W1MethodName(r.w1_method);
  j["tail_norm"] = r.tail_norm;
  j["memory_cells"] = r.memory_cells;
  j["epsilon"] = r.epsilon;
  j["k"] = r.k;
  j["L"] = r.depth;
  j["L_star"] = r.pruning_level;
  j["j"] = r.sketch_depth;
  j["trials"] = r.trials;
  j["mean"] = r.mean;
  j["stderr"] = r.stderr_w1;
  j["seed"] = r.seed;
  j["w1_slack"] = r.w1_slack;
  if (r.non_private) j["non_private"] = true;
  return j.dump();
}

absl::StatusOr<UtilityReport> ReportFromJson(std::string_view text) {
  Json j = Json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) {
    return absl::InvalidArgumentError("report is not a JSON object");
  }
  UtilityReport r;
  try {
    r.w1 = j.at("w1").get<double>();
    absl::StatusOr<W1Method> method =
        ParseW1Method(j.at("w1_method").get<std::string>());
    if (!method.ok()) return method.status();
    r.w1_method = *method;
    r.tail_norm = j.at("tail_norm").get<int64_t>();
    r.memory_cells = j.at("memory_cells").get<int64_t>();
    r.epsilon = j.at("epsilon").get<double>();
    r.k = j.at("k").get<int>();
    r.depth = j.at("L").get<int>();
    r.pruning_level = j.at("L_star").get<int>();
    r.sketch_depth = j.at("j").get<int>();
    r.trials = j.at("trials").get<int>();
    r.mean = j.at("mean").get<double>();
    r.stderr_w1 = j.at("stderr").get<double>();
    r.seed = j.at("seed").get<uint64_t>();
    r.w1_slack = j.value("w1_slack", 0.0);
    r.non_private = j.value("non_private", false);
  } catch (const Json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed report: ", e.what()));
  }
  return r;
}

}  // namespace privhp
