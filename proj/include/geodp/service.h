// Copyright 2026 The GeoDP Authors
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

#ifndef GEODP_SERVICE_H_
#define GEODP_SERVICE_H_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "geodp/evaluation.h"
#include "geodp/pipeline.h"
#include "geodp/synthgen.h"
#include "json.hpp"

namespace httplib {
class Server;
}

namespace geodp {

inline constexpr int kSchemaVersion = 1;
// Work caps on a single HTTP request, in perturbed records.
inline constexpr int64_t kMaxSimulateRecords = 1'000'000;
inline constexpr int64_t kMaxSweepRecords = 20'000'000;

// Error conventions shared by the CLI and the HTTP API. Validation errors are
// InvalidArgument with messages of the form "<field>: <reason>".
//   InvalidArgument    -> exit 2, HTTP 400
//   FailedPrecondition -> exit 2, HTTP 422 (inadmissible mechanism/scenario)
//   OutOfRange         -> exit 2, HTTP 413 (request exceeds compute cap)
//   ResourceExhausted  -> exit 4, HTTP 422 (BudgetExceeded)
//   Unavailable        -> exit 3 (I/O failure)
int ExitCodeFor(const absl::Status& status);
int HttpStatusFor(const absl::Status& status);

// Field named by a "<field>: <reason>" message, or empty.
std::string ErrorField(const absl::Status& status);

// A single simulation request (one scenario, one mechanism, one epsilon).
struct RunRequest {
  ScenarioConfig data;
  MechanismConfig mechanism = MechanismConfig::None();
  int min_cohort = 0;
  uint64_t seed = 0;
  std::optional<EpsilonDelta> budget_cap;
};

// Decodes and validates a request object. When `require_seed` is set a
// missing "seed" field is an error.
absl::StatusOr<RunRequest> ParseRunRequest(const nlohmann::json& j,
                                           bool require_seed);

// Normalized request echo included in every response.
nlohmann::json RunRequestToJson(const RunRequest& request);

// Generates the request's dataset and runs the pipeline.
absl::StatusOr<nlohmann::json> ExecuteRun(const RunRequest& request);

// Runs the pipeline over an existing dataset; the request's data section is
// replaced by the dataset's own configuration.
absl::StatusOr<nlohmann::json> ExecuteRunOnDataset(const Dataset& dataset,
                                                   RunRequest request);

nlohmann::json RunResponseToJson(const RunRequest& request,
                                 const AggregateResult& result);

// Canonical byte encoding of a response document, used by both the CLI and
// the HTTP service.
std::string SerializeResponse(const nlohmann::json& response);

absl::StatusOr<SweepConfig> ParseSweepRequest(const nlohmann::json& j,
                                              bool require_seed);

// Report document plus per-mechanism scenario-averaged means.
nlohmann::json SweepResponseToJson(const SweepTable& table);

nlohmann::json MetaJson();

// key = value configuration file ('#' starts a comment). Values that parse
// as numbers become JSON numbers; everything else stays a string.
absl::StatusOr<nlohmann::json> LoadConfigFile(const std::string& path);

// Registers the /api/v1 routes, /healthz and static assets from
// `static_dir` (when non-empty and present) on `server`.
void ConfigureServer(httplib::Server& server, const std::string& static_dir);

}  // namespace geodp

#endif  // GEODP_SERVICE_H_
