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

#ifndef GEODP_EVALUATION_H_
#define GEODP_EVALUATION_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "geodp/metrics.h"
#include "geodp/record.h"
#include "geodp/synthgen.h"
#include "json.hpp"

namespace geodp {

struct SweepConfig {
  // Strictly ascending; +infinity is allowed as the final entry and runs
  // mechanism none.
  std::vector<double> epsilons = {0.1, 0.25, 0.5, 1, 2, 4, 8};
  int repetitions = 10;
  std::vector<ScenarioKind> scenarios = {
      ScenarioKind::kOneHot, ScenarioKind::kBoolean, ScenarioKind::kRanking,
      ScenarioKind::kIncome};
  std::vector<MechanismKind> mechanisms = {MechanismKind::kRandomizedResponse,
                                           MechanismKind::kExponential,
                                           MechanismKind::kGaussian};
  double delta = 1.5e-7;
  uint64_t base_seed = 0;
  int min_cohort = 0;
  // Data template; `scenario` is overwritten per sweep scenario and `seed`
  // by base_seed.
  ScenarioConfig data;

  absl::Status Validate() const;

  // Number of pipeline runs the sweep executes (admissible pairs only).
  int64_t TupleCount() const;
};

struct SweepRow {
  ScenarioKind scenario = ScenarioKind::kBoolean;
  MechanismKind mechanism = MechanismKind::kNone;
  double epsilon = 0.0;
  int repetition = 0;
  // NaN when every cell was suppressed.
  double mse = 0.0;
  int suppressed_cells = 0;
  double per_user_epsilon = 0.0;
  double composed_epsilon = 0.0;

  bool operator==(const SweepRow&) const = default;
};

struct SweepTable {
  std::vector<SweepRow> rows;
};

// Runs every admissible (scenario, mechanism, epsilon, repetition) tuple in
// that nesting order. Each scenario's dataset is generated once from
// base_seed; tuple t runs the pipeline with seed MixSeed(base_seed, t).
// Inadmissible pairs are skipped.
absl::StatusOr<SweepTable> RunSweep(const SweepConfig& cfg);

// Repetition statistics of one (scenario, mechanism, epsilon) point.
struct SeriesPoint {
  double epsilon = 0.0;
  double mean = 0.0;
  double stddev = 0.0;
  double min = 0.0;
  double max = 0.0;
};

using SeriesKey = std::pair<ScenarioKind, MechanismKind>;

// Points per (scenario, mechanism), ordered by ascending epsilon.
std::map<SeriesKey, std::vector<SeriesPoint>> SummarizeSeries(
    const SweepTable& table);

// Unweighted mean over scenarios of per-scenario mean MSE, per mechanism and
// epsilon (ascending).
std::map<MechanismKind, std::vector<std::pair<double, double>>>
AverageAcrossScenarios(const SweepTable& table);

// Report columns, in order.
inline constexpr const char* kReportColumns[] = {
    "scenario", "mechanism",        "epsilon",          "repetition",
    "mse",      "suppressed_cells", "per_user_epsilon", "composed_epsilon"};

// Shortest decimal string that parses back to exactly `v` ("inf", "nan" for
// non-finite values).
std::string FormatDouble(double v);

void WriteReportCsv(const SweepTable& table, std::ostream& out);
absl::StatusOr<SweepTable> ReadReportCsv(std::istream& in);

nlohmann::json ReportToJson(const SweepTable& table);
absl::StatusOr<SweepTable> ReportFromJson(const nlohmann::json& j);

enum class ReportFormat { kCsv, kJson };

// Writes the report to `path`. Fails with IoFailure on I/O errors and with
// InvalidArgument on an empty table.
absl::Status EmitReport(const SweepTable& table, ReportFormat format,
                        const std::string& path);
absl::StatusOr<SweepTable> ReadReport(ReportFormat format,
                                      const std::string& path);

}  // namespace geodp

#endif  // GEODP_EVALUATION_H_
