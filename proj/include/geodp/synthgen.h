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

#ifndef GEODP_SYNTHGEN_H_
#define GEODP_SYNTHGEN_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "geodp/grid.h"
#include "geodp/mechanisms.h"
#include "geodp/record.h"

namespace geodp {

// Parameters of one synthetic scenario. Only the fields belonging to the
// scenario are consulted (categories for kOneHot, rank_levels for kRanking,
// income range for kIncome).
struct ScenarioConfig {
  ScenarioKind scenario = ScenarioKind::kBoolean;
  GridSpec grid = GridSpec::Pittsburgh();
  int records_per_cell = 100;
  int categories = 6;
  int rank_levels = 5;
  double income_lo = 20000.0;
  double income_hi = 200000.0;
  // Weight of the spatially flat component mixed into every cell.
  double jitter = 0.2;
  uint64_t seed = 0;
  // Perlin lattice cells per grid cell, and octave count.
  double frequency = 0.25;
  int octaves = 1;

  absl::Status Validate() const;
};

// Records are stored in row-major cell order, records_per_cell per cell.
struct Dataset {
  ScenarioConfig config;
  std::vector<Record> records;
};

// Per-cell generative parameters, exposed so tests can compare empirical
// frequencies against the constructed distribution.
DiscreteDistribution CellCategoryDistribution(const ScenarioConfig& cfg,
                                              CellId cell);
double CellInfectionProbability(const ScenarioConfig& cfg, CellId cell);
int CellModalRank(const ScenarioConfig& cfg, CellId cell);
double CellIncomeMean(const ScenarioConfig& cfg, CellId cell);

absl::StatusOr<Dataset> GenerateOnehotDataset(const ScenarioConfig& cfg);
absl::StatusOr<Dataset> GenerateBooleanDataset(const ScenarioConfig& cfg);
absl::StatusOr<Dataset> GenerateRankingDataset(const ScenarioConfig& cfg);
absl::StatusOr<Dataset> GenerateIncomeDataset(const ScenarioConfig& cfg);

// Dispatches on cfg.scenario.
absl::StatusOr<Dataset> GenerateDataset(const ScenarioConfig& cfg);

// JSON Lines dataset format: a header line {"format": "geodp-dataset",
// "version": 1, "config": {...}} followed by one record per line,
// {"row", "col", "type", "value", "params"}. Doubles are written in shortest
// round-trip form, so read(write(d)) reproduces d bit for bit.
void WriteDatasetJsonl(const Dataset& dataset, std::ostream& out);
absl::StatusOr<Dataset> ReadDatasetJsonl(std::istream& in);

absl::Status WriteDatasetFile(const Dataset& dataset, const std::string& path);
absl::StatusOr<Dataset> ReadDatasetFile(const std::string& path);

}  // namespace geodp

#endif  // GEODP_SYNTHGEN_H_
