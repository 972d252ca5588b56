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

#ifndef GEODP_JSON_CODEC_H_
#define GEODP_JSON_CODEC_H_

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "geodp/accountant.h"
#include "geodp/grid.h"
#include "geodp/synthgen.h"
#include "json.hpp"

namespace geodp {

// JSON encodings shared by the dataset files, result files and HTTP API.
// Decoders report the offending field name in their error messages.

nlohmann::json GridSpecToJson(const GridSpec& grid);
absl::StatusOr<GridSpec> GridSpecFromJson(const nlohmann::json& j);

nlohmann::json ScenarioConfigToJson(const ScenarioConfig& cfg);
absl::StatusOr<ScenarioConfig> ScenarioConfigFromJson(const nlohmann::json& j);

nlohmann::json BoundsToJson(const CellBounds& b);

nlohmann::json BudgetEntryToJson(const BudgetEntry& entry);

// +/-infinity and NaN have no JSON number form; they encode as null.
nlohmann::json NumberOrNull(double v);

// Reads an optional number/string field; null reads as absent and strings
// "inf" and "infinity" (any case) decode to +infinity.
absl::StatusOr<double> ReadNumber(const nlohmann::json& j,
                                  absl::string_view field, double fallback);

}  // namespace geodp

#endif  // GEODP_JSON_CODEC_H_
