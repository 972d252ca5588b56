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

#include "geodp/json_codec.h"

#include <cmath>
#include <limits>
#include <string>

#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"

namespace geodp {
namespace {

using nlohmann::json;

absl::Status FieldError(absl::string_view field, absl::string_view what) {
  return absl::InvalidArgumentError(absl::StrCat(field, ": ", what));
}

template <typename Int>
absl::StatusOr<Int> ReadInteger(const json& j, absl::string_view field,
                                Int fallback) {
  const std::string key(field);
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  const json& v = j.at(key);
  if (v.is_number_unsigned()) {
    const auto u = v.get<uint64_t>();
    if constexpr (std::is_signed_v<Int>) {
      if (u > static_cast<uint64_t>(std::numeric_limits<Int>::max())) {
        return FieldError(field, "integer out of range");
      }
    }
    return static_cast<Int>(u);
  }
  if (v.is_number_integer()) {
    const auto s = v.get<int64_t>();
    if constexpr (std::is_unsigned_v<Int>) {
      if (s < 0) return FieldError(field, "must be non-negative");
    } else {
      if (s < std::numeric_limits<Int>::min() ||
          s > std::numeric_limits<Int>::max()) {
        return FieldError(field, "integer out of range");
      }
    }
    return static_cast<Int>(s);
  }
  return FieldError(field, "expected an integer");
}

}  // namespace

json NumberOrNull(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

absl::StatusOr<double> ReadNumber(const json& j, absl::string_view field,
                                  double fallback) {
  const std::string key(field);
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  const json& v = j.at(key);
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const std::string s = absl::AsciiStrToLower(v.get<std::string>());
    if (s == "inf" || s == "infinity" || s == "+inf") {
      return std::numeric_limits<double>::infinity();
    }
  }
  return FieldError(field, "expected a number");
}

json GridSpecToJson(const GridSpec& grid) {
  return json{{"lat_min", grid.lat_min}, {"lat_max", grid.lat_max},
              {"lon_min", grid.lon_min}, {"lon_max", grid.lon_max},
              {"rows", grid.rows},       {"cols", grid.cols}};
}

absl::StatusOr<GridSpec> GridSpecFromJson(const json& j) {
  if (!j.is_object()) return FieldError("grid", "expected an object");
  GridSpec g = GridSpec::Pittsburgh();
  absl::StatusOr<double> d;
  if (d = ReadNumber(j, "lat_min", g.lat_min); !d.ok()) return d.status();
  g.lat_min = *d;
  if (d = ReadNumber(j, "lat_max", g.lat_max); !d.ok()) return d.status();
  g.lat_max = *d;
  if (d = ReadNumber(j, "lon_min", g.lon_min); !d.ok()) return d.status();
  g.lon_min = *d;
  if (d = ReadNumber(j, "lon_max", g.lon_max); !d.ok()) return d.status();
  g.lon_max = *d;
  absl::StatusOr<int> i = ReadInteger<int>(j, "rows", g.rows);
  if (!i.ok()) return i.status();
  g.rows = *i;
  if (i = ReadInteger<int>(j, "cols", g.cols); !i.ok()) return i.status();
  g.cols = *i;
  return g;
}

json ScenarioConfigToJson(const ScenarioConfig& cfg) {
  json j{{"scenario", std::string(ScenarioName(cfg.scenario))},
         {"grid", GridSpecToJson(cfg.grid)},
         {"records_per_cell", cfg.records_per_cell},
         {"jitter", cfg.jitter},
         {"seed", cfg.seed},
         {"frequency", cfg.frequency},
         {"octaves", cfg.octaves}};
  switch (cfg.scenario) {
    case ScenarioKind::kOneHot:
      j["categories"] = cfg.categories;
      break;
    case ScenarioKind::kRanking:
      j["rank_levels"] = cfg.rank_levels;
      break;
    case ScenarioKind::kIncome:
      j["income_lo"] = cfg.income_lo;
      j["income_hi"] = cfg.income_hi;
      break;
    case ScenarioKind::kBoolean:
      break;
  }
  return j;
}

absl::StatusOr<ScenarioConfig> ScenarioConfigFromJson(const json& j) {
  if (!j.is_object()) return FieldError("config", "expected an object");
  ScenarioConfig cfg;
  if (!j.contains("scenario") || !j.at("scenario").is_string()) {
    return FieldError("scenario", "required string");
  }
  absl::StatusOr<ScenarioKind> kind =
      ParseScenario(j.at("scenario").get<std::string>());
  if (!kind.ok()) return FieldError("scenario", kind.status().message());
  cfg.scenario = *kind;
  if (j.contains("grid")) {
    absl::StatusOr<GridSpec> grid = GridSpecFromJson(j.at("grid"));
    if (!grid.ok()) return grid.status();
    cfg.grid = *grid;
  }
  absl::StatusOr<int> i =
      ReadInteger<int>(j, "records_per_cell", cfg.records_per_cell);
  if (!i.ok()) return i.status();
  cfg.records_per_cell = *i;
  if (i = ReadInteger<int>(j, "categories", cfg.categories); !i.ok()) {
    return i.status();
  }
  cfg.categories = *i;
  if (i = ReadInteger<int>(j, "rank_levels", cfg.rank_levels); !i.ok()) {
    return i.status();
  }
  cfg.rank_levels = *i;
  if (i = ReadInteger<int>(j, "octaves", cfg.octaves); !i.ok()) {
    return i.status();
  }
  cfg.octaves = *i;
  absl::StatusOr<uint64_t> seed = ReadInteger<uint64_t>(j, "seed", cfg.seed);
  if (!seed.ok()) return seed.status();
  cfg.seed = *seed;
  absl::StatusOr<double> d;
  if (d = ReadNumber(j, "income_lo", cfg.income_lo); !d.ok()) return d.status();
  cfg.income_lo = *d;
  if (d = ReadNumber(j, "income_hi", cfg.income_hi); !d.ok()) return d.status();
  cfg.income_hi = *d;
  if (d = ReadNumber(j, "jitter", cfg.jitter); !d.ok()) return d.status();
  cfg.jitter = *d;
  if (d = ReadNumber(j, "frequency", cfg.frequency); !d.ok()) return d.status();
  cfg.frequency = *d;
  return cfg;
}

json BoundsToJson(const CellBounds& b) {
  return json{{"lat_min", b.lat_min},
              {"lat_max", b.lat_max},
              {"lon_min", b.lon_min},
              {"lon_max", b.lon_max}};
}

json BudgetEntryToJson(const BudgetEntry& entry) {
  json j{{"mechanism", std::string(MechanismName(entry.kind))},
         {"epsilon", entry.epsilon},
         {"delta", entry.delta},
         {"sensitivity", entry.sensitivity},
         {"count", entry.count}};
  if (entry.value_scale != 1.0) j["value_scale"] = entry.value_scale;
  if (entry.sigma.has_value()) {
    j["sigma"] = *entry.sigma;
    j["sigma_raw"] = *entry.sigma * entry.value_scale;
    j["calibration"] = entry.epsilon < 1.0 ? "classical" : "heuristic";
  }
  return j;
}

}  // namespace geodp
