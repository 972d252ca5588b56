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

#include "geodp/synthgen.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "absl/strings/str_cat.h"
#include "geodp/json_codec.h"
#include "geodp/perlin.h"
#include "geodp/rng.h"

namespace geodp {
namespace {

using nlohmann::json;

// Stream tags keep field seeds and record-sampling seeds disjoint.
constexpr uint64_t kFieldTag = 0x6669656c64ULL;
constexpr uint64_t kSampleTag = 0x73616d706c65ULL;

absl::Status ConfigError(absl::string_view what) {
  return absl::InvalidArgumentError(absl::StrCat("InvalidConfig: ", what));
}

PerlinField FieldFor(const ScenarioConfig& cfg, uint64_t layer) {
  return PerlinField{.seed = MixSeed(MixSeed(cfg.seed, kFieldTag), layer),
                     .frequency = cfg.frequency,
                     .octaves = cfg.octaves,
                     .normalize = true};
}

double FieldAt(const PerlinNoise& noise, CellId cell) {
  return noise.Evaluate(cell.col + 0.5, cell.row + 0.5);
}

RngStream CellStream(const ScenarioConfig& cfg, CellId cell) {
  return RngStream(MixSeed(MixSeed(cfg.seed, kSampleTag),
                           static_cast<uint64_t>(CellIndex(cfg.grid, cell))));
}

absl::Status RequireScenario(const ScenarioConfig& cfg, ScenarioKind kind) {
  if (cfg.scenario != kind) {
    return ConfigError(absl::StrCat("expected scenario ", ScenarioName(kind),
                                    ", got ", ScenarioName(cfg.scenario)));
  }
  return cfg.Validate();
}

// Runs `make_record(cell, rng)` records_per_cell times per cell, row-major.
template <typename MakeValue>
absl::StatusOr<Dataset> Generate(const ScenarioConfig& cfg,
                                 MakeValue make_value) {
  Dataset dataset{cfg, {}};
  dataset.records.reserve(static_cast<size_t>(cfg.grid.cell_count()) *
                          cfg.records_per_cell);
  for (int r = 0; r < cfg.grid.rows; ++r) {
    for (int c = 0; c < cfg.grid.cols; ++c) {
      const CellId cell{r, c};
      auto sample = make_value(cell);
      RngStream rng = CellStream(cfg, cell);
      for (int i = 0; i < cfg.records_per_cell; ++i) {
        absl::StatusOr<Record> rec = Record::Create(cell, sample(rng));
        if (!rec.ok()) return rec.status();
        dataset.records.push_back(*std::move(rec));
      }
    }
  }
  return dataset;
}

}  // namespace

absl::Status ScenarioConfig::Validate() const {
  if (absl::Status s = grid.Validate(); !s.ok()) return s;
  if (records_per_cell < 1) {
    return ConfigError(
        absl::StrCat("records_per_cell must be >= 1, got ", records_per_cell));
  }
  if (!(jitter >= 0.0 && jitter <= 1.0)) {
    return ConfigError(absl::StrCat("jitter must be in [0, 1], got ", jitter));
  }
  if (!(frequency > 0) || !std::isfinite(frequency)) {
    return ConfigError("frequency must be positive");
  }
  if (octaves < 1 || octaves > 16) {
    return ConfigError("octaves must be in [1, 16]");
  }
  switch (scenario) {
    case ScenarioKind::kOneHot:
      if (categories < 2) {
        return ConfigError(
            absl::StrCat("categories must be >= 2, got ", categories));
      }
      break;
    case ScenarioKind::kRanking:
      if (rank_levels < 2) {
        return ConfigError(
            absl::StrCat("rank_levels must be >= 2, got ", rank_levels));
      }
      break;
    case ScenarioKind::kIncome:
      if (!std::isfinite(income_lo) || !std::isfinite(income_hi) ||
          !(income_lo < income_hi)) {
        return ConfigError("income_lo must be < income_hi");
      }
      break;
    case ScenarioKind::kBoolean:
      break;
  }
  return absl::OkStatus();
}

DiscreteDistribution CellCategoryDistribution(const ScenarioConfig& cfg,
                                              CellId cell) {
  const int k = cfg.categories;
  std::vector<double> scores(k);
  for (int j = 0; j < k; ++j) {
    scores[j] = FieldAt(PerlinNoise(FieldFor(cfg, j)), cell);
  }
  const double lo = *std::min_element(scores.begin(), scores.end());
  double sum = 0.0;
  for (double& s : scores) {
    s -= lo;
    sum += s;
  }
  DiscreteDistribution dist;
  dist.probabilities.resize(k);
  for (int j = 0; j < k; ++j) {
    const double shaped = sum < 1e-9 ? 1.0 / k : scores[j] / sum;
    dist.probabilities[j] = (1.0 - cfg.jitter) * shaped + cfg.jitter / k;
  }
  return dist;
}

double CellInfectionProbability(const ScenarioConfig& cfg, CellId cell) {
  const double field = FieldAt(PerlinNoise(FieldFor(cfg, 0)), cell);
  const double p = (1.0 - cfg.jitter) * (field + 1.0) / 2.0 + cfg.jitter * 0.5;
  return std::clamp(p, 0.01, 0.99);
}

int CellModalRank(const ScenarioConfig& cfg, CellId cell) {
  const double field = FieldAt(PerlinNoise(FieldFor(cfg, 0)), cell);
  const int m = cfg.rank_levels;
  const int rank = 1 + static_cast<int>(std::floor(m * (field + 1.0) / 2.0));
  return std::clamp(rank, 1, m);
}

double CellIncomeMean(const ScenarioConfig& cfg, CellId cell) {
  const double field = FieldAt(PerlinNoise(FieldFor(cfg, 0)), cell);
  return cfg.income_lo + (cfg.income_hi - cfg.income_lo) * (field + 1.0) / 2.0;
}

absl::StatusOr<Dataset> GenerateOnehotDataset(const ScenarioConfig& cfg) {
  if (absl::Status s = RequireScenario(cfg, ScenarioKind::kOneHot); !s.ok()) {
    return s;
  }
  return Generate(cfg, [&cfg](CellId cell) {
    DiscreteDistribution dist = CellCategoryDistribution(cfg, cell);
    return [dist = std::move(dist), k = cfg.categories](RngStream& rng) {
      return RecordValue(Categorical{static_cast<int>(dist.Sample(rng)), k});
    };
  });
}

absl::StatusOr<Dataset> GenerateBooleanDataset(const ScenarioConfig& cfg) {
  if (absl::Status s = RequireScenario(cfg, ScenarioKind::kBoolean); !s.ok()) {
    return s;
  }
  return Generate(cfg, [&cfg](CellId cell) {
    const double p = CellInfectionProbability(cfg, cell);
    return [p](RngStream& rng) {
      return RecordValue(Boolean{rng.UniformDouble() < p});
    };
  });
}

absl::StatusOr<Dataset> GenerateRankingDataset(const ScenarioConfig& cfg) {
  if (absl::Status s = RequireScenario(cfg, ScenarioKind::kRanking); !s.ok()) {
    return s;
  }
  return Generate(cfg, [&cfg](CellId cell) {
    const int modal = CellModalRank(cfg, cell);
    return [modal, m = cfg.rank_levels, jitter = cfg.jitter](RngStream& rng) {
      int rank = modal;
      if (rng.UniformDouble() < jitter) {
        rank = 1 + static_cast<int>(rng.UniformIndex(m));
      }
      return RecordValue(Rank{rank, m});
    };
  });
}

absl::StatusOr<Dataset> GenerateIncomeDataset(const ScenarioConfig& cfg) {
  if (absl::Status s = RequireScenario(cfg, ScenarioKind::kIncome); !s.ok()) {
    return s;
  }
  return Generate(cfg, [&cfg](CellId cell) {
    const double mean = CellIncomeMean(cfg, cell);
    return [mean, lo = cfg.income_lo, hi = cfg.income_hi,
            jitter = cfg.jitter](RngStream& rng) {
      double v = mean;
      if (jitter > 0) v += jitter * (hi - lo) * rng.StandardNormal();
      return RecordValue(FloatValue{std::clamp(v, lo, hi), lo, hi});
    };
  });
}

absl::StatusOr<Dataset> GenerateDataset(const ScenarioConfig& cfg) {
  switch (cfg.scenario) {
    case ScenarioKind::kOneHot:
      return GenerateOnehotDataset(cfg);
    case ScenarioKind::kBoolean:
      return GenerateBooleanDataset(cfg);
    case ScenarioKind::kRanking:
      return GenerateRankingDataset(cfg);
    case ScenarioKind::kIncome:
      return GenerateIncomeDataset(cfg);
  }
  return ConfigError("unknown scenario");
}

namespace {

json RecordToJson(const Record& rec) {
  json j{{"row", rec.cell().row}, {"col", rec.cell().col}};
  std::visit(
      [&j](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Categorical>) {
          j["type"] = "categorical";
          j["value"] = v.index;
          j["params"] = json{{"k", v.k}};
        } else if constexpr (std::is_same_v<T, Boolean>) {
          j["type"] = "boolean";
          j["value"] = v.value ? 1 : 0;
          j["params"] = json::object();
        } else if constexpr (std::is_same_v<T, Rank>) {
          j["type"] = "rank";
          j["value"] = v.rank;
          j["params"] = json{{"m", v.levels}};
        } else {
          j["type"] = "float";
          j["value"] = v.value;
          j["params"] = json{{"lo", v.lo}, {"hi", v.hi}};
        }
      },
      rec.value());
  return j;
}

absl::StatusOr<Record> RecordFromJson(const json& j) {
  try {
    const CellId cell{j.at("row").get<int>(), j.at("col").get<int>()};
    const std::string type = j.at("type").get<std::string>();
    const json& value = j.at("value");
    const json& params = j.at("params");
    if (type == "categorical") {
      return Record::Create(
          cell, Categorical{value.get<int>(), params.at("k").get<int>()});
    }
    if (type == "boolean") {
      const int b = value.get<int>();
      if (b != 0 && b != 1) {
        return absl::InvalidArgumentError("boolean value must be 0 or 1");
      }
      return Record::Create(cell, Boolean{b == 1});
    }
    if (type == "rank") {
      return Record::Create(cell,
                            Rank{value.get<int>(), params.at("m").get<int>()});
    }
    if (type == "float") {
      return Record::Create(
          cell, FloatValue{value.get<double>(), params.at("lo").get<double>(),
                           params.at("hi").get<double>()});
    }
    return absl::InvalidArgumentError(
        absl::StrCat("unknown record type '", type, "'"));
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed record: ", e.what()));
  }
}

}  // namespace

void WriteDatasetJsonl(const Dataset& dataset, std::ostream& out) {
  const json header{{"format", "geodp-dataset"},
                    {"version", 1},
                    {"config", ScenarioConfigToJson(dataset.config)}};
  out << header.dump() << '\n';
  for (const Record& rec : dataset.records) {
    out << RecordToJson(rec).dump() << '\n';
  }
}

absl::StatusOr<Dataset> ReadDatasetJsonl(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    return absl::InvalidArgumentError("dataset: missing header line");
  }
  Dataset dataset;
  try {
    const json header = json::parse(line);
    if (header.value("format", "") != "geodp-dataset") {
      return absl::InvalidArgumentError("dataset: bad header format tag");
    }
    absl::StatusOr<ScenarioConfig> cfg =
        ScenarioConfigFromJson(header.at("config"));
    if (!cfg.ok()) return cfg.status();
    dataset.config = *cfg;
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("dataset: malformed header: ", e.what()));
  }
  if (absl::Status s = dataset.config.Validate(); !s.ok()) return s;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      return absl::InvalidArgumentError(
          absl::StrCat("dataset line ", line_no, ": ", e.what()));
    }
    absl::StatusOr<Record> rec = RecordFromJson(j);
    if (!rec.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat("dataset line ", line_no, ": ", rec.status().message()));
    }
    if (!MatchesScenario(dataset.config.scenario, rec->value())) {
      return absl::InvalidArgumentError(absl::StrCat(
          "dataset line ", line_no, ": record type does not match scenario"));
    }
    if (rec->cell().row >= dataset.config.grid.rows ||
        rec->cell().col >= dataset.config.grid.cols) {
      return absl::InvalidArgumentError(
          absl::StrCat("dataset line ", line_no, ": cell outside grid"));
    }
    dataset.records.push_back(*std::move(rec));
  }
  return dataset;
}

absl::Status WriteDatasetFile(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    return absl::UnavailableError(
        absl::StrCat("IoFailure: cannot open ", path));
  WriteDatasetJsonl(dataset, out);
  out.flush();
  if (!out)
    return absl::UnavailableError(
        absl::StrCat("IoFailure: write failed for ", path));
  return absl::OkStatus();
}

absl::StatusOr<Dataset> ReadDatasetFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    return absl::UnavailableError(
        absl::StrCat("IoFailure: cannot open ", path));
  return ReadDatasetJsonl(in);
}

}  // namespace geodp
