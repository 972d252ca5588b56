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

#include "geodp/evaluation.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "geodp/json_codec.h"
#include "geodp/pipeline.h"
#include "geodp/rng.h"

namespace geodp {
namespace {

using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

absl::StatusOr<double> ParseDouble(absl::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed number '", s, "'"));
  }
  return v;
}

absl::StatusOr<int> ParseInt(absl::string_view s) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed integer '", s, "'"));
  }
  return v;
}

double Mean(const std::vector<double>& v) {
  double total = 0.0;
  for (double x : v) total += x;
  return total / static_cast<double>(v.size());
}

}  // namespace

absl::Status SweepConfig::Validate() const {
  if (epsilons.empty()) {
    return absl::InvalidArgumentError("epsilons: grid must be non-empty");
  }
  for (size_t i = 0; i < epsilons.size(); ++i) {
    const double e = epsilons[i];
    if (std::isnan(e) || !(e > 0)) {
      return absl::InvalidArgumentError(
          absl::StrCat("epsilons: values must be positive, got ", e));
    }
    if (std::isinf(e) && i + 1 != epsilons.size()) {
      return absl::InvalidArgumentError(
          "epsilons: infinity may only appear as the last entry");
    }
    if (i > 0 && !(epsilons[i - 1] < e)) {
      return absl::InvalidArgumentError(
          "epsilons: grid must be strictly ascending");
    }
  }
  if (repetitions < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("repetitions: must be >= 1, got ", repetitions));
  }
  if (scenarios.empty()) {
    return absl::InvalidArgumentError("scenarios: must be non-empty");
  }
  if (mechanisms.empty()) {
    return absl::InvalidArgumentError("mechanisms: must be non-empty");
  }
  if (!(delta > 0 && delta < 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("delta: must be in (0, 1), got ", delta));
  }
  if (min_cohort < 0) {
    return absl::InvalidArgumentError("min_cohort: must be >= 0");
  }
  for (ScenarioKind s : scenarios) {
    ScenarioConfig c = data;
    c.scenario = s;
    if (absl::Status st = c.Validate(); !st.ok()) return st;
  }
  return absl::OkStatus();
}

int64_t SweepConfig::TupleCount() const {
  int64_t pairs = 0;
  for (ScenarioKind s : scenarios) {
    for (MechanismKind m : mechanisms) pairs += IsAdmissible(s, m) ? 1 : 0;
  }
  return pairs * static_cast<int64_t>(epsilons.size()) * repetitions;
}

absl::StatusOr<SweepTable> RunSweep(const SweepConfig& cfg) {
  if (absl::Status s = cfg.Validate(); !s.ok()) return s;
  SweepTable table;
  table.rows.reserve(static_cast<size_t>(cfg.TupleCount()));
  uint64_t tuple = 0;
  for (ScenarioKind scenario : cfg.scenarios) {
    ScenarioConfig data_cfg = cfg.data;
    data_cfg.scenario = scenario;
    data_cfg.seed = cfg.base_seed;
    absl::StatusOr<Dataset> dataset = GenerateDataset(data_cfg);
    if (!dataset.ok()) return dataset.status();
    for (MechanismKind mech_kind : cfg.mechanisms) {
      if (!IsAdmissible(scenario, mech_kind)) continue;
      for (double epsilon : cfg.epsilons) {
        MechanismConfig mech;
        if (std::isinf(epsilon) || mech_kind == MechanismKind::kNone) {
          mech = MechanismConfig::None();
        } else if (mech_kind == MechanismKind::kGaussian) {
          mech = MechanismConfig::Gaussian(epsilon, cfg.delta);
        } else {
          mech = MechanismConfig{.kind = mech_kind, .epsilon = epsilon};
        }
        for (int rep = 0; rep < cfg.repetitions; ++rep, ++tuple) {
          PipelineConfig pcfg{.scenario = scenario,
                              .mechanism = mech,
                              .min_cohort = cfg.min_cohort,
                              .seed = MixSeed(cfg.base_seed, tuple)};
          absl::StatusOr<AggregateResult> result = RunPipeline(*dataset, pcfg);
          if (!result.ok()) return result.status();
          table.rows.push_back(
              SweepRow{.scenario = scenario,
                       .mechanism = mech_kind,
                       .epsilon = epsilon,
                       .repetition = rep,
                       .mse = result->mse.value_or(kNaN),
                       .suppressed_cells = result->suppressed_cells,
                       .per_user_epsilon = result->per_user.epsilon,
                       .composed_epsilon = result->composed.epsilon});
        }
      }
    }
  }
  return table;
}

std::map<SeriesKey, std::vector<SeriesPoint>> SummarizeSeries(
    const SweepTable& table) {
  std::map<SeriesKey, std::map<double, std::vector<double>>> grouped;
  for (const SweepRow& row : table.rows) {
    grouped[{row.scenario, row.mechanism}][row.epsilon].push_back(row.mse);
  }
  std::map<SeriesKey, std::vector<SeriesPoint>> out;
  for (const auto& [key, by_eps] : grouped) {
    std::vector<SeriesPoint>& series = out[key];
    for (const auto& [eps, values] : by_eps) {
      SeriesPoint p{.epsilon = eps, .mean = Mean(values)};
      double sq = 0.0;
      for (double v : values) sq += (v - p.mean) * (v - p.mean);
      p.stddev = values.size() > 1
                     ? std::sqrt(sq / static_cast<double>(values.size() - 1))
                     : 0.0;
      p.min = *std::min_element(values.begin(), values.end());
      p.max = *std::max_element(values.begin(), values.end());
      series.push_back(p);
    }
  }
  return out;
}

std::map<MechanismKind, std::vector<std::pair<double, double>>>
AverageAcrossScenarios(const SweepTable& table) {
  std::map<MechanismKind, std::map<double, std::vector<double>>> grouped;
  for (const auto& [key, series] : SummarizeSeries(table)) {
    for (const SeriesPoint& p : series) {
      grouped[key.second][p.epsilon].push_back(p.mean);
    }
  }
  std::map<MechanismKind, std::vector<std::pair<double, double>>> out;
  for (const auto& [mech, by_eps] : grouped) {
    for (const auto& [eps, means] : by_eps) {
      out[mech].emplace_back(eps, Mean(means));
    }
  }
  return out;
}

std::string FormatDouble(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void WriteReportCsv(const SweepTable& table, std::ostream& out) {
  out << absl::StrJoin(kReportColumns, ",") << '\n';
  for (const SweepRow& r : table.rows) {
    out << ScenarioName(r.scenario) << ',' << MechanismName(r.mechanism) << ','
        << FormatDouble(r.epsilon) << ',' << r.repetition << ','
        << FormatDouble(r.mse) << ',' << r.suppressed_cells << ','
        << FormatDouble(r.per_user_epsilon) << ','
        << FormatDouble(r.composed_epsilon) << '\n';
  }
}

absl::StatusOr<SweepTable> ReadReportCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != absl::StrJoin(kReportColumns, ",")) {
    return absl::InvalidArgumentError("report: missing or unexpected header");
  }
  SweepTable table;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<absl::string_view> f = absl::StrSplit(line, ',');
    if (f.size() != std::size(kReportColumns)) {
      return absl::InvalidArgumentError(
          absl::StrCat("report: expected 8 fields, got ", f.size()));
    }
    SweepRow row;
    absl::StatusOr<ScenarioKind> scenario = ParseScenario(f[0]);
    if (!scenario.ok()) return scenario.status();
    row.scenario = *scenario;
    absl::StatusOr<MechanismKind> mech = ParseMechanism(f[1]);
    if (!mech.ok()) return mech.status();
    row.mechanism = *mech;
    absl::StatusOr<double> d = ParseDouble(f[2]);
    if (!d.ok()) return d.status();
    row.epsilon = *d;
    absl::StatusOr<int> i = ParseInt(f[3]);
    if (!i.ok()) return i.status();
    row.repetition = *i;
    if (d = ParseDouble(f[4]); !d.ok()) return d.status();
    row.mse = *d;
    if (i = ParseInt(f[5]); !i.ok()) return i.status();
    row.suppressed_cells = *i;
    if (d = ParseDouble(f[6]); !d.ok()) return d.status();
    row.per_user_epsilon = *d;
    if (d = ParseDouble(f[7]); !d.ok()) return d.status();
    row.composed_epsilon = *d;
    table.rows.push_back(row);
  }
  return table;
}

json ReportToJson(const SweepTable& table) {
  json rows = json::array();
  for (const SweepRow& r : table.rows) {
    rows.push_back(
        json{{"scenario", std::string(ScenarioName(r.scenario))},
             {"mechanism", std::string(MechanismName(r.mechanism))},
             {"epsilon", NumberOrNull(r.epsilon)},
             {"repetition", r.repetition},
             {"mse", NumberOrNull(r.mse)},
             {"suppressed_cells", r.suppressed_cells},
             {"per_user_epsilon", NumberOrNull(r.per_user_epsilon)},
             {"composed_epsilon", NumberOrNull(r.composed_epsilon)}});
  }
  json columns = json::array();
  for (const char* c : kReportColumns) columns.push_back(c);
  return json{
      {"schema_version", 1},
      {"columns", columns},
      {"rows", rows},
      {"notes",
       "gaussian rows are (epsilon, delta)-DP; rr and exponential rows are "
       "pure epsilon-DP. null epsilons denote infinity (no privacy), null mse "
       "denotes a run with every cell suppressed."}};
}

absl::StatusOr<SweepTable> ReportFromJson(const json& j) {
  SweepTable table;
  try {
    for (const json& r : j.at("rows")) {
      SweepRow row;
      absl::StatusOr<ScenarioKind> scenario =
          ParseScenario(r.at("scenario").get<std::string>());
      if (!scenario.ok()) return scenario.status();
      row.scenario = *scenario;
      absl::StatusOr<MechanismKind> mech =
          ParseMechanism(r.at("mechanism").get<std::string>());
      if (!mech.ok()) return mech.status();
      row.mechanism = *mech;
      auto number = [&r](const char* key, double null_value) {
        const json& v = r.at(key);
        return v.is_null() ? null_value : v.get<double>();
      };
      row.epsilon = number("epsilon", kInf);
      row.repetition = r.at("repetition").get<int>();
      row.mse = number("mse", kNaN);
      row.suppressed_cells = r.at("suppressed_cells").get<int>();
      row.per_user_epsilon = number("per_user_epsilon", kInf);
      row.composed_epsilon = number("composed_epsilon", kInf);
      table.rows.push_back(row);
    }
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("report: malformed JSON: ", e.what()));
  }
  return table;
}

absl::Status EmitReport(const SweepTable& table, ReportFormat format,
                        const std::string& path) {
  if (table.rows.empty()) {
    return absl::InvalidArgumentError("report: table is empty");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    return absl::UnavailableError(
        absl::StrCat("IoFailure: cannot open ", path));
  }
  if (format == ReportFormat::kCsv) {
    WriteReportCsv(table, out);
  } else {
    out << ReportToJson(table).dump(2) << '\n';
  }
  out.flush();
  if (!out) {
    return absl::UnavailableError(
        absl::StrCat("IoFailure: write failed for ", path));
  }
  return absl::OkStatus();
}

absl::StatusOr<SweepTable> ReadReport(ReportFormat format,
                                      const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return absl::UnavailableError(
        absl::StrCat("IoFailure: cannot open ", path));
  }
  if (format == ReportFormat::kCsv) return ReadReportCsv(in);
  try {
    return ReportFromJson(json::parse(in));
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("report: malformed JSON: ", e.what()));
  }
}

}  // namespace geodp
