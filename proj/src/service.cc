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

#include "geodp/service.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/strip.h"
#include "geodp/json_codec.h"
#include "httplib.h"

namespace geodp {
namespace {

using nlohmann::json;

constexpr double kDefaultDelta = 1.5e-7;
constexpr int kDefaultRecordsPerCell = 100;

absl::Status FieldError(absl::string_view field, absl::string_view what) {
  return absl::InvalidArgumentError(absl::StrCat(field, ": ", what));
}

absl::StatusOr<int64_t> ReadInt(const json& j, absl::string_view field,
                                int64_t fallback, bool required = false) {
  const std::string key(field);
  if (!j.contains(key) || j.at(key).is_null()) {
    if (required) return FieldError(field, "is required");
    return fallback;
  }
  const json& v = j.at(key);
  if (v.is_number_integer()) return v.get<int64_t>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::floor(d) == d && std::abs(d) < 9e15)
      return static_cast<int64_t>(d);
  }
  if (v.is_string()) {
    int64_t parsed;
    if (absl::SimpleAtoi(v.get<std::string>(), &parsed)) return parsed;
  }
  return FieldError(field, "expected an integer");
}

absl::StatusOr<uint64_t> ReadSeed(const json& j, bool required,
                                  uint64_t fallback) {
  if (!j.contains("seed") || j.at("seed").is_null()) {
    if (required) return FieldError("seed", "is required");
    return fallback;
  }
  const json& v = j.at("seed");
  if (v.is_number_unsigned()) return v.get<uint64_t>();
  if (v.is_number_integer()) {
    if (v.get<int64_t>() < 0) return FieldError("seed", "must be >= 0");
    return static_cast<uint64_t>(v.get<int64_t>());
  }
  if (v.is_string()) {
    uint64_t parsed;
    if (absl::SimpleAtoi(v.get<std::string>(), &parsed)) return parsed;
  }
  return FieldError("seed", "expected a non-negative integer");
}

absl::StatusOr<std::string> ReadString(const json& j, absl::string_view field,
                                       absl::string_view fallback,
                                       bool required = false) {
  const std::string key(field);
  if (!j.contains(key) || j.at(key).is_null()) {
    if (required) return FieldError(field, "is required");
    return std::string(fallback);
  }
  if (!j.at(key).is_string()) return FieldError(field, "expected a string");
  return j.at(key).get<std::string>();
}

// Decodes the dataset part shared by simulate and sweep requests.
absl::Status ReadDataFields(const json& j, ScenarioConfig& data) {
  absl::StatusOr<double> d;
  GridSpec& g = data.grid;
  for (auto [name, slot] :
       {std::pair<const char*, double*>{"lat_min", &g.lat_min},
        {"lat_max", &g.lat_max},
        {"lon_min", &g.lon_min},
        {"lon_max", &g.lon_max},
        {"income_lo", &data.income_lo},
        {"income_hi", &data.income_hi},
        {"jitter", &data.jitter},
        {"frequency", &data.frequency}}) {
    if (d = ReadNumber(j, name, *slot); !d.ok()) return d.status();
    *slot = *d;
  }
  absl::StatusOr<int64_t> i;
  for (auto [name, slot, lo, hi] :
       {std::tuple<const char*, int*, int64_t, int64_t>{"rows", &g.rows, 1,
                                                        kMaxGridCells},
        {"cols", &g.cols, 1, kMaxGridCells},
        {"records_per_cell", &data.records_per_cell, 1, 100'000'000},
        {"categories", &data.categories, 2, 1024},
        {"rank_levels", &data.rank_levels, 2, 1024},
        {"octaves", &data.octaves, 1, 16}}) {
    if (i = ReadInt(j, name, *slot); !i.ok()) return i.status();
    if (*i < lo || *i > hi) {
      return FieldError(
          name, absl::StrCat("must be in [", lo, ", ", hi, "], got ", *i));
    }
    *slot = static_cast<int>(*i);
  }
  if (!(g.lat_min < g.lat_max)) {
    return FieldError("lat_min", "must be < lat_max");
  }
  if (!(g.lon_min < g.lon_max)) {
    return FieldError("lon_min", "must be < lon_max");
  }
  if (g.cell_count() > kMaxGridCells) {
    return FieldError("rows",
                      absl::StrCat("rows*cols must be <= ", kMaxGridCells));
  }
  if (!(data.jitter >= 0 && data.jitter <= 1)) {
    return FieldError("jitter", "must be in [0, 1]");
  }
  if (!(data.frequency > 0) || !std::isfinite(data.frequency)) {
    return FieldError("frequency", "must be positive");
  }
  if (!(data.income_lo < data.income_hi) || !std::isfinite(data.income_lo) ||
      !std::isfinite(data.income_hi)) {
    return FieldError("income_lo", "must be < income_hi");
  }
  return data.Validate();
}

json LedgerJson(const AggregateResult& result) {
  json entries = json::array();
  for (const BudgetEntry& e : result.ledger) {
    entries.push_back(BudgetEntryToJson(e));
  }
  return json{{"entries", entries},
              {"per_user_epsilon", NumberOrNull(result.per_user.epsilon)},
              {"per_user_delta", result.per_user.delta},
              {"composed_epsilon", NumberOrNull(result.composed.epsilon)},
              {"composed_delta", result.composed.delta},
              {"shuffled", true},
              {"shuffle_amplification_applied", false}};
}

json ErrorBody(const absl::Status& status) {
  json body{{"error", std::string(status.message())}};
  const std::string field = ErrorField(status);
  if (!field.empty()) body["field"] = field;
  return body;
}

void SendJson(httplib::Response& res, int code, const std::string& body) {
  res.status = code;
  res.set_content(body, "application/json");
}

void SendError(httplib::Response& res, const absl::Status& status) {
  const int code = HttpStatusFor(status);
  if (code == 500) {
    SendJson(res, 500, json{{"error", "internal error"}}.dump());
    return;
  }
  SendJson(res, code, ErrorBody(status).dump());
}

absl::StatusOr<json> ParseBody(const httplib::Request& req) {
  json body = json::parse(req.body, nullptr, /*allow_exceptions=*/false);
  if (body.is_discarded() || !body.is_object()) {
    return FieldError("body", "expected a JSON object");
  }
  return body;
}

}  // namespace

int ExitCodeFor(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kOk:
      return 0;
    case absl::StatusCode::kResourceExhausted:
      return 4;
    case absl::StatusCode::kUnavailable:
    case absl::StatusCode::kNotFound:
    case absl::StatusCode::kDataLoss:
      return 3;
    default:
      return 2;
  }
}

int HttpStatusFor(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kOk:
      return 200;
    case absl::StatusCode::kInvalidArgument:
      return 400;
    case absl::StatusCode::kFailedPrecondition:
    case absl::StatusCode::kResourceExhausted:
      return 422;
    case absl::StatusCode::kOutOfRange:
      return 413;
    default:
      return 500;
  }
}

std::string ErrorField(const absl::Status& status) {
  if (status.code() != absl::StatusCode::kInvalidArgument) return "";
  const absl::string_view msg = status.message();
  const size_t colon = msg.find(": ");
  if (colon == absl::string_view::npos) return "";
  const absl::string_view head = msg.substr(0, colon);
  for (char c : head) {
    if (!(absl::ascii_islower(c) || c == '_')) return "";
  }
  return std::string(head);
}

absl::StatusOr<RunRequest> ParseRunRequest(const json& j, bool require_seed) {
  if (!j.is_object()) return FieldError("body", "expected a JSON object");
  RunRequest request;
  request.data.records_per_cell = kDefaultRecordsPerCell;
  // A nested "data" object (as in the response's config echo) seeds the
  // dataset fields; flat keys override it.
  if (j.contains("data") && !j.at("data").is_null()) {
    absl::StatusOr<ScenarioConfig> data = ScenarioConfigFromJson(j.at("data"));
    if (!data.ok()) {
      return FieldError("data", data.status().message());
    }
    request.data = *data;
  }

  absl::StatusOr<std::string> scenario_name =
      ReadString(j, "scenario", "", /*required=*/true);
  if (!scenario_name.ok()) return scenario_name.status();
  absl::StatusOr<ScenarioKind> scenario = ParseScenario(*scenario_name);
  if (!scenario.ok())
    return FieldError("scenario", scenario.status().message());
  request.data.scenario = *scenario;

  absl::StatusOr<std::string> mech_name = ReadString(j, "mechanism", "none");
  if (!mech_name.ok()) return mech_name.status();
  absl::StatusOr<MechanismKind> mech = ParseMechanism(*mech_name);
  if (!mech.ok()) return FieldError("mechanism", mech.status().message());

  constexpr double kInf = std::numeric_limits<double>::infinity();
  const bool has_epsilon = j.contains("epsilon") && !j.at("epsilon").is_null();
  absl::StatusOr<double> epsilon = ReadNumber(j, "epsilon", kInf);
  if (!epsilon.ok()) return epsilon.status();
  if (*mech == MechanismKind::kNone) {
    if (has_epsilon && !std::isinf(*epsilon)) {
      return FieldError("epsilon", "mechanism none takes epsilon = inf");
    }
    request.mechanism = MechanismConfig::None();
  } else {
    if (!has_epsilon) return FieldError("epsilon", "is required");
    if (std::isnan(*epsilon) || !(*epsilon > 0) || std::isinf(*epsilon)) {
      return FieldError("epsilon", absl::StrCat("must be a positive finite "
                                                "number, got ",
                                                *epsilon));
    }
    if (*mech == MechanismKind::kGaussian) {
      absl::StatusOr<double> delta = ReadNumber(j, "delta", kDefaultDelta);
      if (!delta.ok()) return delta.status();
      if (!(*delta > 0 && *delta < 1)) {
        return FieldError("delta",
                          absl::StrCat("must be in (0, 1), got ", *delta));
      }
      request.mechanism = MechanismConfig::Gaussian(*epsilon, *delta);
    } else {
      absl::StatusOr<double> delta = ReadNumber(j, "delta", 0.0);
      if (!delta.ok()) return delta.status();
      if (*delta != 0.0) {
        return FieldError("delta", "only the gaussian mechanism takes a delta");
      }
      request.mechanism = MechanismConfig{.kind = *mech, .epsilon = *epsilon};
    }
  }

  if (absl::Status s = ReadDataFields(j, request.data); !s.ok()) return s;

  absl::StatusOr<int64_t> min_cohort = ReadInt(j, "min_cohort", 0);
  if (!min_cohort.ok()) return min_cohort.status();
  if (*min_cohort < 0 || *min_cohort > std::numeric_limits<int>::max()) {
    return FieldError("min_cohort", "must be >= 0");
  }
  request.min_cohort = static_cast<int>(*min_cohort);

  absl::StatusOr<uint64_t> seed = ReadSeed(j, require_seed, 0);
  if (!seed.ok()) return seed.status();
  request.seed = *seed;
  request.data.seed = *seed;

  if (j.contains("max_epsilon") && !j.at("max_epsilon").is_null()) {
    absl::StatusOr<double> cap_eps = ReadNumber(j, "max_epsilon", kInf);
    if (!cap_eps.ok()) return cap_eps.status();
    absl::StatusOr<double> cap_delta = ReadNumber(j, "max_delta", 1.0);
    if (!cap_delta.ok()) return cap_delta.status();
    if (std::isnan(*cap_eps) || *cap_eps < 0) {
      return FieldError("max_epsilon", "must be >= 0");
    }
    if (std::isnan(*cap_delta) || *cap_delta < 0) {
      return FieldError("max_delta", "must be >= 0");
    }
    request.budget_cap = EpsilonDelta{*cap_eps, *cap_delta};
  }

  if (!IsAdmissible(request.data.scenario, request.mechanism.kind)) {
    return absl::FailedPreconditionError(
        absl::StrCat("InadmissibleMechanism: mechanism ",
                     MechanismName(request.mechanism.kind),
                     " cannot be applied to scenario ",
                     ScenarioName(request.data.scenario)));
  }
  return request;
}

json RunRequestToJson(const RunRequest& request) {
  json j{{"scenario", std::string(ScenarioName(request.data.scenario))},
         {"mechanism", std::string(MechanismName(request.mechanism.kind))},
         {"epsilon", NumberOrNull(request.mechanism.epsilon)},
         {"delta", request.mechanism.delta},
         {"min_cohort", request.min_cohort},
         {"seed", request.seed},
         {"data", ScenarioConfigToJson(request.data)}};
  if (request.budget_cap.has_value()) {
    j["max_epsilon"] = NumberOrNull(request.budget_cap->epsilon);
    j["max_delta"] = request.budget_cap->delta;
  }
  return j;
}

json RunResponseToJson(const RunRequest& request,
                       const AggregateResult& result) {
  json cells = json::array();
  for (const CellResult& cell : result.cells) {
    json c{{"row", cell.id.row},
           {"col", cell.id.col},
           {"bounds", BoundsToJson(cell.bounds)},
           {"true_aggregate", cell.true_aggregate},
           {"private_aggregate", nullptr},
           {"count", cell.count},
           {"suppressed", cell.suppressed}};
    if (cell.private_aggregate.has_value()) {
      c["private_aggregate"] = *cell.private_aggregate;
    }
    cells.push_back(std::move(c));
  }
  return json{{"schema_version", kSchemaVersion},
              {"config", RunRequestToJson(request)},
              {"cells", cells},
              {"mse", result.mse.has_value() ? json(*result.mse) : json()},
              {"suppressed_cells", result.suppressed_cells},
              {"ledger", LedgerJson(result)}};
}

absl::StatusOr<json> ExecuteRunOnDataset(const Dataset& dataset,
                                         RunRequest request) {
  if (dataset.config.scenario != request.data.scenario) {
    return FieldError(
        "scenario",
        absl::StrCat("dataset holds ", ScenarioName(dataset.config.scenario),
                     " records"));
  }
  request.data = dataset.config;
  PipelineConfig cfg{.scenario = request.data.scenario,
                     .mechanism = request.mechanism,
                     .min_cohort = request.min_cohort,
                     .seed = request.seed,
                     .budget_cap = request.budget_cap};
  absl::StatusOr<AggregateResult> result = RunPipeline(dataset, cfg);
  if (!result.ok()) return result.status();
  return RunResponseToJson(request, *result);
}

absl::StatusOr<json> ExecuteRun(const RunRequest& request) {
  absl::StatusOr<Dataset> dataset = GenerateDataset(request.data);
  if (!dataset.ok()) return dataset.status();
  return ExecuteRunOnDataset(*dataset, request);
}

std::string SerializeResponse(const json& response) {
  return response.dump(2) + "\n";
}

absl::StatusOr<SweepConfig> ParseSweepRequest(const json& j,
                                              bool require_seed) {
  if (!j.is_object()) return FieldError("body", "expected a JSON object");
  SweepConfig cfg;
  cfg.data.records_per_cell = 200;
  if (j.contains("epsilons")) {
    const json& e = j.at("epsilons");
    if (!e.is_array()) return FieldError("epsilons", "expected an array");
    cfg.epsilons.clear();
    for (const json& v : e) {
      json wrapper{{"epsilons", v}};
      absl::StatusOr<double> d = ReadNumber(wrapper, "epsilons", 0.0);
      if (!d.ok()) return d.status();
      cfg.epsilons.push_back(*d);
    }
  }
  auto read_names = [&j](const char* field, auto parse,
                         auto& out) -> absl::Status {
    if (!j.contains(field)) return absl::OkStatus();
    const json& arr = j.at(field);
    if (!arr.is_array()) return FieldError(field, "expected an array");
    out.clear();
    for (const json& v : arr) {
      if (!v.is_string()) return FieldError(field, "expected strings");
      auto parsed = parse(v.get<std::string>());
      if (!parsed.ok()) return FieldError(field, parsed.status().message());
      out.push_back(*parsed);
    }
    return absl::OkStatus();
  };
  if (absl::Status s = read_names("scenarios", ParseScenario, cfg.scenarios);
      !s.ok()) {
    return s;
  }
  if (absl::Status s = read_names("mechanisms", ParseMechanism, cfg.mechanisms);
      !s.ok()) {
    return s;
  }
  absl::StatusOr<int64_t> reps = ReadInt(j, "repetitions", cfg.repetitions);
  if (!reps.ok()) return reps.status();
  if (*reps < 1 || *reps > 10'000) {
    return FieldError("repetitions", "must be in [1, 10000]");
  }
  cfg.repetitions = static_cast<int>(*reps);
  absl::StatusOr<double> delta = ReadNumber(j, "delta", cfg.delta);
  if (!delta.ok()) return delta.status();
  cfg.delta = *delta;
  absl::StatusOr<int64_t> min_cohort = ReadInt(j, "min_cohort", 0);
  if (!min_cohort.ok()) return min_cohort.status();
  if (*min_cohort < 0 || *min_cohort > std::numeric_limits<int>::max()) {
    return FieldError("min_cohort", "must be >= 0");
  }
  cfg.min_cohort = static_cast<int>(*min_cohort);
  absl::StatusOr<uint64_t> seed = ReadSeed(j, require_seed, 0);
  if (!seed.ok()) return seed.status();
  cfg.base_seed = *seed;
  // The data template is validated per scenario by SweepConfig::Validate.
  cfg.data.scenario =
      cfg.scenarios.empty() ? ScenarioKind::kBoolean : cfg.scenarios.front();
  if (absl::Status s = ReadDataFields(j, cfg.data); !s.ok()) return s;
  if (absl::Status s = cfg.Validate(); !s.ok()) return s;
  return cfg;
}

json SweepResponseToJson(const SweepTable& table) {
  json report = ReportToJson(table);
  json averages = json::object();
  for (const auto& [mech, points] : AverageAcrossScenarios(table)) {
    json series = json::array();
    for (const auto& [eps, mean] : points) {
      series.push_back(json{{"epsilon", NumberOrNull(eps)},
                            {"mean_mse", NumberOrNull(mean)}});
    }
    averages[std::string(MechanismName(mech))] = series;
  }
  json stats = json::array();
  for (const auto& [key, series] : SummarizeSeries(table)) {
    for (const SeriesPoint& p : series) {
      stats.push_back(
          json{{"scenario", std::string(ScenarioName(key.first))},
               {"mechanism", std::string(MechanismName(key.second))},
               {"epsilon", NumberOrNull(p.epsilon)},
               {"mean_mse", NumberOrNull(p.mean)},
               {"stddev_mse", NumberOrNull(p.stddev)}});
    }
  }
  report["scenario_averages"] = averages;
  report["series"] = stats;
  return report;
}

json MetaJson() {
  json scenarios = json::array();
  json admissible = json::object();
  for (ScenarioKind s : kAllScenarios) {
    scenarios.push_back(std::string(ScenarioName(s)));
    json mechs = json::array();
    for (MechanismKind m : kAllMechanisms) {
      if (IsAdmissible(s, m)) mechs.push_back(std::string(MechanismName(m)));
    }
    admissible[std::string(ScenarioName(s))] = mechs;
  }
  json mechanisms = json::array();
  for (MechanismKind m : kAllMechanisms) {
    mechanisms.push_back(std::string(MechanismName(m)));
  }
  const SweepConfig sweep;
  return json{{"schema_version", kSchemaVersion},
              {"scenarios", scenarios},
              {"mechanisms", mechanisms},
              {"admissible", admissible},
              {"default_grid", GridSpecToJson(GridSpec::Pittsburgh())},
              {"default_epsilons", sweep.epsilons},
              {"default_delta", kDefaultDelta},
              {"default_records_per_cell", kDefaultRecordsPerCell},
              {"limits",
               {{"max_simulate_records", kMaxSimulateRecords},
                {"max_sweep_records", kMaxSweepRecords}}}};
}

absl::StatusOr<json> LoadConfigFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    return absl::UnavailableError(
        absl::StrCat("IoFailure: cannot open ", path));
  }
  json out = json::object();
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    absl::string_view view = line;
    if (const size_t hash = view.find('#'); hash != absl::string_view::npos) {
      view = view.substr(0, hash);
    }
    view = absl::StripAsciiWhitespace(view);
    if (view.empty()) continue;
    const size_t eq = view.find('=');
    if (eq == absl::string_view::npos) {
      return absl::InvalidArgumentError(absl::StrCat(
          "config: line ", line_no, " is not of the form key = value"));
    }
    const std::string key(absl::StripAsciiWhitespace(view.substr(0, eq)));
    std::string value(absl::StripAsciiWhitespace(view.substr(eq + 1)));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      out[key] = value.substr(1, value.size() - 2);
      continue;
    }
    int64_t as_int;
    double as_double;
    if (absl::SimpleAtoi(value, &as_int)) {
      out[key] = as_int;
    } else if (absl::SimpleAtod(value, &as_double) &&
               std::isfinite(as_double)) {
      out[key] = as_double;
    } else {
      out[key] = value;
    }
  }
  return out;
}

void ConfigureServer(httplib::Server& server, const std::string& static_dir) {
  server.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
    res.status = 200;
    res.set_content("ok\n", "text/plain");
  });
  server.Get("/api/v1/meta",
             [](const httplib::Request&, httplib::Response& res) {
               SendJson(res, 200, MetaJson().dump());
             });
  server.Post("/api/v1/simulate", [](const httplib::Request& req,
                                     httplib::Response& res) {
    absl::StatusOr<json> body = ParseBody(req);
    if (!body.ok()) return SendError(res, body.status());
    absl::StatusOr<RunRequest> request =
        ParseRunRequest(*body, /*require_seed=*/true);
    if (!request.ok()) return SendError(res, request.status());
    const int64_t work = request->data.grid.cell_count() *
                         int64_t{request->data.records_per_cell};
    if (work > kMaxSimulateRecords) {
      return SendError(res, absl::OutOfRangeError(absl::StrCat(
                                "request needs ", work, " records; limit is ",
                                kMaxSimulateRecords)));
    }
    absl::StatusOr<json> response = ExecuteRun(*request);
    if (!response.ok()) return SendError(res, response.status());
    SendJson(res, 200, SerializeResponse(*response));
  });
  server.Post(
      "/api/v1/sweep", [](const httplib::Request& req, httplib::Response& res) {
        absl::StatusOr<json> body = ParseBody(req);
        if (!body.ok()) return SendError(res, body.status());
        absl::StatusOr<SweepConfig> cfg =
            ParseSweepRequest(*body, /*require_seed=*/true);
        if (!cfg.ok()) return SendError(res, cfg.status());
        const int64_t work = cfg->TupleCount() * cfg->data.grid.cell_count() *
                             int64_t{cfg->data.records_per_cell};
        if (work > kMaxSweepRecords) {
          return SendError(res, absl::OutOfRangeError(absl::StrCat(
                                    "sweep needs ", work, " records; limit is ",
                                    kMaxSweepRecords)));
        }
        absl::StatusOr<SweepTable> table = RunSweep(*cfg);
        if (!table.ok()) return SendError(res, table.status());
        SendJson(res, 200, SweepResponseToJson(*table).dump());
      });
  server.set_exception_handler(
      [](const httplib::Request&, httplib::Response& res, std::exception_ptr) {
        SendJson(res, 500, json{{"error", "internal error"}}.dump());
      });
  if (!static_dir.empty() && std::filesystem::is_directory(static_dir)) {
    server.set_mount_point("/", static_dir);
  }
}

}  // namespace geodp
