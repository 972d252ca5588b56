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

// Command-line front end: generate datasets, run single simulations, run
// epsilon sweeps and serve the HTTP API.
//
// Exit codes: 0 success, 2 invalid flags or parameters, 3 I/O failure,
// 4 privacy budget exceeded.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "geodp/evaluation.h"
#include "geodp/service.h"
#include "geodp/synthgen.h"
#include "httplib.h"
#include "json.hpp"

namespace {

using nlohmann::json;

enum class Kind { kString, kNumber, kList };

struct FlagSpec {
  const char* flag;
  const char* field;
  Kind kind;
  const char* help;
};

const std::vector<FlagSpec> kDataFlags = {
    {"--scenario", "scenario", Kind::kString, "onehot|boolean|ranking|income"},
    {"--rows", "rows", Kind::kNumber, "Grid rows"},
    {"--cols", "cols", Kind::kNumber, "Grid columns"},
    {"--n", "records_per_cell", Kind::kNumber, "Records per cell"},
    {"--seed", "seed", Kind::kNumber, "Seed for data generation and the run"},
    {"--jitter", "jitter", Kind::kNumber, "Spatially flat component in [0,1]"},
    {"--categories", "categories", Kind::kNumber, "One-hot categories"},
    {"--levels", "rank_levels", Kind::kNumber, "Rank levels"},
    {"--income-lo", "income_lo", Kind::kNumber, "Income lower bound"},
    {"--income-hi", "income_hi", Kind::kNumber, "Income upper bound"},
    {"--lat-min", "lat_min", Kind::kNumber, "Bounding box south edge"},
    {"--lat-max", "lat_max", Kind::kNumber, "Bounding box north edge"},
    {"--lon-min", "lon_min", Kind::kNumber, "Bounding box west edge"},
    {"--lon-max", "lon_max", Kind::kNumber, "Bounding box east edge"},
    {"--frequency", "frequency", Kind::kNumber, "Perlin cells per grid cell"},
    {"--octaves", "octaves", Kind::kNumber, "Perlin octaves"},
};

const std::vector<FlagSpec> kRunFlags = {
    {"--mechanism", "mechanism", Kind::kString, "none|rr|exponential|gaussian"},
    {"--epsilon", "epsilon", Kind::kNumber, "Privacy budget, or inf"},
    {"--delta", "delta", Kind::kNumber, "Gaussian delta"},
    {"--min-cohort", "min_cohort", Kind::kNumber, "Minimum reports per cell"},
    {"--max-epsilon", "max_epsilon", Kind::kNumber, "Cap on composed epsilon"},
    {"--max-delta", "max_delta", Kind::kNumber, "Cap on composed delta"},
};

const std::vector<FlagSpec> kSweepFlags = {
    {"--epsilons", "epsilons", Kind::kList, "Ascending comma-separated grid"},
    {"--reps", "repetitions", Kind::kNumber, "Repetitions per grid point"},
    {"--scenarios", "scenarios", Kind::kList, "Comma-separated scenarios"},
    {"--mechanisms", "mechanisms", Kind::kList, "Comma-separated mechanisms"},
    {"--delta", "delta", Kind::kNumber, "Gaussian delta"},
    {"--min-cohort", "min_cohort", Kind::kNumber, "Minimum reports per cell"},
};

// A set of flags bound to one subcommand.
class FlagSet {
 public:
  void Add(CLI::App* app, const std::vector<FlagSpec>& specs) {
    for (const FlagSpec& spec : specs) {
      auto bound = std::make_unique<Bound>();
      bound->spec = spec;
      bound->option = app->add_option(spec.flag, bound->value, spec.help);
      bound_.push_back(std::move(bound));
    }
  }

  // Overlays explicitly given flags onto `request`.
  void Apply(json& request) const {
    for (const auto& b : bound_) {
      if (b->option->count() > 0) {
        request[b->spec.field] = TypedValue(b->value, b->spec.kind);
      }
    }
  }

  std::string FlagFor(const std::string& field) const {
    for (const auto& b : bound_) {
      if (field == b->spec.field) return b->spec.flag;
    }
    return field;
  }

  Kind KindOf(const std::string& field) const {
    for (const auto& b : bound_) {
      if (field == b->spec.field) return b->spec.kind;
    }
    return Kind::kString;
  }

  static json TypedValue(const std::string& raw, Kind kind) {
    if (kind == Kind::kString) return raw;
    if (kind == Kind::kList) {
      json arr = json::array();
      for (absl::string_view part :
           absl::StrSplit(raw, ',', absl::SkipWhitespace())) {
        const std::string item(absl::StripAsciiWhitespace(part));
        double d;
        if (absl::SimpleAtod(item, &d) && std::isfinite(d)) {
          arr.push_back(d);
        } else {
          arr.push_back(item);
        }
      }
      return arr;
    }
    int64_t i;
    if (absl::SimpleAtoi(raw, &i)) return i;
    uint64_t u;
    if (absl::SimpleAtoi(raw, &u)) return u;
    double d;
    if (absl::SimpleAtod(raw, &d) && std::isfinite(d)) return d;
    return raw;
  }

 private:
  struct Bound {
    FlagSpec spec;
    std::string value;
    CLI::Option* option = nullptr;
  };
  std::vector<std::unique_ptr<Bound>> bound_;
};

// Builds a request document: explicit flags > config file > defaults.
absl::StatusOr<json> BuildRequest(const std::string& config_path,
                                  const FlagSet& flags) {
  json request = json::object();
  std::string path = config_path;
  if (path.empty()) {
    if (const char* env = std::getenv("GEODP_CONFIG")) path = env;
  }
  if (!path.empty()) {
    absl::StatusOr<json> file = geodp::LoadConfigFile(path);
    if (!file.ok()) return file.status();
    for (const auto& [key, value] : file->items()) {
      if (flags.KindOf(key) == Kind::kList && value.is_string()) {
        request[key] =
            FlagSet::TypedValue(value.get<std::string>(), Kind::kList);
      } else {
        request[key] = value;
      }
    }
  }
  flags.Apply(request);
  return request;
}

int Fail(const absl::Status& status, const FlagSet& flags) {
  const std::string field = geodp::ErrorField(status);
  if (!field.empty()) {
    absl::string_view reason = status.message();
    reason.remove_prefix(field.size() + 2);
    std::cerr << "error: " << flags.FlagFor(field) << ": " << reason << "\n";
  } else {
    std::cerr << "error: " << status.message() << "\n";
  }
  return geodp::ExitCodeFor(status);
}

absl::Status WriteFile(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    return absl::UnavailableError(
        absl::StrCat("IoFailure: cannot open ", path));
  out << content;
  out.flush();
  if (!out)
    return absl::UnavailableError(
        absl::StrCat("IoFailure: write failed for ", path));
  return absl::OkStatus();
}

int Generate(const std::string& config, const FlagSet& flags, std::string out) {
  absl::StatusOr<json> request = BuildRequest(config, flags);
  if (!request.ok()) return Fail(request.status(), flags);
  absl::StatusOr<geodp::RunRequest> parsed =
      geodp::ParseRunRequest(*request, /*require_seed=*/false);
  if (!parsed.ok()) return Fail(parsed.status(), flags);
  absl::StatusOr<geodp::Dataset> dataset = geodp::GenerateDataset(parsed->data);
  if (!dataset.ok()) return Fail(dataset.status(), flags);
  if (out.empty()) {
    out = absl::StrCat(geodp::ScenarioName(parsed->data.scenario), "_",
                       parsed->data.seed, ".jsonl");
  }
  if (absl::Status s = geodp::WriteDatasetFile(*dataset, out); !s.ok()) {
    return Fail(s, flags);
  }
  std::cout << out << " " << dataset->records.size() << " records\n";
  return 0;
}

int Run(const std::string& config, const FlagSet& flags,
        const std::string& dataset_path, const std::string& out) {
  absl::StatusOr<json> request = BuildRequest(config, flags);
  if (!request.ok()) return Fail(request.status(), flags);
  std::optional<geodp::Dataset> dataset;
  if (!dataset_path.empty()) {
    absl::StatusOr<geodp::Dataset> loaded =
        geodp::ReadDatasetFile(dataset_path);
    if (!loaded.ok()) return Fail(loaded.status(), flags);
    if (!request->contains("scenario")) {
      (*request)["scenario"] =
          std::string(geodp::ScenarioName(loaded->config.scenario));
    }
    dataset = *std::move(loaded);
  } else if (!request->contains("scenario")) {
    (*request)["scenario"] = "boolean";
  }
  absl::StatusOr<geodp::RunRequest> parsed =
      geodp::ParseRunRequest(*request, /*require_seed=*/false);
  if (!parsed.ok()) return Fail(parsed.status(), flags);
  absl::StatusOr<json> response =
      dataset.has_value() ? geodp::ExecuteRunOnDataset(*dataset, *parsed)
                          : geodp::ExecuteRun(*parsed);
  if (!response.ok()) return Fail(response.status(), flags);
  if (absl::Status s = WriteFile(out, geodp::SerializeResponse(*response));
      !s.ok()) {
    return Fail(s, flags);
  }
  const json& mse = (*response)["mse"];
  const json& per_user = (*response)["ledger"]["per_user_epsilon"];
  std::cout << "mse="
            << geodp::FormatDouble(mse.is_null() ? NAN : mse.get<double>())
            << " per_user_eps="
            << geodp::FormatDouble(per_user.is_null() ? INFINITY
                                                      : per_user.get<double>())
            << "\n";
  return 0;
}

int Sweep(const std::string& config, const FlagSet& flags,
          const std::string& out, std::string format) {
  absl::StatusOr<json> request = BuildRequest(config, flags);
  if (!request.ok()) return Fail(request.status(), flags);
  absl::StatusOr<geodp::SweepConfig> cfg =
      geodp::ParseSweepRequest(*request, /*require_seed=*/false);
  if (!cfg.ok()) return Fail(cfg.status(), flags);
  if (format.empty()) {
    format = out.size() >= 5 && out.substr(out.size() - 5) == ".json" ? "json"
                                                                      : "csv";
  }
  absl::StatusOr<geodp::SweepTable> table = geodp::RunSweep(*cfg);
  if (!table.ok()) return Fail(table.status(), flags);
  const geodp::ReportFormat fmt =
      format == "json" ? geodp::ReportFormat::kJson : geodp::ReportFormat::kCsv;
  if (absl::Status s = geodp::EmitReport(*table, fmt, out); !s.ok()) {
    return Fail(s, flags);
  }
  std::cout << out << " " << table->rows.size() << " rows\n";
  for (const auto& [mech, points] : geodp::AverageAcrossScenarios(*table)) {
    std::cout << geodp::MechanismName(mech)
              << ": mean_mse(eps=" << geodp::FormatDouble(points.front().first)
              << ")=" << geodp::FormatDouble(points.front().second)
              << " mean_mse(eps=" << geodp::FormatDouble(points.back().first)
              << ")=" << geodp::FormatDouble(points.back().second) << "\n";
  }
  return 0;
}

int Serve(const std::string& host, int port, const std::string& static_dir) {
  httplib::Server server;
  geodp::ConfigureServer(server, static_dir);
  std::cout << "listening on " << host << ":" << port << std::endl;
  if (!server.listen(host, port)) {
    std::cerr << "error: cannot listen on " << host << ":" << port << "\n";
    return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Locational differential-privacy aggregation toolkit"};
  app.require_subcommand(1);
  std::string config;
  app.add_option("--config", config,
                 "key = value config file (default: $GEODP_CONFIG)");

  FlagSet generate_flags;
  std::string generate_out;
  CLI::App* generate =
      app.add_subcommand("generate", "Write a synthetic dataset");
  generate_flags.Add(generate, kDataFlags);
  generate->add_option("--out", generate_out, "Output JSON Lines path");

  FlagSet run_flags;
  std::string run_dataset;
  std::string run_out = "result.json";
  CLI::App* run = app.add_subcommand("run", "Run one private aggregation");
  run_flags.Add(run, kDataFlags);
  run_flags.Add(run, kRunFlags);
  run->add_option("--dataset", run_dataset, "Existing dataset (JSON Lines)");
  run->add_option("--out", run_out, "Result JSON path");

  FlagSet sweep_flags;
  std::string sweep_out = "sweep.csv";
  std::string sweep_format;
  CLI::App* sweep = app.add_subcommand("sweep", "Run an MSE-vs-epsilon sweep");
  sweep_flags.Add(sweep, kDataFlags);
  sweep_flags.Add(sweep, kSweepFlags);
  sweep->add_option("--out", sweep_out, "Report path");
  sweep
      ->add_option("--format", sweep_format, "csv|json (default: by extension)")
      ->check(CLI::IsMember({"csv", "json"}));

  std::string host = "127.0.0.1";
  int port = 8080;
  std::string static_dir;
  CLI::App* serve = app.add_subcommand("serve", "Serve the HTTP API");
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--port", port, "Port");
  serve->add_option("--static-dir", static_dir, "Web UI assets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (generate->parsed()) return Generate(config, generate_flags, generate_out);
  if (run->parsed()) return Run(config, run_flags, run_dataset, run_out);
  if (sweep->parsed())
    return Sweep(config, sweep_flags, sweep_out, sweep_format);
  return Serve(host, port, static_dir);
}
