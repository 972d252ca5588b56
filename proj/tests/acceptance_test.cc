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

// Acceptance suite. Each criterion prints one PASS/FAIL line with the
// measured quantities; the exit status is non-zero if any criterion fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "geodp/accountant.h"
#include "geodp/evaluation.h"
#include "geodp/mechanisms.h"
#include "geodp/pipeline.h"
#include "geodp/rng.h"
#include "geodp/service.h"
#include "geodp/synthgen.h"
#include "httplib.h"
#include "nlohmann/json.hpp"
#include "oracles.h"

namespace geodp {
namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

absl::Status StatusOf(const absl::Status& s) { return s; }
template <typename T>
absl::Status StatusOf(const absl::StatusOr<T>& s) {
  return s.status();
}

#define CHECK_OK_OR_FAIL(expr)                                              \
  do {                                                                      \
    const absl::Status status_ = StatusOf(expr);                            \
    if (!status_.ok()) {                                                    \
      return Outcome{false, absl::StrCat(#expr, ": ", status_.ToString())}; \
    }                                                                       \
  } while (0)

Outcome ExactDpRatio() {
  const auto start = Clock::now();
  double worst_slack = -INFINITY;
  std::string worst_case;
  auto record = [&](double ratio, double eps, const std::string& what) {
    const double slack = ratio - std::exp(eps);
    if (slack > worst_slack) {
      worst_slack = slack;
      worst_case = what;
    }
  };
  for (double eps : {0.1, 1.0, 3.0}) {
    // Binary randomized response.
    absl::StatusOr<double> p = RrFlipProbability(eps);
    CHECK_OK_OR_FAIL(p);
    const double bit[2][2] = {{1 - *p, *p}, {*p, 1 - *p}};
    for (int x = 0; x < 2; ++x)
      for (int x2 = 0; x2 < 2; ++x2)
        for (int y = 0; y < 2; ++y) record(bit[x][y] / bit[x2][y], eps, "bit");
    // One-hot randomized response over all 2^k outputs.
    for (int k = 2; k <= 4; ++k) {
      for (int a = 0; a < k; ++a) {
        for (int b = 0; b < k; ++b) {
          std::vector<uint8_t> in_a(k, 0), in_b(k, 0), out(k, 0);
          in_a[a] = 1;
          in_b[b] = 1;
          for (int y = 0; y < (1 << k); ++y) {
            for (int i = 0; i < k; ++i) out[i] = (y >> i) & 1;
            absl::StatusOr<double> pa = OnehotOutputProbability(in_a, out, eps);
            absl::StatusOr<double> pb = OnehotOutputProbability(in_b, out, eps);
            CHECK_OK_OR_FAIL(pa);
            CHECK_OK_OR_FAIL(pb);
            record(*pa / *pb, eps, absl::StrCat("onehot k=", k));
          }
        }
      }
    }
    // Exponential mechanism with indicator utility.
    for (int k = 2; k <= 8; ++k) {
      std::vector<std::vector<double>> dists;
      for (int truth = 0; truth < k; ++truth) {
        std::vector<double> u(k, 0.0);
        u[truth] = 1.0;
        absl::StatusOr<DiscreteDistribution> d =
            ExponentialDistribution(u, 1.0, eps);
        CHECK_OK_OR_FAIL(d);
        dists.push_back(d->probabilities);
      }
      for (const auto& da : dists)
        for (const auto& db : dists)
          for (int y = 0; y < k; ++y)
            record(da[y] / db[y], eps, absl::StrCat("exp k=", k));
    }
  }
  const double secs = Seconds(start);
  return {worst_slack <= 1e-9 && secs < 1.0,
          absl::StrFormat("max(ratio - e^eps) = %.3g at %s; %.3f s",
                          worst_slack, worst_case, secs)};
}

Outcome GaussianCalibration() {
  absl::StatusOr<double> sigma = GaussianSigma(1.0, 1.0, 1.5e-7);
  CHECK_OK_OR_FAIL(sigma);
  const double oracle = testing::SigmaOracle(1.0, 1.0, 1.5e-7);
  bool linear = true;
  for (double scale : {2.0, 4.0, 0.5}) {
    linear &= *GaussianSigma(scale, 1.0, 1.5e-7) == scale * *sigma;
    linear &= *GaussianSigma(1.0, scale, 1.5e-7) == *sigma / scale;
  }
  const double err = std::fabs(*sigma - oracle);
  return {err <= 1e-3 && std::fabs(*sigma - 5.6455) < 1e-3 && linear,
          absl::StrFormat("sigma = %.10f, oracle = %.10f, linear = %s", *sigma,
                          oracle, linear ? "exact" : "NO")};
}

Outcome AccountantOracle() {
  absl::StatusOr<double> one = ComposeRdpGaussian(1.0, 1.0, 1, 1e-5);
  CHECK_OK_OR_FAIL(one);
  const double oracle = testing::DenseGridRdpOracle(1.0, 1.0, 1, 1e-5);
  // 100 Gaussian steps at the eps=1, delta=1.5e-7 calibration, converted at
  // delta=1e-6, against basic composition of the 100 per-step epsilons.
  const double sigma = testing::SigmaOracle(1.0, 1.0, 1.5e-7);
  absl::StatusOr<double> hundred = ComposeRdpGaussian(sigma, 1.0, 100, 1e-6);
  CHECK_OK_OR_FAIL(hundred);
  std::vector<BudgetEntry> steps(1,
                                 BudgetEntry{.kind = MechanismKind::kGaussian,
                                             .epsilon = 1.0,
                                             .delta = 1e-6,
                                             .sigma = sigma,
                                             .count = 100});
  const double basic = ComposeBasic(steps).epsilon;
  return {std::fabs(*one - oracle) <= 1e-2 && *hundred < basic,
          absl::StrFormat(
              "1 step: %.6f vs oracle %.6f; 100 steps: RDP %.4f < basic %.1f",
              *one, oracle, *hundred, basic)};
}

Outcome EstimatorCorrectness() {
  const auto start = Clock::now();
  // Exhaustive expectation, n = 3, p = 0.25.
  const int n = 3;
  const double p = 0.25;
  double worst_bias = 0.0;
  for (int truth = 0; truth < (1 << n); ++truth) {
    double true_ones = 0, expected = 0;
    for (int i = 0; i < n; ++i) true_ones += (truth >> i) & 1;
    for (int out = 0; out < (1 << n); ++out) {
      double prob = 1, ones = 0;
      for (int i = 0; i < n; ++i) {
        const int t = (truth >> i) & 1, o = (out >> i) & 1;
        prob *= t == o ? 1 - p : p;
        ones += o;
      }
      const std::vector<double> counts = {n - ones, ones};
      absl::StatusOr<DebiasedHistogram> h = DebiasRrHistogram(counts, p, n);
      CHECK_OK_OR_FAIL(h);
      expected += prob * h->unbiased_counts[1];
    }
    worst_bias = std::max(worst_bias, std::fabs(expected - true_ones));
  }
  // End to end: eps = 1, 1e5 records per cell, 2x2 grid.
  ScenarioConfig data;
  data.scenario = ScenarioKind::kBoolean;
  data.grid.rows = 2;
  data.grid.cols = 2;
  data.records_per_cell = 100000;
  data.seed = 2024;
  absl::StatusOr<Dataset> dataset = GenerateDataset(data);
  CHECK_OK_OR_FAIL(dataset);
  absl::StatusOr<AggregateResult> result = RunPipeline(
      *dataset,
      PipelineConfig{.scenario = ScenarioKind::kBoolean,
                     .mechanism = MechanismConfig::RandomizedResponse(1.0),
                     .seed = 7});
  CHECK_OK_OR_FAIL(result);
  double worst_cell = 0.0;
  for (const CellResult& c : result->cells) {
    worst_cell = std::max(
        worst_cell, std::fabs((*c.private_aggregate)[1] - c.true_aggregate[1]));
  }
  const double secs = Seconds(start);
  return {worst_bias <= 1e-12 && worst_cell <= 0.012 && secs < 10.0,
          absl::StrFormat(
              "max |E[est] - truth| = %.2g; max cell error = %.5f; %.2f s",
              worst_bias, worst_cell, secs)};
}

Outcome MseTrend() {
  const auto start = Clock::now();
  SweepConfig cfg;  // 16x16 Pittsburgh grid, eps grid {0.1..8}, 10 reps.
  cfg.data.records_per_cell = 200;
  cfg.base_seed = 20240601;
  absl::StatusOr<SweepTable> table = RunSweep(cfg);
  CHECK_OK_OR_FAIL(table);
  const double secs = Seconds(start);
  bool pass = secs < 120.0;
  std::string detail;
  for (const auto& [key, points] : SummarizeSeries(*table)) {
    int inversions = 0;
    bool separated_inversion = false;
    for (size_t i = 0; i + 1 < points.size(); ++i) {
      if (points[i + 1].mean > points[i].mean) {
        ++inversions;
        const bool overlap = points[i + 1].min <= points[i].max &&
                             points[i].min <= points[i + 1].max;
        separated_inversion |= !overlap;
      }
    }
    pass &= inversions <= 1 && !separated_inversion;
    absl::StrAppendFormat(&detail, "\n    %s/%s: inversions=%d%s",
                          ScenarioName(key.first), MechanismName(key.second),
                          inversions,
                          separated_inversion ? " (non-overlapping)" : "");
  }
  for (const auto& [mech, points] : AverageAcrossScenarios(*table)) {
    const double reduction = points.front().second / points.back().second;
    pass &= reduction >= 10.0;
    absl::StrAppendFormat(
        &detail, "\n    %s: mean MSE %.4g at eps=%g -> %.4g at eps=%g (%.1fx)",
        MechanismName(mech), points.front().second, points.front().first,
        points.back().second, points.back().first, reduction);
  }
  return {
      pass,
      absl::StrFormat("%zu runs in %.1f s", table->rows.size(), secs) + detail};
}

Outcome InfinityBaseline() {
  std::string detail;
  bool pass = true;
  for (ScenarioKind s : kAllScenarios) {
    ScenarioConfig data;
    data.scenario = s;
    data.seed = 3;
    absl::StatusOr<Dataset> dataset = GenerateDataset(data);
    CHECK_OK_OR_FAIL(dataset);
    absl::StatusOr<AggregateResult> r = RunPipeline(
        *dataset,
        PipelineConfig{.scenario = s, .mechanism = MechanismConfig::None()});
    CHECK_OK_OR_FAIL(r);
    pass &= r->mse.has_value() && *r->mse == 0.0;
    absl::StrAppendFormat(&detail, "%s%s mse=%g", detail.empty() ? "" : ", ",
                          ScenarioName(s), r->mse.value_or(NAN));
  }
  return {pass, detail};
}

Outcome Shuffler() {
  RngStream rng(99);
  bool multiset = true;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = static_cast<int>(rng.UniformIndex(300));
    std::vector<ClientReport> in;
    for (int i = 0; i < n; ++i) {
      in.push_back({{static_cast<int>(rng.UniformIndex(16)),
                     static_cast<int>(rng.UniformIndex(16))},
                    RankPayload{1 + static_cast<int>(rng.UniformIndex(5)), 5}});
    }
    std::vector<ClientReport> out = Shuffle(in, rng);
    auto key = [](const ClientReport& r) {
      return std::make_tuple(r.cell.row, r.cell.col,
                             std::get<RankPayload>(r.payload).rank);
    };
    std::map<std::tuple<int, int, int>, int> a, b;
    for (const auto& r : in) ++a[key(r)];
    for (const auto& r : out) ++b[key(r)];
    multiset &= a == b;
  }
  const int trials = 100000;
  std::vector<ClientReport> base;
  for (int i = 0; i < 4; ++i) base.push_back({{i, 0}, BitPayload{}});
  std::map<std::vector<int>, int> counts;
  for (int t = 0; t < trials; ++t) {
    std::vector<int> order;
    for (const ClientReport& r : Shuffle(base, rng))
      order.push_back(r.cell.row);
    ++counts[order];
  }
  const double expected = trials / 24.0;
  double chi2 = 0.0;
  for (const auto& [perm, c] : counts)
    chi2 += (c - expected) * (c - expected) / expected;
  chi2 += expected * (24 - static_cast<double>(counts.size()));
  const double pvalue = testing::ChiSquareSurvival(chi2, 23);
  return {
      multiset && pvalue > 0.001,
      absl::StrFormat("multiset preserved = %s; chi2 = %.2f (df 23), p = %.4f",
                      multiset ? "yes" : "NO", chi2, pvalue)};
}

Outcome CohortGating() {
  int cases = 0;
  bool pass = true;
  for (int threshold : {1, 2, 5, 10, 50}) {
    ScenarioConfig data;
    data.scenario = ScenarioKind::kOneHot;
    data.grid.rows = 1;
    data.grid.cols = 3;
    data.categories = 3;
    Dataset dataset{data, {}};
    // Cells hold threshold-1, threshold and threshold+1 records.
    for (int c = 0; c < 3; ++c) {
      for (int i = 0; i < threshold - 1 + c; ++i) {
        dataset.records.push_back(
            *Record::Create({0, c}, Categorical{i % 3, 3}));
      }
    }
    RunRequest request;
    request.data = data;
    request.mechanism = MechanismConfig::RandomizedResponse(1.0);
    request.min_cohort = threshold;
    request.seed = 5;
    absl::StatusOr<json> response = ExecuteRunOnDataset(dataset, request);
    CHECK_OK_OR_FAIL(response);
    const json& cells = (*response)["cells"];
    for (int c = 0; c < 3; ++c) {
      const bool expect_suppressed = c == 0;
      pass &= cells[c]["suppressed"].get<bool>() == expect_suppressed;
      pass &= cells[c]["private_aggregate"].is_null() == expect_suppressed;
      ++cases;
    }
    pass &= (*response)["suppressed_cells"] == 1;
  }
  return {pass,
          absl::StrFormat("%d boundary cells checked at count = threshold-1, "
                          "threshold, threshold+1",
                          cases)};
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome CliHttpDeterminism() {
#ifndef GEODP_CLI_PATH
  return {false, "CLI not built (GEODP_BUILD_TOOLS=OFF)"};
#else
  httplib::Server server;
  ConfigureServer(server, "");
  const int port = server.bind_to_any_port("127.0.0.1");
  if (port <= 0) return {false, "could not bind a loopback port"};
  std::thread thread([&server] { server.listen_after_bind(); });
  server.wait_until_ready();

  const std::string out =
      (std::filesystem::temp_directory_path() / "geodp_acceptance_run.json")
          .string();
  struct Case {
    std::string flags;
    json body;
  };
  const std::vector<Case> cases = {
      {"--scenario boolean --mechanism rr --epsilon 1 --rows 4 --cols 4 --n 50 "
       "--seed 11",
       {{"scenario", "boolean"},
        {"mechanism", "rr"},
        {"epsilon", 1},
        {"rows", 4},
        {"cols", 4},
        {"records_per_cell", 50},
        {"seed", 11}}},
      {"--scenario income --mechanism gaussian --epsilon 0.5 --delta 1e-6 "
       "--rows 3 "
       "--cols 5 --n 20 --seed 4 --min-cohort 3",
       {{"scenario", "income"},
        {"mechanism", "gaussian"},
        {"epsilon", 0.5},
        {"delta", 1e-6},
        {"rows", 3},
        {"cols", 5},
        {"records_per_cell", 20},
        {"seed", 4},
        {"min_cohort", 3}}},
      {"--scenario ranking --mechanism exponential --epsilon 2 --seed 0",
       {{"scenario", "ranking"},
        {"mechanism", "exponential"},
        {"epsilon", 2},
        {"seed", 0}}},
  };
  bool pass = true;
  std::string detail;
  httplib::Client client("127.0.0.1", port);
  client.set_read_timeout(std::chrono::seconds(60));
  for (const Case& c : cases) {
    std::remove(out.c_str());
    const std::string cmd = absl::StrCat("'", GEODP_CLI_PATH, "' run ", c.flags,
                                         " --out '", out, "' > /dev/null 2>&1");
    const int status = std::system(cmd.c_str());
    const std::string cli = ReadFile(out);
    httplib::Result res =
        client.Post("/api/v1/simulate", c.body.dump(), "application/json");
    const bool same = status == 0 && res && res->status == 200 &&
                      !cli.empty() && res->body == cli;
    pass &= same;
    absl::StrAppendFormat(&detail, "%s%zu bytes %s", detail.empty() ? "" : "; ",
                          cli.size(), same ? "identical" : "DIFFER");
  }
  std::remove(out.c_str());
  server.stop();
  thread.join();
  return {pass, detail};
#endif
}

}  // namespace
}  // namespace geodp

int main() {
  struct Criterion {
    const char* name;
    std::function<geodp::Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"exact-dp-ratio", geodp::ExactDpRatio},
      {"gaussian-calibration", geodp::GaussianCalibration},
      {"accountant-oracle", geodp::AccountantOracle},
      {"estimator-correctness", geodp::EstimatorCorrectness},
      {"mse-trend-sweep", geodp::MseTrend},
      {"epsilon-infinity-baseline", geodp::InfinityBaseline},
      {"shuffler", geodp::Shuffler},
      {"cohort-gating", geodp::CohortGating},
      {"cli-http-determinism", geodp::CliHttpDeterminism},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const geodp::Outcome outcome = c.run();
    failures += outcome.pass ? 0 : 1;
    std::printf("%s  %-26s %s\n", outcome.pass ? "PASS" : "FAIL", c.name,
                outcome.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu criteria, %d failed\n", criteria.size(), failures);
  return failures == 0 ? 0 : 1;
}
