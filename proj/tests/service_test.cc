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

#include <chrono>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "absl/status/status.h"
#include "geodp/synthgen.h"
#include "gtest/gtest.h"
#include "httplib.h"
#include "nlohmann/json.hpp"
#include "test_util.h"

namespace geodp {
namespace {

using nlohmann::json;

// Runs ConfigureServer on an ephemeral loopback port for the whole suite.
class ServiceTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    server_ = new httplib::Server();
    ConfigureServer(*server_, "");
    port_ = server_->bind_to_any_port("127.0.0.1");
    ASSERT_GT(port_, 0);
    thread_ = new std::thread([] { server_->listen_after_bind(); });
    server_->wait_until_ready();
  }

  static void TearDownTestSuite() {
    server_->stop();
    thread_->join();
    delete thread_;
    delete server_;
  }

  static httplib::Client Client() {
    httplib::Client client("127.0.0.1", port_);
    client.set_read_timeout(std::chrono::seconds(60));
    return client;
  }

  static httplib::Result Simulate(const json& body) {
    return Client().Post("/api/v1/simulate", body.dump(), "application/json");
  }

  static json SmallRequest() {
    return json{{"scenario", "boolean"},
                {"mechanism", "rr"},
                {"epsilon", 1.0},
                {"rows", 3},
                {"cols", 3},
                {"records_per_cell", 40},
                {"seed", 17}};
  }

  static httplib::Server* server_;
  static std::thread* thread_;
  static int port_;
};

httplib::Server* ServiceTest::server_ = nullptr;
std::thread* ServiceTest::thread_ = nullptr;
int ServiceTest::port_ = 0;

TEST_F(ServiceTest, Healthz) {
  httplib::Result res = Client().Get("/healthz");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
}

TEST_F(ServiceTest, Meta) {
  httplib::Result res = Client().Get("/api/v1/meta");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  const json meta = json::parse(res->body);
  EXPECT_EQ(meta["schema_version"], 1);
  EXPECT_EQ(meta["scenarios"].size(), 4u);
  EXPECT_EQ(meta["admissible"]["income"], (json{"none", "gaussian"}));
  EXPECT_EQ(meta["admissible"]["ranking"], (json{"none", "rr", "exponential"}));
  EXPECT_EQ(meta["default_grid"]["rows"], 16);
}

TEST_F(ServiceTest, SimulateNoneHasZeroMse) {
  json body = SmallRequest();
  body["mechanism"] = "none";
  body.erase("epsilon");
  httplib::Result res = Simulate(body);
  ASSERT_TRUE(res);
  ASSERT_EQ(res->status, 200) << res->body;
  const json out = json::parse(res->body);
  EXPECT_EQ(out["mse"], 0.0);
  EXPECT_EQ(out["schema_version"], 1);
  EXPECT_EQ(out["cells"].size(), 9u);
  EXPECT_TRUE(out["ledger"]["entries"].empty());
  EXPECT_TRUE(out["ledger"]["per_user_epsilon"].is_null());
}

TEST_F(ServiceTest, SimulateResponseShape) {
  httplib::Result res = Simulate(SmallRequest());
  ASSERT_TRUE(res);
  ASSERT_EQ(res->status, 200);
  const json out = json::parse(res->body);
  for (const char* key : {"schema_version", "config", "cells", "mse",
                          "suppressed_cells", "ledger"}) {
    EXPECT_TRUE(out.contains(key)) << key;
  }
  int i = 0;
  for (const json& cell : out["cells"]) {
    EXPECT_EQ(cell["row"], i / 3);
    EXPECT_EQ(cell["col"], i % 3);
    EXPECT_EQ(cell["true_aggregate"].size(), 2u);
    ++i;
  }
  const json& ledger = out["ledger"];
  ASSERT_EQ(ledger["entries"].size(), 1u);
  EXPECT_EQ(ledger["entries"][0]["count"], 360);
  EXPECT_EQ(ledger["per_user_epsilon"], 1.0);
  EXPECT_EQ(ledger["composed_epsilon"], 360.0);
  EXPECT_EQ(ledger["shuffled"], true);
  EXPECT_EQ(ledger["shuffle_amplification_applied"], false);
}

TEST_F(ServiceTest, NegativeEpsilonIs400NamingField) {
  json body = SmallRequest();
  body["epsilon"] = -1;
  httplib::Result res = Simulate(body);
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);
  const json err = json::parse(res->body);
  EXPECT_EQ(err["field"], "epsilon");
  EXPECT_NE(err["error"].get<std::string>().find("epsilon"), std::string::npos);
}

TEST_F(ServiceTest, FieldErrors) {
  struct Case {
    const char* key;
    json value;
  };
  for (const Case& c : std::vector<Case>{{"rows", 0},
                                         {"records_per_cell", -3},
                                         {"scenario", "census"},
                                         {"mechanism", "laplace"},
                                         {"min_cohort", -1},
                                         {"delta", 2.0}}) {
    json body = SmallRequest();
    body[c.key] = c.value;
    httplib::Result res = Simulate(body);
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 400) << c.key;
  }
  json no_seed = SmallRequest();
  no_seed.erase("seed");
  httplib::Result res = Simulate(no_seed);
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);
  EXPECT_EQ(json::parse(res->body)["field"], "seed");

  res = Client().Post("/api/v1/simulate", "not json", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);
}

TEST_F(ServiceTest, InadmissiblePairIs422) {
  json body = SmallRequest();
  body["mechanism"] = "gaussian";
  httplib::Result res = Simulate(body);
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 422);
}

TEST_F(ServiceTest, BudgetCapIs422) {
  json body = SmallRequest();
  body["max_epsilon"] = 10;
  httplib::Result res = Simulate(body);
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 422);
  EXPECT_NE(res->body.find("BudgetExceeded"), std::string::npos);
}

TEST_F(ServiceTest, OversizedRequestIs413) {
  json body = SmallRequest();
  body["rows"] = 100;
  body["cols"] = 100;
  body["records_per_cell"] = 101;
  httplib::Result res = Simulate(body);
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 413);
}

TEST_F(ServiceTest, IdenticalRequestsAreByteIdentical) {
  httplib::Result a = Simulate(SmallRequest());
  httplib::Result b = Simulate(SmallRequest());
  ASSERT_TRUE(a && b);
  EXPECT_EQ(a->body, b->body);
  json other = SmallRequest();
  other["seed"] = 18;
  httplib::Result c = Simulate(other);
  ASSERT_TRUE(c);
  EXPECT_NE(a->body, c->body);
}

TEST_F(ServiceTest, ConcurrentRequestsAreIsolated) {
  const std::string expected = Simulate(SmallRequest())->body;
  std::vector<std::string> bodies(6);
  std::vector<std::thread> threads;
  for (size_t i = 0; i < bodies.size(); ++i) {
    threads.emplace_back([&bodies, i] {
      json body = SmallRequest();
      if (i % 2) body["epsilon"] = 0.3;
      httplib::Result res = Simulate(body);
      if (res && i % 2 == 0) bodies[i] = res->body;
    });
  }
  for (std::thread& t : threads) t.join();
  for (size_t i = 0; i < bodies.size(); i += 2) EXPECT_EQ(bodies[i], expected);
}

TEST_F(ServiceTest, Sweep) {
  const json body = {{"scenarios", {"boolean"}},
                     {"mechanisms", {"rr"}},
                     {"epsilons", {0.5, 1, 2}},
                     {"repetitions", 2},
                     {"rows", 2},
                     {"cols", 2},
                     {"records_per_cell", 20},
                     {"seed", 4}};
  httplib::Result res =
      Client().Post("/api/v1/sweep", body.dump(), "application/json");
  ASSERT_TRUE(res);
  ASSERT_EQ(res->status, 200) << res->body;
  const json out = json::parse(res->body);
  EXPECT_EQ(out["rows"].size(), 6u);
  EXPECT_EQ(out["columns"][0], "scenario");

  json descending = body;
  descending["epsilons"] = {2, 1};
  res = Client().Post("/api/v1/sweep", descending.dump(), "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);
  EXPECT_EQ(json::parse(res->body)["field"], "epsilons");
}

TEST(StatusMappingTest, ExitAndHttpCodes) {
  EXPECT_EQ(ExitCodeFor(absl::OkStatus()), 0);
  EXPECT_EQ(ExitCodeFor(absl::InvalidArgumentError("x")), 2);
  EXPECT_EQ(ExitCodeFor(absl::FailedPreconditionError("x")), 2);
  EXPECT_EQ(ExitCodeFor(absl::UnavailableError("x")), 3);
  EXPECT_EQ(ExitCodeFor(absl::ResourceExhaustedError("x")), 4);
  EXPECT_EQ(HttpStatusFor(absl::InvalidArgumentError("x")), 400);
  EXPECT_EQ(HttpStatusFor(absl::FailedPreconditionError("x")), 422);
  EXPECT_EQ(HttpStatusFor(absl::OutOfRangeError("x")), 413);
  EXPECT_EQ(HttpStatusFor(absl::InternalError("x")), 500);
  EXPECT_EQ(ErrorField(absl::InvalidArgumentError("epsilon: bad")), "epsilon");
  EXPECT_EQ(ErrorField(absl::InvalidArgumentError("InvalidSpec: bad")), "");
}

TEST(RunRequestTest, CliAndHttpShareOneCore) {
  const json body = {{"scenario", "ranking"},
                     {"mechanism", "exponential"},
                     {"epsilon", 2},
                     {"rows", 2},
                     {"cols", 2},
                     {"records_per_cell", 10},
                     {"seed", 3}};
  ASSERT_OK_AND_ASSIGN(RunRequest request, ParseRunRequest(body, true));
  ASSERT_OK_AND_ASSIGN(json direct, ExecuteRun(request));
  ASSERT_OK_AND_ASSIGN(Dataset data, GenerateDataset(request.data));
  ASSERT_OK_AND_ASSIGN(json via_dataset, ExecuteRunOnDataset(data, request));
  EXPECT_EQ(SerializeResponse(direct), SerializeResponse(via_dataset));
  // The request echo reparses to the same request.
  ASSERT_OK_AND_ASSIGN(RunRequest again,
                       ParseRunRequest(RunRequestToJson(request), true));
  ASSERT_OK_AND_ASSIGN(json replay, ExecuteRun(again));
  EXPECT_EQ(SerializeResponse(direct), SerializeResponse(replay));
}

}  // namespace
}  // namespace geodp
