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

#include "geodp/record.h"

#include <cmath>
#include <limits>

#include "absl/status/status.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace geodp {
namespace {

TEST(RecordTest, AcceptsValidValues) {
  EXPECT_OK(Record::Create({0, 0}, Categorical{2, 3}).status());
  EXPECT_OK(Record::Create({0, 0}, Boolean{true}).status());
  EXPECT_OK(Record::Create({0, 0}, Rank{5, 5}).status());
  EXPECT_OK(Record::Create({0, 0}, FloatValue{1.0, 0.0, 1.0}).status());
}

TEST(RecordTest, RejectsInvalidValues) {
  EXPECT_FALSE(Record::Create({0, 0}, Categorical{3, 3}).ok());
  EXPECT_FALSE(Record::Create({0, 0}, Categorical{-1, 3}).ok());
  EXPECT_FALSE(Record::Create({0, 0}, Categorical{0, 1}).ok());
  EXPECT_FALSE(Record::Create({0, 0}, Rank{0, 5}).ok());
  EXPECT_FALSE(Record::Create({0, 0}, Rank{6, 5}).ok());
  EXPECT_FALSE(Record::Create({0, 0}, Rank{1, 1}).ok());
  EXPECT_FALSE(Record::Create({0, 0}, FloatValue{2.0, 0.0, 1.0}).ok());
  EXPECT_FALSE(Record::Create({0, 0}, FloatValue{0.5, 1.0, 1.0}).ok());
  EXPECT_FALSE(Record::Create({0, 0}, FloatValue{std::nan(""), 0.0, 1.0}).ok());
  EXPECT_FALSE(Record::Create({-1, 0}, Boolean{false}).ok());
}

TEST(RecordTest, ScenarioBinding) {
  EXPECT_TRUE(MatchesScenario(ScenarioKind::kOneHot, Categorical{0, 2}));
  EXPECT_TRUE(MatchesScenario(ScenarioKind::kBoolean, Boolean{}));
  EXPECT_TRUE(MatchesScenario(ScenarioKind::kRanking, Rank{}));
  EXPECT_TRUE(MatchesScenario(ScenarioKind::kIncome, FloatValue{}));
  EXPECT_FALSE(MatchesScenario(ScenarioKind::kIncome, Boolean{}));
}

TEST(RecordTest, NamesRoundTrip) {
  for (ScenarioKind s : kAllScenarios) {
    ASSERT_OK_AND_ASSIGN(ScenarioKind parsed, ParseScenario(ScenarioName(s)));
    EXPECT_EQ(parsed, s);
  }
  for (MechanismKind m : kAllMechanisms) {
    ASSERT_OK_AND_ASSIGN(MechanismKind parsed,
                         ParseMechanism(MechanismName(m)));
    EXPECT_EQ(parsed, m);
  }
  EXPECT_FALSE(ParseScenario("census").ok());
  EXPECT_FALSE(ParseMechanism("laplace").ok());
}

TEST(MechanismConfigTest, Invariants) {
  EXPECT_OK(MechanismConfig::None().Validate());
  EXPECT_TRUE(std::isinf(MechanismConfig::None().epsilon));
  EXPECT_OK(MechanismConfig::RandomizedResponse(1.0).Validate());
  EXPECT_OK(MechanismConfig::Gaussian(1.0, 1.5e-7).Validate());
  EXPECT_FALSE(MechanismConfig::Gaussian(1.0, 0.0).Validate().ok());
  EXPECT_FALSE(MechanismConfig::Gaussian(1.0, 1.0).Validate().ok());
  EXPECT_FALSE(MechanismConfig::RandomizedResponse(-0.5).Validate().ok());
  EXPECT_FALSE(MechanismConfig::RandomizedResponse(
                   std::numeric_limits<double>::infinity())
                   .Validate()
                   .ok());
  MechanismConfig rr = MechanismConfig::RandomizedResponse(1.0);
  rr.delta = 1e-6;
  EXPECT_FALSE(rr.Validate().ok());
  EXPECT_FALSE(MechanismConfig::Exponential(1.0, 0.0).Validate().ok());
}

TEST(MechanismConfigTest, AdmissibilityTable) {
  EXPECT_TRUE(
      IsAdmissible(ScenarioKind::kOneHot, MechanismKind::kRandomizedResponse));
  EXPECT_TRUE(
      IsAdmissible(ScenarioKind::kBoolean, MechanismKind::kRandomizedResponse));
  EXPECT_TRUE(
      IsAdmissible(ScenarioKind::kRanking, MechanismKind::kExponential));
  EXPECT_TRUE(
      IsAdmissible(ScenarioKind::kRanking, MechanismKind::kRandomizedResponse));
  EXPECT_TRUE(IsAdmissible(ScenarioKind::kIncome, MechanismKind::kGaussian));
  EXPECT_FALSE(IsAdmissible(ScenarioKind::kBoolean, MechanismKind::kGaussian));
  EXPECT_FALSE(
      IsAdmissible(ScenarioKind::kIncome, MechanismKind::kRandomizedResponse));
  EXPECT_FALSE(
      IsAdmissible(ScenarioKind::kOneHot, MechanismKind::kExponential));
  for (ScenarioKind s : kAllScenarios) {
    EXPECT_TRUE(IsAdmissible(s, MechanismKind::kNone));
  }
}

}  // namespace
}  // namespace geodp
