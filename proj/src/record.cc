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

#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"

namespace geodp {
namespace {

struct ValueValidator {
  absl::Status operator()(const Categorical& v) const {
    if (v.k < 2) {
      return absl::InvalidArgumentError(
          absl::StrCat("InvalidRecord: categorical k must be >= 2, got ", v.k));
    }
    if (v.index < 0 || v.index >= v.k) {
      return absl::InvalidArgumentError(
          absl::StrCat("InvalidRecord: categorical index ", v.index,
                       " outside [0, ", v.k, ")"));
    }
    return absl::OkStatus();
  }
  absl::Status operator()(const Boolean&) const { return absl::OkStatus(); }
  absl::Status operator()(const Rank& v) const {
    if (v.levels < 2) {
      return absl::InvalidArgumentError(absl::StrCat(
          "InvalidRecord: rank levels must be >= 2, got ", v.levels));
    }
    if (v.rank < 1 || v.rank > v.levels) {
      return absl::InvalidArgumentError(absl::StrCat(
          "InvalidRecord: rank ", v.rank, " outside [1, ", v.levels, "]"));
    }
    return absl::OkStatus();
  }
  absl::Status operator()(const FloatValue& v) const {
    if (!std::isfinite(v.lo) || !std::isfinite(v.hi) || !(v.lo < v.hi)) {
      return absl::InvalidArgumentError(
          absl::StrCat("InvalidRecord: float range requires lo < hi, got [",
                       v.lo, ", ", v.hi, "]"));
    }
    if (!(v.value >= v.lo && v.value <= v.hi)) {
      return absl::InvalidArgumentError(
          absl::StrCat("InvalidRecord: float value ", v.value, " outside [",
                       v.lo, ", ", v.hi, "]"));
    }
    return absl::OkStatus();
  }
};

}  // namespace

absl::Status ValidateRecordValue(const RecordValue& value) {
  return std::visit(ValueValidator{}, value);
}

absl::StatusOr<Record> Record::Create(CellId cell, RecordValue value) {
  if (cell.row < 0 || cell.col < 0) {
    return absl::InvalidArgumentError("InvalidRecord: negative cell index");
  }
  if (absl::Status s = ValidateRecordValue(value); !s.ok()) return s;
  return Record(cell, value);
}

absl::string_view ScenarioName(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kOneHot:
      return "onehot";
    case ScenarioKind::kBoolean:
      return "boolean";
    case ScenarioKind::kRanking:
      return "ranking";
    case ScenarioKind::kIncome:
      return "income";
  }
  return "unknown";
}

absl::StatusOr<ScenarioKind> ParseScenario(absl::string_view name) {
  const std::string lower = absl::AsciiStrToLower(name);
  for (ScenarioKind kind : kAllScenarios) {
    if (lower == ScenarioName(kind)) return kind;
  }
  if (lower == "one-hot" || lower == "one_hot") return ScenarioKind::kOneHot;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown scenario '", name,
                   "' (expected onehot|boolean|ranking|income)"));
}

bool MatchesScenario(ScenarioKind kind, const RecordValue& value) {
  switch (kind) {
    case ScenarioKind::kOneHot:
      return std::holds_alternative<Categorical>(value);
    case ScenarioKind::kBoolean:
      return std::holds_alternative<Boolean>(value);
    case ScenarioKind::kRanking:
      return std::holds_alternative<Rank>(value);
    case ScenarioKind::kIncome:
      return std::holds_alternative<FloatValue>(value);
  }
  return false;
}

absl::string_view MechanismName(MechanismKind kind) {
  switch (kind) {
    case MechanismKind::kNone:
      return "none";
    case MechanismKind::kRandomizedResponse:
      return "rr";
    case MechanismKind::kExponential:
      return "exponential";
    case MechanismKind::kGaussian:
      return "gaussian";
  }
  return "unknown";
}

absl::StatusOr<MechanismKind> ParseMechanism(absl::string_view name) {
  const std::string lower = absl::AsciiStrToLower(name);
  for (MechanismKind kind : kAllMechanisms) {
    if (lower == MechanismName(kind)) return kind;
  }
  if (lower == "randomized_response" || lower == "randomized-response") {
    return MechanismKind::kRandomizedResponse;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown mechanism '", name,
                   "' (expected none|rr|exponential|gaussian)"));
}

MechanismConfig MechanismConfig::None() {
  return MechanismConfig{.kind = MechanismKind::kNone,
                         .epsilon = std::numeric_limits<double>::infinity()};
}

MechanismConfig MechanismConfig::RandomizedResponse(double epsilon) {
  return MechanismConfig{.kind = MechanismKind::kRandomizedResponse,
                         .epsilon = epsilon};
}

MechanismConfig MechanismConfig::Exponential(double epsilon,
                                             double sensitivity) {
  return MechanismConfig{.kind = MechanismKind::kExponential,
                         .epsilon = epsilon,
                         .sensitivity = sensitivity};
}

MechanismConfig MechanismConfig::Gaussian(double epsilon, double delta,
                                          double sensitivity) {
  return MechanismConfig{.kind = MechanismKind::kGaussian,
                         .epsilon = epsilon,
                         .delta = delta,
                         .sensitivity = sensitivity};
}

absl::Status MechanismConfig::Validate() const {
  if (kind == MechanismKind::kNone) {
    if (!std::isinf(epsilon) || epsilon < 0) {
      return absl::InvalidArgumentError(
          "InvalidMechanism: epsilon must be infinite for mechanism none");
    }
    if (delta != 0.0) {
      return absl::InvalidArgumentError(
          "InvalidMechanism: mechanism none takes no delta");
    }
    return absl::OkStatus();
  }
  if (!std::isfinite(epsilon) || !(epsilon > 0)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "InvalidEpsilon: epsilon must be a positive finite number, got ",
        epsilon));
  }
  if (!std::isfinite(sensitivity) || !(sensitivity > 0)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "InvalidSensitivity: sensitivity must be positive, got ", sensitivity));
  }
  if (kind == MechanismKind::kGaussian) {
    if (!(delta > 0 && delta < 1)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "InvalidDelta: gaussian delta must be in (0, 1), got ", delta));
    }
  } else if (delta != 0.0) {
    return absl::InvalidArgumentError(absl::StrCat(
        "InvalidDelta: delta is only used by the gaussian mechanism, got ",
        delta));
  }
  return absl::OkStatus();
}

bool IsAdmissible(ScenarioKind scenario, MechanismKind mechanism) {
  if (mechanism == MechanismKind::kNone) return true;
  switch (scenario) {
    case ScenarioKind::kOneHot:
    case ScenarioKind::kBoolean:
      return mechanism == MechanismKind::kRandomizedResponse;
    case ScenarioKind::kRanking:
      return mechanism == MechanismKind::kExponential ||
             mechanism == MechanismKind::kRandomizedResponse;
    case ScenarioKind::kIncome:
      return mechanism == MechanismKind::kGaussian;
  }
  return false;
}

}  // namespace geodp
