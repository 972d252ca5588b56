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

#ifndef GEODP_RECORD_H_
#define GEODP_RECORD_H_

#include <string>
#include <variant>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "geodp/grid.h"

namespace geodp {

// One of `k` categories, encoded downstream as a length-k one-hot vector.
struct Categorical {
  int index = 0;
  int k = 2;
  bool operator==(const Categorical&) const = default;
};

struct Boolean {
  bool value = false;
  bool operator==(const Boolean&) const = default;
};

// Rank in [1, levels].
struct Rank {
  int rank = 1;
  int levels = 2;
  bool operator==(const Rank&) const = default;
};

// Real value inside the closed public range [lo, hi].
struct FloatValue {
  double value = 0.0;
  double lo = 0.0;
  double hi = 1.0;
  bool operator==(const FloatValue&) const = default;
};

using RecordValue = std::variant<Categorical, Boolean, Rank, FloatValue>;

absl::Status ValidateRecordValue(const RecordValue& value);

// One individual's datum tied to a grid cell. Only constructible through
// Create, which enforces the per-variant invariants.
class Record {
 public:
  static absl::StatusOr<Record> Create(CellId cell, RecordValue value);

  CellId cell() const { return cell_; }
  const RecordValue& value() const { return value_; }

  bool operator==(const Record&) const = default;

 private:
  Record(CellId cell, RecordValue value) : cell_(cell), value_(value) {}

  CellId cell_;
  RecordValue value_;
};

enum class ScenarioKind { kOneHot, kBoolean, kRanking, kIncome };

inline constexpr ScenarioKind kAllScenarios[] = {
    ScenarioKind::kOneHot, ScenarioKind::kBoolean, ScenarioKind::kRanking,
    ScenarioKind::kIncome};

absl::string_view ScenarioName(ScenarioKind kind);
absl::StatusOr<ScenarioKind> ParseScenario(absl::string_view name);

// True when `value` is the record variant bound to `kind`.
bool MatchesScenario(ScenarioKind kind, const RecordValue& value);

enum class MechanismKind {
  kNone,
  kRandomizedResponse,
  kExponential,
  kGaussian
};

inline constexpr MechanismKind kAllMechanisms[] = {
    MechanismKind::kNone, MechanismKind::kRandomizedResponse,
    MechanismKind::kExponential, MechanismKind::kGaussian};

absl::string_view MechanismName(MechanismKind kind);
absl::StatusOr<MechanismKind> ParseMechanism(absl::string_view name);

// Mechanism kind plus its privacy parameters. epsilon is +infinity exactly
// when kind is kNone; delta is only meaningful (and required > 0) for
// kGaussian. sensitivity is the utility sensitivity for the exponential
// mechanism and the l2 sensitivity for the Gaussian mechanism.
struct MechanismConfig {
  MechanismKind kind = MechanismKind::kNone;
  double epsilon = 0.0;
  double delta = 0.0;
  double sensitivity = 1.0;

  static MechanismConfig None();
  static MechanismConfig RandomizedResponse(double epsilon);
  static MechanismConfig Exponential(double epsilon, double sensitivity = 1.0);
  static MechanismConfig Gaussian(double epsilon, double delta,
                                  double sensitivity = 1.0);

  absl::Status Validate() const;
};

// Admissible (scenario, mechanism) pairs. kNone is admissible everywhere.
bool IsAdmissible(ScenarioKind scenario, MechanismKind mechanism);

}  // namespace geodp

#endif  // GEODP_RECORD_H_
