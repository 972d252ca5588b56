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

#ifndef GEODP_ACCOUNTANT_H_
#define GEODP_ACCOUNTANT_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "geodp/record.h"

namespace geodp {

// One privacy charge: `count` invocations of the same mechanism with the same
// parameters. Gaussian entries carry sigma; all other entries have delta 0.
struct BudgetEntry {
  MechanismKind kind = MechanismKind::kRandomizedResponse;
  double epsilon = 0.0;
  double delta = 0.0;
  std::optional<double> sigma;
  double sensitivity = 1.0;
  int64_t count = 1;
  // Raw-unit width of the values the sensitivity and sigma are expressed
  // over; the Gaussian pipeline path works on values scaled to [0, 1].
  double value_scale = 1.0;

  absl::Status Validate() const;
};

struct EpsilonDelta {
  double epsilon = 0.0;
  double delta = 0.0;
};

// Renyi orders minimized over when converting RDP to (epsilon, delta).
struct RdpOptions {
  std::vector<double> alphas = {1.25, 1.5, 1.75, 2,  2.5, 3,  4,  5,  6,
                                8,    10,  12,   16, 20,  32, 64, 128};

  absl::Status Validate() const;
};

// Append-only log of privacy charges with an optional cap on the composed
// totals. Not thread-safe for writes.
class BudgetLedger {
 public:
  BudgetLedger() = default;
  explicit BudgetLedger(EpsilonDelta cap, RdpOptions opts = {})
      : cap_(cap), opts_(std::move(opts)) {}

  // Appends `entry`. Fails with BudgetExceeded, recording nothing, if the
  // composed totals including `entry` would exceed the cap.
  absl::Status Charge(const BudgetEntry& entry);

  const std::vector<BudgetEntry>& entries() const { return entries_; }
  const std::optional<EpsilonDelta>& cap() const { return cap_; }
  const RdpOptions& rdp_options() const { return opts_; }

 private:
  std::vector<BudgetEntry> entries_;
  std::optional<EpsilonDelta> cap_;
  RdpOptions opts_;
};

// Basic composition: sums count * epsilon and count * delta over entries.
EpsilonDelta ComposeBasic(const BudgetLedger& ledger);
EpsilonDelta ComposeBasic(const std::vector<BudgetEntry>& entries);

// Epsilon of `steps` Gaussian mechanism invocations under RDP accounting.
// One step has RDP curve alpha * sensitivity^2 / (2 sigma^2); steps add, and
// the conversion is min over alpha of  curve(alpha) + ln(1/delta)/(alpha-1).
absl::StatusOr<double> ComposeRdpGaussian(double sigma, double sensitivity,
                                          int64_t steps, double delta,
                                          const RdpOptions& opts = {});

// Pure-epsilon entries via basic composition plus Gaussian entries via RDP
// (curves summed, converted once at the largest Gaussian delta).
absl::StatusOr<EpsilonDelta> ComposeMixed(
    const std::vector<BudgetEntry>& entries, const RdpOptions& opts = {});

// Per-user view: each entry is one invocation on every contributing user.
EpsilonDelta PerUserBudget(const std::vector<BudgetEntry>& entries);

}  // namespace geodp

#endif  // GEODP_ACCOUNTANT_H_
