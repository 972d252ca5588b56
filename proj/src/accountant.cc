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

#include "geodp/accountant.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/strings/str_cat.h"

namespace geodp {

absl::Status BudgetEntry::Validate() const {
  if (kind == MechanismKind::kNone) {
    return absl::InvalidArgumentError(
        "InvalidEntry: mechanism none is not charged");
  }
  if (!std::isfinite(epsilon) || epsilon < 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("InvalidEntry: epsilon must be >= 0, got ", epsilon));
  }
  if (!(sensitivity > 0) || !std::isfinite(sensitivity)) {
    return absl::InvalidArgumentError("InvalidEntry: sensitivity must be > 0");
  }
  if (count < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("InvalidEntry: count must be >= 1, got ", count));
  }
  if (kind == MechanismKind::kGaussian) {
    if (!sigma.has_value() || !(*sigma > 0)) {
      return absl::InvalidArgumentError(
          "InvalidEntry: gaussian entries require a positive sigma");
    }
    if (!(delta > 0 && delta < 1)) {
      return absl::InvalidArgumentError(
          "InvalidEntry: gaussian delta must be in (0, 1)");
    }
  } else if (delta != 0.0) {
    return absl::InvalidArgumentError(
        "InvalidEntry: non-gaussian entries must have delta 0");
  }
  return absl::OkStatus();
}

absl::Status RdpOptions::Validate() const {
  if (alphas.empty()) {
    return absl::InvalidArgumentError("InvalidRdpOptions: empty alpha grid");
  }
  for (double a : alphas) {
    if (!(a > 1) || !std::isfinite(a)) {
      return absl::InvalidArgumentError(
          absl::StrCat("InvalidRdpOptions: alpha must be > 1, got ", a));
    }
  }
  return absl::OkStatus();
}

EpsilonDelta ComposeBasic(const std::vector<BudgetEntry>& entries) {
  EpsilonDelta total;
  for (const BudgetEntry& e : entries) {
    total.epsilon += static_cast<double>(e.count) * e.epsilon;
    total.delta += static_cast<double>(e.count) * e.delta;
  }
  return total;
}

EpsilonDelta ComposeBasic(const BudgetLedger& ledger) {
  return ComposeBasic(ledger.entries());
}

namespace {

// Converts a summed RDP curve coefficient c (curve(alpha) = c * alpha) to an
// epsilon at the given delta.
double ConvertRdp(double coefficient, double delta, const RdpOptions& opts) {
  const double log_inv_delta = std::log(1.0 / delta);
  double best = std::numeric_limits<double>::infinity();
  for (double alpha : opts.alphas) {
    best = std::min(best, coefficient * alpha + log_inv_delta / (alpha - 1.0));
  }
  return best;
}

}  // namespace

absl::StatusOr<double> ComposeRdpGaussian(double sigma, double sensitivity,
                                          int64_t steps, double delta,
                                          const RdpOptions& opts) {
  if (!(sigma > 0) || !std::isfinite(sigma)) {
    return absl::InvalidArgumentError(
        absl::StrCat("InvalidSigma: sigma must be positive, got ", sigma));
  }
  if (!(delta > 0 && delta < 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("InvalidDelta: delta must be in (0, 1), got ", delta));
  }
  if (!(sensitivity > 0) || !std::isfinite(sensitivity)) {
    return absl::InvalidArgumentError(
        "InvalidSensitivity: sensitivity must be positive");
  }
  if (steps < 0) {
    return absl::InvalidArgumentError("InvalidSteps: steps must be >= 0");
  }
  if (absl::Status s = opts.Validate(); !s.ok()) return s;
  if (steps == 0) return 0.0;
  const double coefficient = static_cast<double>(steps) * sensitivity *
                             sensitivity / (2.0 * sigma * sigma);
  return ConvertRdp(coefficient, delta, opts);
}

absl::StatusOr<EpsilonDelta> ComposeMixed(
    const std::vector<BudgetEntry>& entries, const RdpOptions& opts) {
  if (absl::Status s = opts.Validate(); !s.ok()) return s;
  EpsilonDelta total;
  double coefficient = 0.0;
  double gaussian_delta = 0.0;
  for (const BudgetEntry& e : entries) {
    if (absl::Status s = e.Validate(); !s.ok()) return s;
    if (e.kind == MechanismKind::kGaussian) {
      coefficient += static_cast<double>(e.count) * e.sensitivity *
                     e.sensitivity / (2.0 * *e.sigma * *e.sigma);
      gaussian_delta = std::max(gaussian_delta, e.delta);
    } else {
      total.epsilon += static_cast<double>(e.count) * e.epsilon;
      total.delta += static_cast<double>(e.count) * e.delta;
    }
  }
  if (coefficient > 0) {
    total.epsilon += ConvertRdp(coefficient, gaussian_delta, opts);
    total.delta += gaussian_delta;
  }
  return total;
}

EpsilonDelta PerUserBudget(const std::vector<BudgetEntry>& entries) {
  EpsilonDelta total;
  for (const BudgetEntry& e : entries) {
    total.epsilon += e.epsilon;
    total.delta += e.delta;
  }
  return total;
}

absl::Status BudgetLedger::Charge(const BudgetEntry& entry) {
  if (absl::Status s = entry.Validate(); !s.ok()) return s;
  if (cap_.has_value()) {
    std::vector<BudgetEntry> candidate = entries_;
    candidate.push_back(entry);
    absl::StatusOr<EpsilonDelta> total = ComposeMixed(candidate, opts_);
    if (!total.ok()) return total.status();
    // Small slack so that e.g. 0.5 + 0.5 against a cap of 1.0 is accepted.
    constexpr double kSlack = 1e-12;
    if (total->epsilon > cap_->epsilon * (1 + kSlack) ||
        total->delta > cap_->delta * (1 + kSlack) + 1e-300) {
      return absl::ResourceExhaustedError(absl::StrCat(
          "BudgetExceeded: composed (", total->epsilon, ", ", total->delta,
          ") exceeds cap (", cap_->epsilon, ", ", cap_->delta, ")"));
    }
  }
  entries_.push_back(entry);
  return absl::OkStatus();
}

}  // namespace geodp
