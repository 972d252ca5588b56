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

#include "geodp/mechanisms.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"

namespace geodp {
namespace {

absl::Status CheckEpsilon(double epsilon) {
  if (std::isnan(epsilon) || epsilon < 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("InvalidEpsilon: epsilon must be >= 0, got ", epsilon));
  }
  return absl::OkStatus();
}

absl::Status CheckOnehot(std::span<const uint8_t> v) {
  if (v.size() < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("NotOneHot: length must be >= 2, got ", v.size()));
  }
  size_t ones = 0;
  for (uint8_t b : v) {
    if (b > 1) return absl::InvalidArgumentError("NotOneHot: non-binary entry");
    ones += b;
  }
  if (ones != 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("NotOneHot: expected exactly one set bit, got ", ones));
  }
  return absl::OkStatus();
}

}  // namespace

size_t DiscreteDistribution::Sample(RngStream& rng) const {
  const double u = rng.UniformDouble();
  double cumulative = 0.0;
  for (size_t i = 0; i < probabilities.size(); ++i) {
    cumulative += probabilities[i];
    if (u < cumulative) return i;
  }
  // Rounding left u above the final partial sum: return the last outcome
  // with non-zero mass.
  for (size_t i = probabilities.size(); i-- > 0;) {
    if (probabilities[i] > 0) return i;
  }
  return 0;
}

absl::StatusOr<double> RrFlipProbability(double epsilon) {
  if (absl::Status s = CheckEpsilon(epsilon); !s.ok()) return s;
  if (std::isinf(epsilon)) return 0.0;
  // 1/(1+e^eps) written to stay accurate for large eps.
  return std::exp(-epsilon) / (1.0 + std::exp(-epsilon));
}

absl::StatusOr<bool> RandomizeBit(bool bit, double epsilon, RngStream& rng) {
  absl::StatusOr<double> p = RrFlipProbability(epsilon);
  if (!p.ok()) return p.status();
  const bool flip = rng.UniformDouble() < *p;
  return flip ? !bit : bit;
}

absl::StatusOr<double> OnehotFlipProbability(double epsilon) {
  if (absl::Status s = CheckEpsilon(epsilon); !s.ok()) return s;
  return RrFlipProbability(epsilon / 2.0);
}

absl::StatusOr<std::vector<uint8_t>> RandomizeOnehot(
    std::span<const uint8_t> onehot, double epsilon, RngStream& rng) {
  if (absl::Status s = CheckOnehot(onehot); !s.ok()) return s;
  absl::StatusOr<double> p = OnehotFlipProbability(epsilon);
  if (!p.ok()) return p.status();
  std::vector<uint8_t> out(onehot.begin(), onehot.end());
  for (uint8_t& bit : out) {
    if (rng.UniformDouble() < *p) bit ^= 1;
  }
  return out;
}

absl::StatusOr<double> OnehotOutputProbability(std::span<const uint8_t> input,
                                               std::span<const uint8_t> output,
                                               double epsilon) {
  if (absl::Status s = CheckOnehot(input); !s.ok()) return s;
  if (output.size() != input.size()) {
    return absl::InvalidArgumentError(
        "LengthMismatch: output length differs from input");
  }
  absl::StatusOr<double> p = OnehotFlipProbability(epsilon);
  if (!p.ok()) return p.status();
  double prob = 1.0;
  for (size_t i = 0; i < input.size(); ++i) {
    prob *= (input[i] == output[i]) ? 1.0 - *p : *p;
  }
  return prob;
}

absl::StatusOr<DiscreteDistribution> ExponentialDistribution(
    std::span<const double> utilities, double sensitivity, double epsilon) {
  if (utilities.empty()) {
    return absl::InvalidArgumentError("EmptyCandidates: no candidates");
  }
  if (!std::isfinite(sensitivity) || !(sensitivity > 0)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "InvalidSensitivity: sensitivity must be positive, got ", sensitivity));
  }
  if (absl::Status s = CheckEpsilon(epsilon); !s.ok()) return s;
  if (std::isinf(epsilon)) {
    return absl::InvalidArgumentError(
        "InvalidEpsilon: exponential mechanism needs a finite epsilon");
  }
  for (double u : utilities) {
    if (!std::isfinite(u)) {
      return absl::InvalidArgumentError("InvalidUtility: non-finite utility");
    }
  }
  const double max_u = *std::max_element(utilities.begin(), utilities.end());
  const double scale = epsilon / (2.0 * sensitivity);
  DiscreteDistribution dist;
  dist.probabilities.reserve(utilities.size());
  double total = 0.0;
  for (double u : utilities) {
    const double w = std::exp(scale * (u - max_u));
    dist.probabilities.push_back(w);
    total += w;
  }
  for (double& w : dist.probabilities) w /= total;
  return dist;
}

absl::StatusOr<size_t> ExponentialSelectIndex(std::span<const double> utilities,
                                              double sensitivity,
                                              double epsilon, RngStream& rng) {
  absl::StatusOr<DiscreteDistribution> dist =
      ExponentialDistribution(utilities, sensitivity, epsilon);
  if (!dist.ok()) return dist.status();
  return dist->Sample(rng);
}

absl::StatusOr<double> GaussianSigma(double sensitivity_l2, double epsilon,
                                     double delta) {
  if (!std::isfinite(epsilon) || !(epsilon > 0)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "InvalidEpsilon: gaussian epsilon must be positive and finite, got ",
        epsilon));
  }
  if (!(delta > 0 && delta < 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("InvalidDelta: delta must be in (0, 1), got ", delta));
  }
  if (!std::isfinite(sensitivity_l2) || !(sensitivity_l2 > 0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("InvalidSensitivity: sensitivity must be positive, got ",
                     sensitivity_l2));
  }
  return sensitivity_l2 * std::sqrt(2.0 * std::log(1.25 / delta)) / epsilon;
}

absl::StatusOr<std::vector<double>> AddGaussianNoise(
    std::span<const double> values, double sigma, RngStream& rng) {
  if (!std::isfinite(sigma) || !(sigma > 0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("InvalidSigma: sigma must be positive, got ", sigma));
  }
  std::vector<double> out(values.begin(), values.end());
  for (double& v : out) v += sigma * rng.StandardNormal();
  return out;
}

}  // namespace geodp
