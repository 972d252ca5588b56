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

#ifndef GEODP_MECHANISMS_H_
#define GEODP_MECHANISMS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "geodp/rng.h"

namespace geodp {

// Probabilities over outcome indices 0..n-1; non-negative, summing to 1.
struct DiscreteDistribution {
  std::vector<double> probabilities;

  size_t size() const { return probabilities.size(); }
  size_t Sample(RngStream& rng) const;
};

// Randomized response flip probability 1 / (1 + e^epsilon). epsilon = +inf
// gives 0. Fails with InvalidEpsilon for negative or NaN epsilon.
absl::StatusOr<double> RrFlipProbability(double epsilon);

// Keeps `bit` with probability e^eps/(1+e^eps), flips it otherwise. The
// decision is a single uniform draw u: flip iff u < RrFlipProbability(eps).
absl::StatusOr<bool> RandomizeBit(bool bit, double epsilon, RngStream& rng);

// Per-bit flip probability used for one-hot vectors. Neighbouring one-hot
// vectors differ in two coordinates, so each bit is randomized with eps/2.
absl::StatusOr<double> OnehotFlipProbability(double epsilon);

// Flips every bit of a one-hot vector independently with
// OnehotFlipProbability(epsilon). The output need not be one-hot. Fails with
// NotOneHot unless the input has length >= 2 and exactly one set bit.
absl::StatusOr<std::vector<uint8_t>> RandomizeOnehot(
    std::span<const uint8_t> onehot, double epsilon, RngStream& rng);

// Probability that RandomizeOnehot maps `input` to `output`.
absl::StatusOr<double> OnehotOutputProbability(std::span<const uint8_t> input,
                                               std::span<const uint8_t> output,
                                               double epsilon);

// Output distribution of the exponential mechanism: P(r) proportional to
// exp(epsilon * u_r / (2 * sensitivity)). Weights are computed after
// subtracting max(u), which leaves the normalized distribution unchanged and
// keeps exp() finite.
absl::StatusOr<DiscreteDistribution> ExponentialDistribution(
    std::span<const double> utilities, double sensitivity, double epsilon);

// Samples a candidate index from ExponentialDistribution.
absl::StatusOr<size_t> ExponentialSelectIndex(std::span<const double> utilities,
                                              double sensitivity,
                                              double epsilon, RngStream& rng);

template <typename T>
absl::StatusOr<T> ExponentialSelect(std::span<const T> candidates,
                                    std::span<const double> utilities,
                                    double sensitivity, double epsilon,
                                    RngStream& rng) {
  if (candidates.empty()) {
    return absl::InvalidArgumentError("EmptyCandidates: no candidates");
  }
  if (candidates.size() != utilities.size()) {
    return absl::InvalidArgumentError(
        "LengthMismatch: candidates and utilities differ in length");
  }
  absl::StatusOr<size_t> index =
      ExponentialSelectIndex(utilities, sensitivity, epsilon, rng);
  if (!index.ok()) return index.status();
  return candidates[*index];
}

// Gaussian mechanism noise scale
//   sigma = sensitivity * sqrt(2 ln(1.25 / delta)) / epsilon.
// The classical guarantee behind this calibration assumes epsilon < 1; larger
// epsilon values are accepted as a heuristic calibration.
absl::StatusOr<double> GaussianSigma(double sensitivity_l2, double epsilon,
                                     double delta);

// values[i] + N(0, sigma^2), independently per coordinate.
absl::StatusOr<std::vector<double>> AddGaussianNoise(
    std::span<const double> values, double sigma, RngStream& rng);

}  // namespace geodp

#endif  // GEODP_MECHANISMS_H_
