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

#ifndef GEODP_PIPELINE_H_
#define GEODP_PIPELINE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "geodp/accountant.h"
#include "geodp/grid.h"
#include "geodp/record.h"
#include "geodp/rng.h"
#include "geodp/synthgen.h"

namespace geodp {

// Report payloads. A report carries its cell and nothing identifying the
// client that produced it.
struct BitVectorPayload {
  std::vector<uint8_t> bits;
  bool operator==(const BitVectorPayload&) const = default;
};
struct BitPayload {
  bool bit = false;
  bool operator==(const BitPayload&) const = default;
};
struct RankPayload {
  int rank = 1;
  int levels = 2;
  bool operator==(const RankPayload&) const = default;
};
struct FloatPayload {
  double value = 0.0;
  double lo = 0.0;
  double hi = 1.0;
  bool operator==(const FloatPayload&) const = default;
};

using ReportPayload =
    std::variant<BitVectorPayload, BitPayload, RankPayload, FloatPayload>;

struct ClientReport {
  CellId cell;
  ReportPayload payload;
  bool operator==(const ClientReport&) const = default;
};

struct PipelineConfig {
  ScenarioKind scenario = ScenarioKind::kBoolean;
  MechanismConfig mechanism = MechanismConfig::None();
  // Cells with fewer reports than this are suppressed.
  int min_cohort = 0;
  uint64_t seed = 0;
  // Optional cap on the composed totals of the run's ledger.
  std::optional<EpsilonDelta> budget_cap;

  absl::Status Validate() const;
};

// Local perturbation of a single record:
//   Categorical -> RandomizeOnehot of its one-hot encoding
//   Boolean     -> RandomizeBit
//   Rank        -> ExponentialSelect over 1..m with indicator utility
//                  (Delta u = 1), or RandomizeOnehot of the rank's one-hot
//   Float       -> clip to [lo, hi], add N(0, sigma^2) with sensitivity hi-lo
// Mechanism none returns the exact encoding. Pairs outside IsAdmissible fail
// with InadmissibleMechanism.
absl::StatusOr<ClientReport> PerturbRecord(const Record& record,
                                           const MechanismConfig& mech,
                                           RngStream& rng);

// Uniform random permutation (Fisher-Yates).
std::vector<ClientReport> Shuffle(std::vector<ClientReport> reports,
                                  RngStream& rng);

// Per-cell tallies. outcome_counts holds per-bit counts for bit vectors,
// {false, true} counts for bits and per-rank counts (index rank-1) for ranks;
// float reports fill sum instead.
struct RawCellAggregate {
  int64_t count = 0;
  std::vector<double> outcome_counts;
  double sum = 0.0;
  bool suppressed = false;
};

// Tallies reports per cell (row-major over `grid`). Cells with fewer than
// max(min_cohort, 1) reports are suppressed. Float sums are accumulated in
// sorted order so the result does not depend on report order. Fails with
// MixedPayloads when reports disagree in payload kind or shape.
absl::StatusOr<std::vector<RawCellAggregate>> Aggregate(
    std::span<const ClientReport> reports, const GridSpec& grid,
    int min_cohort);

struct DebiasedHistogram {
  // (noisy_count - n p) / (1 - 2p) per outcome, before clamping.
  std::vector<double> unbiased_counts;
  // Clamped at 0 and renormalized to sum to 1.
  std::vector<double> frequencies;
};

// Inverts the per-bit randomized response channel. Fails with
// DegenerateFlipProbability when p >= 0.5 - 1e-9.
absl::StatusOr<DebiasedHistogram> DebiasRrHistogram(
    std::span<const double> noisy_counts, double flip_probability, int64_t n);

struct CellResult {
  CellId id;
  CellBounds bounds;
  std::vector<double> true_aggregate;
  // Absent for suppressed cells.
  std::optional<std::vector<double>> private_aggregate;
  int64_t count = 0;
  bool suppressed = false;
};

struct AggregateResult {
  GridSpec grid;
  std::vector<CellResult> cells;
  // Absent when every cell is suppressed.
  std::optional<double> mse;
  int suppressed_cells = 0;
  std::vector<BudgetEntry> ledger;
  EpsilonDelta per_user;
  EpsilonDelta composed;
};

// True aggregates (mechanism none), per-record perturbation with streams
// derived from (seed, record index), shuffle, per-cell aggregation with
// cohort gating, debiasing for randomized response, ledger charge, and MSE
// between true and private normalized aggregates on released cells.
// Normalized aggregates: category/rank frequencies, {P(false), P(true)} for
// booleans, and (mean - lo) / (hi - lo) for floats.
absl::StatusOr<AggregateResult> RunPipeline(const Dataset& dataset,
                                            const PipelineConfig& cfg);

// As above, charging `ledger` instead of a fresh one.
absl::StatusOr<AggregateResult> RunPipeline(const Dataset& dataset,
                                            const PipelineConfig& cfg,
                                            BudgetLedger& ledger);

}  // namespace geodp

#endif  // GEODP_PIPELINE_H_
