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

#include "geodp/pipeline.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "absl/strings/str_cat.h"
#include "geodp/mechanisms.h"
#include "geodp/metrics.h"

namespace geodp {
namespace {

constexpr uint64_t kPerturbTag = 0x7065727475726bULL;
constexpr uint64_t kShuffleTag = 0x73687566666c65ULL;

ScenarioKind ScenarioOf(const RecordValue& value) {
  switch (value.index()) {
    case 0:
      return ScenarioKind::kOneHot;
    case 1:
      return ScenarioKind::kBoolean;
    case 2:
      return ScenarioKind::kRanking;
    default:
      return ScenarioKind::kIncome;
  }
}

absl::Status Inadmissible(ScenarioKind scenario, MechanismKind mech) {
  return absl::FailedPreconditionError(
      absl::StrCat("InadmissibleMechanism: mechanism ", MechanismName(mech),
                   " cannot be applied to scenario ", ScenarioName(scenario)));
}

std::vector<uint8_t> OneHot(int index, int k) {
  std::vector<uint8_t> v(static_cast<size_t>(k), 0);
  v[static_cast<size_t>(index)] = 1;
  return v;
}

// Payload shape used by Aggregate to detect mixed inputs.
struct Shape {
  size_t kind;
  size_t width;
  bool operator==(const Shape&) const = default;
};

Shape ShapeOf(const ReportPayload& p) {
  switch (p.index()) {
    case 0:
      return {0, std::get<BitVectorPayload>(p).bits.size()};
    case 1:
      return {1, 2};
    case 2:
      return {2, static_cast<size_t>(std::get<RankPayload>(p).levels)};
    default:
      return {3, 0};
  }
}

std::vector<double> Frequencies(const RawCellAggregate& raw) {
  std::vector<double> f = raw.outcome_counts;
  for (double& v : f) v /= static_cast<double>(raw.count);
  return f;
}

}  // namespace

absl::Status PipelineConfig::Validate() const {
  if (absl::Status s = mechanism.Validate(); !s.ok()) return s;
  if (!IsAdmissible(scenario, mechanism.kind)) {
    return Inadmissible(scenario, mechanism.kind);
  }
  if (min_cohort < 0) {
    return absl::InvalidArgumentError(absl::StrCat(
        "InvalidConfig: min_cohort must be >= 0, got ", min_cohort));
  }
  return absl::OkStatus();
}

absl::StatusOr<ClientReport> PerturbRecord(const Record& record,
                                           const MechanismConfig& mech,
                                           RngStream& rng) {
  if (absl::Status s = mech.Validate(); !s.ok()) return s;
  const ScenarioKind scenario = ScenarioOf(record.value());
  if (!IsAdmissible(scenario, mech.kind)) {
    return Inadmissible(scenario, mech.kind);
  }
  const bool exact = mech.kind == MechanismKind::kNone;
  ClientReport report{record.cell(), BitPayload{}};

  if (const auto* cat = std::get_if<Categorical>(&record.value())) {
    std::vector<uint8_t> bits = OneHot(cat->index, cat->k);
    if (!exact) {
      absl::StatusOr<std::vector<uint8_t>> noisy =
          RandomizeOnehot(bits, mech.epsilon, rng);
      if (!noisy.ok()) return noisy.status();
      bits = *std::move(noisy);
    }
    report.payload = BitVectorPayload{std::move(bits)};
  } else if (const auto* b = std::get_if<Boolean>(&record.value())) {
    bool bit = b->value;
    if (!exact) {
      absl::StatusOr<bool> noisy = RandomizeBit(bit, mech.epsilon, rng);
      if (!noisy.ok()) return noisy.status();
      bit = *noisy;
    }
    report.payload = BitPayload{bit};
  } else if (const auto* r = std::get_if<Rank>(&record.value())) {
    if (mech.kind == MechanismKind::kRandomizedResponse) {
      absl::StatusOr<std::vector<uint8_t>> noisy =
          RandomizeOnehot(OneHot(r->rank - 1, r->levels), mech.epsilon, rng);
      if (!noisy.ok()) return noisy.status();
      report.payload = BitVectorPayload{*std::move(noisy)};
    } else {
      int rank = r->rank;
      if (!exact) {
        std::vector<double> utilities(static_cast<size_t>(r->levels), 0.0);
        utilities[static_cast<size_t>(r->rank - 1)] = 1.0;
        absl::StatusOr<size_t> chosen =
            ExponentialSelectIndex(utilities, 1.0, mech.epsilon, rng);
        if (!chosen.ok()) return chosen.status();
        rank = static_cast<int>(*chosen) + 1;
      }
      report.payload = RankPayload{rank, r->levels};
    }
  } else {
    const auto& f = std::get<FloatValue>(record.value());
    double value = std::clamp(f.value, f.lo, f.hi);
    if (!exact) {
      absl::StatusOr<double> sigma =
          GaussianSigma(f.hi - f.lo, mech.epsilon, mech.delta);
      if (!sigma.ok()) return sigma.status();
      value += *sigma * rng.StandardNormal();
    }
    report.payload = FloatPayload{value, f.lo, f.hi};
  }
  return report;
}

std::vector<ClientReport> Shuffle(std::vector<ClientReport> reports,
                                  RngStream& rng) {
  for (size_t i = reports.size(); i > 1; --i) {
    const size_t j = rng.UniformIndex(i);
    std::swap(reports[i - 1], reports[j]);
  }
  return reports;
}

absl::StatusOr<std::vector<RawCellAggregate>> Aggregate(
    std::span<const ClientReport> reports, const GridSpec& grid,
    int min_cohort) {
  if (absl::Status s = grid.Validate(); !s.ok()) return s;
  if (min_cohort < 0) {
    return absl::InvalidArgumentError("InvalidConfig: min_cohort must be >= 0");
  }
  std::vector<RawCellAggregate> cells(static_cast<size_t>(grid.cell_count()));
  std::vector<std::vector<double>> float_values;
  if (!reports.empty()) {
    const Shape shape = ShapeOf(reports.front().payload);
    for (RawCellAggregate& cell : cells) {
      cell.outcome_counts.assign(shape.width, 0.0);
    }
    if (shape.kind == 3) float_values.resize(cells.size());
    for (const ClientReport& report : reports) {
      if (!(ShapeOf(report.payload) == shape)) {
        return absl::InvalidArgumentError(
            "MixedPayloads: reports differ in payload kind or length");
      }
      if (report.cell.row < 0 || report.cell.row >= grid.rows ||
          report.cell.col < 0 || report.cell.col >= grid.cols) {
        return absl::InvalidArgumentError("InvalidReport: cell outside grid");
      }
      const auto index = static_cast<size_t>(CellIndex(grid, report.cell));
      RawCellAggregate& cell = cells[index];
      ++cell.count;
      std::visit(
          [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, BitVectorPayload>) {
              for (size_t i = 0; i < p.bits.size(); ++i) {
                cell.outcome_counts[i] += p.bits[i];
              }
            } else if constexpr (std::is_same_v<T, BitPayload>) {
              cell.outcome_counts[p.bit ? 1 : 0] += 1;
            } else if constexpr (std::is_same_v<T, RankPayload>) {
              cell.outcome_counts[static_cast<size_t>(p.rank - 1)] += 1;
            } else {
              float_values[index].push_back(p.value);
            }
          },
          report.payload);
    }
  }
  for (size_t i = 0; i < cells.size(); ++i) {
    if (!float_values.empty()) {
      std::vector<double>& values = float_values[i];
      std::sort(values.begin(), values.end());
      for (double v : values) cells[i].sum += v;
    }
    cells[i].suppressed = cells[i].count < std::max<int64_t>(min_cohort, 1);
  }
  return cells;
}

absl::StatusOr<DebiasedHistogram> DebiasRrHistogram(
    std::span<const double> noisy_counts, double flip_probability, int64_t n) {
  if (!(flip_probability >= 0.0)) {
    return absl::InvalidArgumentError(
        "InvalidFlipProbability: flip probability must be >= 0");
  }
  if (flip_probability >= 0.5 - 1e-9) {
    return absl::InvalidArgumentError(
        absl::StrCat("DegenerateFlipProbability: p = ", flip_probability,
                     " makes the channel non-invertible"));
  }
  if (n < 1) {
    return absl::InvalidArgumentError("InvalidCount: n must be >= 1");
  }
  if (noisy_counts.empty()) {
    return absl::InvalidArgumentError("Empty: no outcomes");
  }
  const double p = flip_probability;
  const double nd = static_cast<double>(n);
  DebiasedHistogram out;
  out.unbiased_counts.reserve(noisy_counts.size());
  double total = 0.0;
  for (double c : noisy_counts) {
    const double estimate = (c - nd * p) / (1.0 - 2.0 * p);
    out.unbiased_counts.push_back(estimate);
    total += std::max(estimate, 0.0);
  }
  out.frequencies.reserve(noisy_counts.size());
  for (double estimate : out.unbiased_counts) {
    out.frequencies.push_back(
        total > 0 ? std::max(estimate, 0.0) / total
                  : 1.0 / static_cast<double>(noisy_counts.size()));
  }
  return out;
}

absl::StatusOr<AggregateResult> RunPipeline(const Dataset& dataset,
                                            const PipelineConfig& cfg) {
  BudgetLedger ledger = cfg.budget_cap.has_value()
                            ? BudgetLedger(*cfg.budget_cap)
                            : BudgetLedger();
  return RunPipeline(dataset, cfg, ledger);
}

absl::StatusOr<AggregateResult> RunPipeline(const Dataset& dataset,
                                            const PipelineConfig& cfg,
                                            BudgetLedger& ledger) {
  if (absl::Status s = cfg.Validate(); !s.ok()) return s;
  const ScenarioConfig& data_cfg = dataset.config;
  if (absl::Status s = data_cfg.Validate(); !s.ok()) return s;
  if (data_cfg.scenario != cfg.scenario) {
    return absl::InvalidArgumentError(absl::StrCat(
        "ScenarioMismatch: dataset is ", ScenarioName(data_cfg.scenario),
        ", pipeline expects ", ScenarioName(cfg.scenario)));
  }
  for (const Record& rec : dataset.records) {
    if (!MatchesScenario(cfg.scenario, rec.value())) {
      return absl::InvalidArgumentError(
          "ScenarioMismatch: record type does not match scenario");
    }
  }
  const MechanismConfig& mech = cfg.mechanism;
  const auto n_records = static_cast<int64_t>(dataset.records.size());

  // Charge before any private value exists, so a rejected run emits nothing.
  const size_t ledger_start = ledger.entries().size();
  if (mech.kind != MechanismKind::kNone && n_records > 0) {
    BudgetEntry entry{.kind = mech.kind,
                      .epsilon = mech.epsilon,
                      .delta = 0.0,
                      .sensitivity = 1.0,
                      .count = n_records};
    if (mech.kind == MechanismKind::kGaussian) {
      // Recorded on the [0, 1]-scaled values: sensitivity 1, sigma in
      // normalized units. Raw noise is sigma * (hi - lo).
      absl::StatusOr<double> sigma =
          GaussianSigma(1.0, mech.epsilon, mech.delta);
      if (!sigma.ok()) return sigma.status();
      entry.delta = mech.delta;
      entry.sigma = *sigma;
      entry.value_scale = data_cfg.income_hi - data_cfg.income_lo;
    }
    if (absl::Status s = ledger.Charge(entry); !s.ok()) return s;
  }

  std::vector<ClientReport> exact_reports;
  std::vector<ClientReport> private_reports;
  exact_reports.reserve(dataset.records.size());
  private_reports.reserve(dataset.records.size());
  const uint64_t perturb_seed = MixSeed(cfg.seed, kPerturbTag);
  RngStream unused(0);
  for (size_t i = 0; i < dataset.records.size(); ++i) {
    const Record& rec = dataset.records[i];
    absl::StatusOr<ClientReport> exact =
        PerturbRecord(rec, MechanismConfig::None(), unused);
    if (!exact.ok()) return exact.status();
    exact_reports.push_back(*std::move(exact));
    RngStream rng(MixSeed(perturb_seed, i));
    absl::StatusOr<ClientReport> noisy = PerturbRecord(rec, mech, rng);
    if (!noisy.ok()) return noisy.status();
    private_reports.push_back(*std::move(noisy));
  }
  RngStream shuffle_rng(MixSeed(cfg.seed, kShuffleTag));
  private_reports = Shuffle(std::move(private_reports), shuffle_rng);

  absl::StatusOr<std::vector<RawCellAggregate>> true_raw =
      Aggregate(exact_reports, data_cfg.grid, 0);
  if (!true_raw.ok()) return true_raw.status();
  absl::StatusOr<std::vector<RawCellAggregate>> private_raw =
      Aggregate(private_reports, data_cfg.grid, cfg.min_cohort);
  if (!private_raw.ok()) return private_raw.status();

  const double lo = data_cfg.income_lo;
  const double hi = data_cfg.income_hi;
  auto scaled_mean = [lo, hi](const RawCellAggregate& raw) {
    return std::vector<double>{(raw.sum / static_cast<double>(raw.count) - lo) /
                               (hi - lo)};
  };
  auto normalize_exact = [&](const RawCellAggregate& raw) {
    if (raw.count == 0) return std::vector<double>{};
    return cfg.scenario == ScenarioKind::kIncome ? scaled_mean(raw)
                                                 : Frequencies(raw);
  };
  auto normalize_private =
      [&](const RawCellAggregate& raw) -> absl::StatusOr<std::vector<double>> {
    switch (mech.kind) {
      case MechanismKind::kNone:
        return normalize_exact(raw);
      case MechanismKind::kGaussian:
        return scaled_mean(raw);
      case MechanismKind::kExponential:
        return Frequencies(raw);
      case MechanismKind::kRandomizedResponse: {
        absl::StatusOr<double> p = cfg.scenario == ScenarioKind::kBoolean
                                       ? RrFlipProbability(mech.epsilon)
                                       : OnehotFlipProbability(mech.epsilon);
        if (!p.ok()) return p.status();
        absl::StatusOr<DebiasedHistogram> hist =
            DebiasRrHistogram(raw.outcome_counts, *p, raw.count);
        if (!hist.ok()) return hist.status();
        return std::move(hist->frequencies);
      }
    }
    return absl::InternalError("unreachable mechanism kind");
  };

  AggregateResult result;
  result.grid = data_cfg.grid;
  result.cells.reserve(true_raw->size());
  std::vector<double> true_flat;
  std::vector<double> private_flat;
  for (int r = 0; r < data_cfg.grid.rows; ++r) {
    for (int c = 0; c < data_cfg.grid.cols; ++c) {
      const CellId id{r, c};
      const auto index = static_cast<size_t>(CellIndex(data_cfg.grid, id));
      const RawCellAggregate& t = (*true_raw)[index];
      const RawCellAggregate& p = (*private_raw)[index];
      CellResult cell{.id = id,
                      .bounds = BoundsOf(data_cfg.grid, id),
                      .true_aggregate = normalize_exact(t),
                      .private_aggregate = std::nullopt,
                      .count = p.count,
                      .suppressed = p.suppressed};
      if (p.suppressed) {
        ++result.suppressed_cells;
      } else {
        absl::StatusOr<std::vector<double>> agg = normalize_private(p);
        if (!agg.ok()) return agg.status();
        true_flat.insert(true_flat.end(), cell.true_aggregate.begin(),
                         cell.true_aggregate.end());
        private_flat.insert(private_flat.end(), agg->begin(), agg->end());
        cell.private_aggregate = *std::move(agg);
      }
      result.cells.push_back(std::move(cell));
    }
  }
  if (!true_flat.empty()) {
    absl::StatusOr<double> mse = Mse(true_flat, private_flat);
    if (!mse.ok()) return mse.status();
    result.mse = *mse;
  }

  result.ledger.assign(ledger.entries().begin() + ledger_start,
                       ledger.entries().end());
  if (mech.kind == MechanismKind::kNone) {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    result.per_user = {kInf, 0.0};
    result.composed = {kInf, 0.0};
  } else {
    result.per_user = PerUserBudget(result.ledger);
    absl::StatusOr<EpsilonDelta> composed =
        ComposeMixed(result.ledger, ledger.rdp_options());
    if (!composed.ok()) return composed.status();
    result.composed = *composed;
  }
  return result;
}

}  // namespace geodp
