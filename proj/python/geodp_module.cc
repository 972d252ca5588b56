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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "geodp/accountant.h"
#include "geodp/mechanisms.h"
#include "geodp/metrics.h"
#include "geodp/perlin.h"
#include "geodp/pipeline.h"
#include "geodp/rng.h"
#include "geodp/service.h"
#include "geodp/synthgen.h"
#include "json.hpp"

namespace py = pybind11;

namespace {

using nlohmann::json;

PyObject* budget_exceeded_error = nullptr;

[[noreturn]] void Raise(const absl::Status& status) {
  const std::string msg(status.message());
  switch (status.code()) {
    case absl::StatusCode::kResourceExhausted:
      PyErr_SetString(budget_exceeded_error, msg.c_str());
      throw py::error_already_set();
    case absl::StatusCode::kUnavailable:
      throw std::ios_base::failure(msg);
    default:
      throw py::value_error(msg);
  }
}

template <typename T>
T Unwrap(absl::StatusOr<T> value) {
  if (!value.ok()) Raise(value.status());
  return *std::move(value);
}

json ParseJson(const std::string& text) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw py::value_error("body: malformed JSON");
  return j;
}

}  // namespace

PYBIND11_MODULE(_geodp, m) {
  m.doc() = "Native core of the geodp locational differential-privacy toolkit.";

  budget_exceeded_error = PyErr_NewException("geodp.BudgetExceededError",
                                             PyExc_RuntimeError, nullptr);
  m.attr("BudgetExceededError") = py::handle(budget_exceeded_error);

  m.def(
      "rr_flip_probability",
      [](double epsilon) { return Unwrap(geodp::RrFlipProbability(epsilon)); },
      py::arg("epsilon"));
  m.def(
      "randomize_bit",
      [](bool bit, double epsilon, uint64_t seed) {
        geodp::RngStream rng(seed);
        return Unwrap(geodp::RandomizeBit(bit, epsilon, rng));
      },
      py::arg("bit"), py::arg("epsilon"), py::arg("seed"));
  m.def(
      "randomize_onehot",
      [](const std::vector<uint8_t>& onehot, double epsilon, uint64_t seed) {
        geodp::RngStream rng(seed);
        return Unwrap(geodp::RandomizeOnehot(onehot, epsilon, rng));
      },
      py::arg("onehot"), py::arg("epsilon"), py::arg("seed"));
  m.def(
      "exponential_distribution",
      [](const std::vector<double>& utilities, double sensitivity,
         double epsilon) {
        return Unwrap(geodp::ExponentialDistribution(utilities, sensitivity,
                                                     epsilon))
            .probabilities;
      },
      py::arg("utilities"), py::arg("sensitivity"), py::arg("epsilon"));
  m.def(
      "exponential_select",
      [](const std::vector<double>& utilities, double sensitivity,
         double epsilon, uint64_t seed) {
        geodp::RngStream rng(seed);
        return Unwrap(geodp::ExponentialSelectIndex(utilities, sensitivity,
                                                    epsilon, rng));
      },
      py::arg("utilities"), py::arg("sensitivity"), py::arg("epsilon"),
      py::arg("seed"), "Index of the selected candidate.");
  m.def(
      "gaussian_sigma",
      [](double sensitivity, double epsilon, double delta) {
        return Unwrap(geodp::GaussianSigma(sensitivity, epsilon, delta));
      },
      py::arg("sensitivity"), py::arg("epsilon"), py::arg("delta"));
  m.def(
      "add_gaussian_noise",
      [](const std::vector<double>& values, double sigma, uint64_t seed) {
        geodp::RngStream rng(seed);
        return Unwrap(geodp::AddGaussianNoise(values, sigma, rng));
      },
      py::arg("values"), py::arg("sigma"), py::arg("seed"));
  m.def(
      "compose_rdp_gaussian",
      [](double sigma, double sensitivity, int64_t steps, double delta,
         std::optional<std::vector<double>> alphas) {
        geodp::RdpOptions opts;
        if (alphas.has_value()) opts.alphas = *alphas;
        return Unwrap(
            geodp::ComposeRdpGaussian(sigma, sensitivity, steps, delta, opts));
      },
      py::arg("sigma"), py::arg("sensitivity"), py::arg("steps"),
      py::arg("delta"), py::arg("alphas") = py::none());
  m.def(
      "debias_rr_histogram",
      [](const std::vector<double>& counts, double p, int64_t n) {
        geodp::DebiasedHistogram h =
            Unwrap(geodp::DebiasRrHistogram(counts, p, n));
        return py::make_tuple(h.unbiased_counts, h.frequencies);
      },
      py::arg("noisy_counts"), py::arg("flip_probability"), py::arg("n"),
      "Returns (unbiased_counts, frequencies).");
  m.def(
      "perlin",
      [](uint64_t seed, double x, double y, double frequency, int octaves,
         bool normalize) {
        return geodp::Perlin({seed, frequency, octaves, normalize}, x, y);
      },
      py::arg("seed"), py::arg("x"), py::arg("y"), py::arg("frequency") = 1.0,
      py::arg("octaves") = 1, py::arg("normalize") = true);
  m.def(
      "mse",
      [](const std::vector<double>& a, const std::vector<double>& b) {
        return Unwrap(geodp::Mse(a, b));
      },
      py::arg("a"), py::arg("b"));

  // JSON-in/JSON-out entry points; geodp/__init__.py wraps them with dicts.
  m.def("_generate_jsonl", [](const std::string& request) {
    const json j = ParseJson(request);
    geodp::RunRequest parsed =
        Unwrap(geodp::ParseRunRequest(j, /*require_seed=*/false));
    geodp::Dataset dataset;
    {
      py::gil_scoped_release release;
      absl::StatusOr<geodp::Dataset> generated =
          geodp::GenerateDataset(parsed.data);
      py::gil_scoped_acquire acquire;
      dataset = Unwrap(std::move(generated));
    }
    std::ostringstream out;
    geodp::WriteDatasetJsonl(dataset, out);
    return out.str();
  });
  m.def("_simulate", [](const std::string& request) {
    const json j = ParseJson(request);
    geodp::RunRequest parsed =
        Unwrap(geodp::ParseRunRequest(j, /*require_seed=*/true));
    absl::StatusOr<json> response;
    {
      py::gil_scoped_release release;
      response = geodp::ExecuteRun(parsed);
    }
    return geodp::SerializeResponse(Unwrap(std::move(response)));
  });
  m.def("_sweep", [](const std::string& request) {
    const json j = ParseJson(request);
    geodp::SweepConfig cfg =
        Unwrap(geodp::ParseSweepRequest(j, /*require_seed=*/true));
    absl::StatusOr<geodp::SweepTable> table;
    {
      py::gil_scoped_release release;
      table = geodp::RunSweep(cfg);
    }
    return geodp::SweepResponseToJson(Unwrap(std::move(table))).dump();
  });
  m.def("_meta", []() { return geodp::MetaJson().dump(); });
}
