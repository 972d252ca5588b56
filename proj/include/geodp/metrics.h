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

#ifndef GEODP_METRICS_H_
#define GEODP_METRICS_H_

#include <span>

#include "absl/status/statusor.h"

namespace geodp {

// Mean squared error (1/n) * sum (a_i - b_i)^2.
absl::StatusOr<double> Mse(std::span<const double> a,
                           std::span<const double> b);

}  // namespace geodp

#endif  // GEODP_METRICS_H_
