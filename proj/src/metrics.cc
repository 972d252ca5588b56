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

#include "geodp/metrics.h"

#include "absl/strings/str_cat.h"

namespace geodp {

absl::StatusOr<double> Mse(std::span<const double> a,
                           std::span<const double> b) {
  if (a.size() != b.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "LengthMismatch: ", a.size(), " vs ", b.size(), " elements"));
  }
  if (a.empty()) return absl::InvalidArgumentError("Empty: no elements");
  double total = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    total += d * d;
  }
  return total / static_cast<double>(a.size());
}

}  // namespace geodp
