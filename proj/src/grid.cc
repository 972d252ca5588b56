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

#include "geodp/grid.h"

#include <cmath>

#include "absl/strings/str_cat.h"

namespace geodp {
namespace {

double Edge(double lo, double hi, int index, int count) {
  if (index >= count) return hi;
  return lo + (hi - lo) * static_cast<double>(index) / count;
}

// Index i with edge(i) <= v < edge(i+1), closing the last interval on the
// right. The floor estimate is corrected against the exact edge function so
// Locate and BoundsOf never disagree by rounding.
int Bucket(double lo, double hi, int count, double v) {
  int i = static_cast<int>(std::floor((v - lo) / (hi - lo) * count));
  if (i < 0) i = 0;
  if (i > count - 1) i = count - 1;
  while (i > 0 && v < Edge(lo, hi, i, count)) --i;
  while (i < count - 1 && v >= Edge(lo, hi, i + 1, count)) ++i;
  return i;
}

}  // namespace

GridSpec GridSpec::Pittsburgh() {
  return GridSpec{.lat_min = 40.40,
                  .lat_max = 40.50,
                  .lon_min = -80.05,
                  .lon_max = -79.85,
                  .rows = 16,
                  .cols = 16};
}

absl::Status GridSpec::Validate() const {
  if (!std::isfinite(lat_min) || !std::isfinite(lat_max) ||
      !(lat_min < lat_max)) {
    return absl::InvalidArgumentError(
        absl::StrCat("InvalidSpec: lat_min must be < lat_max, got ", lat_min,
                     " and ", lat_max));
  }
  if (!std::isfinite(lon_min) || !std::isfinite(lon_max) ||
      !(lon_min < lon_max)) {
    return absl::InvalidArgumentError(
        absl::StrCat("InvalidSpec: lon_min must be < lon_max, got ", lon_min,
                     " and ", lon_max));
  }
  if (rows < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("InvalidSpec: rows must be >= 1, got ", rows));
  }
  if (cols < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("InvalidSpec: cols must be >= 1, got ", cols));
  }
  if (cell_count() > kMaxGridCells) {
    return absl::InvalidArgumentError(
        absl::StrCat("InvalidSpec: rows*cols must be <= ", kMaxGridCells,
                     ", got ", cell_count()));
  }
  return absl::OkStatus();
}

double RowEdge(const GridSpec& spec, int row) {
  return Edge(spec.lat_min, spec.lat_max, row, spec.rows);
}

double ColEdge(const GridSpec& spec, int col) {
  return Edge(spec.lon_min, spec.lon_max, col, spec.cols);
}

CellBounds BoundsOf(const GridSpec& spec, CellId cell) {
  return CellBounds{.lat_min = RowEdge(spec, cell.row),
                    .lat_max = RowEdge(spec, cell.row + 1),
                    .lon_min = ColEdge(spec, cell.col),
                    .lon_max = ColEdge(spec, cell.col + 1)};
}

absl::StatusOr<std::vector<Cell>> BuildGrid(const GridSpec& spec) {
  if (absl::Status s = spec.Validate(); !s.ok()) return s;
  std::vector<Cell> cells;
  cells.reserve(static_cast<size_t>(spec.cell_count()));
  for (int r = 0; r < spec.rows; ++r) {
    for (int c = 0; c < spec.cols; ++c) {
      const CellId id{r, c};
      cells.push_back(Cell{id, BoundsOf(spec, id)});
    }
  }
  return cells;
}

absl::StatusOr<CellId> Locate(const GridSpec& spec, double lat, double lon) {
  if (absl::Status s = spec.Validate(); !s.ok()) return s;
  if (!(lat >= spec.lat_min && lat <= spec.lat_max && lon >= spec.lon_min &&
        lon <= spec.lon_max)) {
    return absl::OutOfRangeError(absl::StrCat("OutOfBounds: point (", lat, ", ",
                                              lon, ") is outside the grid"));
  }
  return CellId{Bucket(spec.lat_min, spec.lat_max, spec.rows, lat),
                Bucket(spec.lon_min, spec.lon_max, spec.cols, lon)};
}

}  // namespace geodp
