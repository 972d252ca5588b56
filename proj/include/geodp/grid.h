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

#ifndef GEODP_GRID_H_
#define GEODP_GRID_H_

#include <cstdint>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace geodp {

inline constexpr int64_t kMaxGridCells = 1'000'000;

// Geographic bounding box partitioned into rows x cols cells. Rows run along
// latitude (row 0 at lat_min), columns along longitude (col 0 at lon_min).
// Coordinates are flat lat/lon degrees; no projection is applied.
struct GridSpec {
  double lat_min = 0.0;
  double lat_max = 0.0;
  double lon_min = 0.0;
  double lon_max = 0.0;
  int rows = 0;
  int cols = 0;

  // Pittsburgh preset region covering the CMU campus, 16x16 cells.
  static GridSpec Pittsburgh();

  int64_t cell_count() const { return int64_t{rows} * cols; }

  absl::Status Validate() const;

  bool operator==(const GridSpec&) const = default;
};

struct CellId {
  int row = 0;
  int col = 0;

  bool operator==(const CellId&) const = default;
};

struct CellBounds {
  double lat_min = 0.0;
  double lat_max = 0.0;
  double lon_min = 0.0;
  double lon_max = 0.0;
};

struct Cell {
  CellId id;
  CellBounds bounds;
};

// Row-major index of `cell` within `spec`.
inline int64_t CellIndex(const GridSpec& spec, CellId cell) {
  return int64_t{cell.row} * spec.cols + cell.col;
}

// Latitude of the lower edge of row `row`; row == rows yields lat_max. Edges
// are shared by adjacent cells, so the tiling has no gaps or overlaps.
double RowEdge(const GridSpec& spec, int row);
double ColEdge(const GridSpec& spec, int col);

CellBounds BoundsOf(const GridSpec& spec, CellId cell);

// All rows*cols cells in row-major order. Fails with InvalidSpec when the
// spec violates its invariants.
absl::StatusOr<std::vector<Cell>> BuildGrid(const GridSpec& spec);

// Cell containing (lat, lon). Cells are half-open [min, max) on both axes,
// except that the maximal edges of the box belong to the last row/column.
// Points outside the box fail with OutOfBounds.
absl::StatusOr<CellId> Locate(const GridSpec& spec, double lat, double lon);

}  // namespace geodp

#endif  // GEODP_GRID_H_
