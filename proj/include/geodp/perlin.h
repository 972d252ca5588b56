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

#ifndef GEODP_PERLIN_H_
#define GEODP_PERLIN_H_

#include <array>
#include <cstdint>

namespace geodp {

struct PerlinField {
  uint64_t seed = 0;
  // Lattice cells per unit of input coordinate.
  double frequency = 1.0;
  // Each further octave doubles the frequency and halves the amplitude.
  int octaves = 1;
  // Scale the output into [-1, 1] (divide by the 2D extreme sqrt(2)/2).
  bool normalize = true;
};

// Classic 2D gradient noise: a seed-shuffled permutation table selects one of
// 8 unit gradients per lattice corner; corner contributions are blended with
// the quintic fade 6t^5 - 15t^4 + 10t^3. The value is zero on every integer
// lattice point of the base frequency.
class PerlinNoise {
 public:
  explicit PerlinNoise(const PerlinField& field);

  double Evaluate(double x, double y) const;

 private:
  double Octave(double x, double y) const;
  int GradientIndex(int64_t ix, int64_t iy) const;

  PerlinField field_;
  std::array<uint8_t, 512> perm_;
};

// Convenience wrapper building the permutation table for a single lookup.
double Perlin(const PerlinField& field, double x, double y);

}  // namespace geodp

#endif  // GEODP_PERLIN_H_
