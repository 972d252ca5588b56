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

#ifndef GEODP_RNG_H_
#define GEODP_RNG_H_

#include <array>
#include <cstdint>

namespace geodp {

// Combines a seed with a stream index into a new, well-mixed 64-bit seed.
// Used to derive per-record, per-field and per-tuple streams so results do
// not depend on execution order.
uint64_t MixSeed(uint64_t seed, uint64_t index);

// Deterministic pseudo-random stream (xoshiro256**, seeded via splitmix64).
// Output is a pure function of the seed on every platform. A stream has a
// single owner; derive independent streams with MixSeed instead of sharing.
class RngStream {
 public:
  explicit RngStream(uint64_t seed);

  uint64_t NextU64();

  // Uniform on [0, 1) with 53 bits of resolution.
  double UniformDouble();

  // Uniform integer in [0, n). n must be positive.
  uint64_t UniformIndex(uint64_t n);

  // Standard normal draw (Marsaglia polar method).
  double StandardNormal();

 private:
  std::array<uint64_t, 4> state_;
  double spare_normal_ = 0.0;
  bool has_spare_normal_ = false;
};

}  // namespace geodp

#endif  // GEODP_RNG_H_
