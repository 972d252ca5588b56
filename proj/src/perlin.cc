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

#include "geodp/perlin.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "geodp/rng.h"

namespace geodp {
namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

constexpr double kGradients[8][2] = {{1.0, 0.0},
                                     {-1.0, 0.0},
                                     {0.0, 1.0},
                                     {0.0, -1.0},
                                     {kInvSqrt2, kInvSqrt2},
                                     {-kInvSqrt2, kInvSqrt2},
                                     {kInvSqrt2, -kInvSqrt2},
                                     {-kInvSqrt2, -kInvSqrt2}};

double Fade(double t) { return t * t * t * (t * (t * 6.0 - 15.0) + 10.0); }

double Lerp(double a, double b, double t) { return a + t * (b - a); }

}  // namespace

PerlinNoise::PerlinNoise(const PerlinField& field) : field_(field) {
  std::array<uint8_t, 256> base;
  std::iota(base.begin(), base.end(), 0);
  RngStream rng(field.seed);
  for (size_t i = base.size() - 1; i > 0; --i) {
    std::swap(base[i], base[rng.UniformIndex(i + 1)]);
  }
  for (size_t i = 0; i < perm_.size(); ++i) perm_[i] = base[i & 255];
}

int PerlinNoise::GradientIndex(int64_t ix, int64_t iy) const {
  const int x = static_cast<int>(ix & 255);
  const int y = static_cast<int>(iy & 255);
  return perm_[perm_[x] + y] & 7;
}

double PerlinNoise::Octave(double x, double y) const {
  const double fx = std::floor(x);
  const double fy = std::floor(y);
  const auto x0 = static_cast<int64_t>(fx);
  const auto y0 = static_cast<int64_t>(fy);
  const double dx = x - fx;
  const double dy = y - fy;

  auto corner = [&](int64_t cx, int64_t cy, double ox, double oy) {
    const double* g = kGradients[GradientIndex(cx, cy)];
    return g[0] * ox + g[1] * oy;
  };
  const double n00 = corner(x0, y0, dx, dy);
  const double n10 = corner(x0 + 1, y0, dx - 1.0, dy);
  const double n01 = corner(x0, y0 + 1, dx, dy - 1.0);
  const double n11 = corner(x0 + 1, y0 + 1, dx - 1.0, dy - 1.0);
  const double u = Fade(dx);
  const double v = Fade(dy);
  return Lerp(Lerp(n00, n10, u), Lerp(n01, n11, u), v);
}

double PerlinNoise::Evaluate(double x, double y) const {
  double sum = 0.0;
  double amplitude = 1.0;
  double total_amplitude = 0.0;
  double frequency = field_.frequency;
  const int octaves = std::max(1, field_.octaves);
  for (int o = 0; o < octaves; ++o) {
    sum += amplitude * Octave(x * frequency, y * frequency);
    total_amplitude += amplitude;
    amplitude *= 0.5;
    frequency *= 2.0;
  }
  if (!field_.normalize) return sum;
  return std::clamp(sum / total_amplitude / kInvSqrt2, -1.0, 1.0);
}

double Perlin(const PerlinField& field, double x, double y) {
  return PerlinNoise(field).Evaluate(x, y);
}

}  // namespace geodp
