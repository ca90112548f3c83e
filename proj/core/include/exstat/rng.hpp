// Copyright 2026 The exstat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "exstat/types.hpp"

namespace exstat {

/// Deterministic per-(seed, stream) generator for the Monte Carlo kernels.
/// Uniform doubles come from raw 64-bit draws, so the stream is identical
/// across standard-library implementations; mt19937_64 itself is fully
/// specified by the standard.
class SubstreamRng {
 public:
  SubstreamRng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{
        static_cast<std::uint32_t>(seed),
        static_cast<std::uint32_t>(seed >> 32),
        static_cast<std::uint32_t>(stream),
        static_cast<std::uint32_t>(stream >> 32),
    };
    engine_.seed(seq);
  }

  /// Uniform in [0, 1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Area-uniform point on the unit sphere, returned as the stereographic
  /// coordinate (projection from the north pole). Density per dx dy is
  /// sphere_density().
  Complex sphere_point() {
    const double u = 1.0 - 2.0 * uniform01();  // cos(theta), in (-1, 1]
    const double phi = 2.0 * kPi * uniform01();
    const double r = std::sqrt((1.0 - u) / (1.0 + u));
    return std::polar(r, phi);
  }

 private:
  std::mt19937_64 engine_;
};

/// Plane density of sphere_point(): p(z) = 1 / (pi (1 + |z|^2)^2).
inline double sphere_density(const Complex& z) {
  const double w = 1.0 + std::norm(z);
  return 1.0 / (kPi * w * w);
}

}  // namespace exstat
