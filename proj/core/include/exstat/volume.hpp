// Copyright 2026 The exstat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "exstat/geometry.hpp"
#include "exstat/types.hpp"

namespace exstat {

/// Monte Carlo estimate of an N-particle phase-space volume, in units of
/// h^N. Identical (seed, samples) give bit-identical results for every
/// worker count: sampling is split into fixed chunks with seed-derived
/// substreams and reduced in chunk order.
struct VolumeEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  int n_workers = 1;
};

/// Closed-form N-particle volume V = (1/N!) (A - alpha (N-1))^N in units of
/// h^N, with A = h 2j and alpha = 0 (boson), h (fermion), nu h (anyon),
/// g h (exclusion). Clamps to 0 when the excluded volume saturates the
/// area (the maximum-particle-number regime).
double closed_form_volume(int n, const FluxSector& flux,
                          const StatisticsKind& kind);

/// Same closed form with the single-particle volume supplied directly
/// (vortex-type systems). `area_h` and `alpha_h` are in units of h.
double closed_form_volume_with_area(int n, double area_h, double alpha_h);

/// Density of the Liouville measure with respect to prod_i dx_i dy_i:
/// 2^N det G, in units of hbar^N. Integrates to N! V_N over ordered
/// configurations. Throws NegativeDensity when det G < -1e-9 of its
/// diagonal product (a metric bug), FermionDegenerate near coincidences.
double liouville_density(const ParticleConfig& config, const FluxSector& flux,
                         const StatisticsKind& kind);

/// Importance-sampled Monte Carlo volume for bosons or fermions: each
/// coordinate is drawn from the round-sphere density, the Liouville density
/// is weighted by the inverse proposal, and the ordered-tuple integral is
/// divided by N!. Fermion samples inside the degeneracy tolerance
/// contribute zero weight. Requires samples >= 10^4.
VolumeEstimate mc_volume(int n, const FluxSector& flux,
                         const StatisticsKind& kind, std::uint64_t samples,
                         std::uint64_t seed, int n_workers);

/// Degeneracy probe of the filled level: for N = 2j + 1 fermions, samples
/// random configurations and returns the maximum |det G| seen (units
/// hbar^N). The constrained manifold collapses to the unique filled-level
/// state, so the result is ~0.
double filled_level_check(const FluxSector& flux, int configs = 100,
                          std::uint64_t seed = 20260810);

}  // namespace exstat
