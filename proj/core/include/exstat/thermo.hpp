// Copyright 2026 The exstat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "exstat/types.hpp"

namespace exstat {

/// Inputs of the flat-energy N-particle ensemble. Areas and alpha are in
/// units of h, so alpha * rho with rho = N / area is dimensionless; the
/// total energy is N * energy_per_particle.
struct ThermoInput {
  int n = 1;
  double area_h = 1.0;
  double alpha_h = 0.0;
  double beta = 1.0;
  double energy_per_particle = 0.0;

  double rho_h() const { return static_cast<double>(n) / area_h; }

  void validate() const;
};

/// ln Z_N with an explicit saturation flag instead of a float -infinity for
/// the zero-volume (maximum-density) regime.
struct LogPartition {
  bool zero_volume = false;
  double log_value = 0.0;
};

LogPartition log_partition_function(const ThermoInput& input);

/// Z_N = (V_N / h^N) exp(-beta E_N). Throws ZeroVolume when V_N = 0.
double partition_function(const ThermoInput& input);

/// Thermodynamic-limit entropy S = N ln(1 - alpha rho) + N ln(A/h)
/// - N ln N + N, with rho = N/A and the N-1 ~ N convention. Throws
/// DensityAboveMax at alpha rho >= 1.
double entropy_closed(const ThermoInput& input);

/// Exact flat-spectrum entropy S = ln(V_N / h^N) without the Stirling
/// approximation; differs from entropy_closed by ln N! - N ln N + N plus
/// the N-1 vs N convention in the excluded volume. Throws ZeroVolume.
double entropy_exact(const ThermoInput& input);

/// Equation of state P = rho / (beta (1 - alpha rho)); rho in units 1/h,
/// alpha in units h. The pressure is conjugate to the single-particle
/// phase-space area A; identifying A with a physical area is up to the
/// caller. Throws DensityAboveMax exactly at alpha rho >= 1 (infinite
/// pressure: the incompressible state).
double equation_of_state(double rho_h, double alpha_h, double beta);

/// Maximum density 1/alpha (units 1/h). For fermions (alpha = h) with
/// A = h 2j this is N/A at N = 2j; the finite-size filled level holds
/// 2j + 1. Throws UnboundedDensity at alpha = 0.
double max_density(double alpha_h);

}  // namespace exstat
