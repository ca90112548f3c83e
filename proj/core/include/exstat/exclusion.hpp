// Copyright 2026 The exstat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <utility>
#include <vector>

#include "exstat/types.hpp"

namespace exstat {

/// One quantum level of an exclusion-statistics spectrum.
struct QuantumLevel {
  int degeneracy = 1;
  double energy = 0.0;
  double occupation = 0.0;  // average occupation n_k >= 0
};

/// Level spectrum with exclusion parameter g and phase-space dimension
/// parameter D (2D real dimensions per particle; 1 for a two-dimensional
/// phase space). Valid occupations satisfy g n_k <= 1 and
/// 1 + (1 - g) n_k >= 0.
struct LevelSpec {
  std::vector<QuantumLevel> levels;
  double g = 0.0;
  int space_dim_d = 1;
};

/// One coarse-grained level of the classical-limit spectrum; degeneracy is
/// real-valued here since D_k h^D plays the role of a phase-space measure.
struct ClassicalLevel {
  double degeneracy = 1.0;
  double energy = 0.0;
  double density = 0.0;  // phase-space density rho_k >= 0
};

struct ClassicalLevelSpec {
  std::vector<ClassicalLevel> levels;
  double alpha = 0.0;    // classical statistics parameter, units h^D
  double h_value = 1.0;  // Planck cell for limit studies
  int space_dim_d = 1;
};

/// Exclusion-statistics entropy over the spectrum:
///
///   S = sum_k D_k { [1 + (1-g) n_k] ln[1 + (1-g) n_k]
///                   - (1 - g n_k) ln(1 - g n_k) - n_k ln n_k }.
///
/// x ln x is taken as 0 at x = 0. Throws DomainViolation outside the
/// counting domain (g n_k > 1 or 1 + (1-g) n_k < 0).
double entropy_exclusion(const LevelSpec& spec);

/// Classical double-scaling limit of the exclusion entropy
/// (h -> 0, g -> infinity, g h^D -> alpha):
///
///   S = sum_k D_k h^D [ rho_k ln(1 - alpha rho_k) - rho_k ln(rho_k h^D)
///                       + rho_k ].
///
/// Requires alpha rho_k < 1 and rho_k h^D < 1 per level. The h^D cell
/// power inside the middle logarithm is the dimensionally consistent
/// extension for D > 1; only the two-dimensional case D = 1 has an
/// independent cross-check against the flat-system entropy.
double entropy_classical_limit(const ClassicalLevelSpec& spec);

struct ConvergencePoint {
  double h = 0.0;
  double quantum_entropy = 0.0;    // scaled exclusion entropy at this h
  double classical_entropy = 0.0;  // h-dependent classical expression
  double relative_gap = 0.0;
};

/// Evaluates the double-scaling limit along a decreasing h sequence at
/// fixed (rho, alpha): for each h the exclusion entropy with n = rho h^D,
/// g = alpha / h^D is compared against the classical expression. The gaps
/// decrease monotonically to zero with empirical order >= 1 in h.
std::vector<ConvergencePoint> limit_convergence_study(
    double rho, double alpha, std::span<const double> h_sequence,
    int space_dim_d = 1);

/// Equilibrium occupation per level by maximizing the per-level entropy
/// functional s(n) - beta (eps - mu) n with bracketed root finding on the
/// stationarity condition, to 1e-12 relative. Levels are (degeneracy,
/// energy) pairs; the occupation does not depend on the degeneracy.
/// Throws NoRoot when beta (eps - mu) is outside the numeric range.
std::vector<double> equilibrium_occupation(
    double g, double beta, double mu,
    std::span<const std::pair<double, double>> levels);

/// Pressure through the exclusion route: the classical-limit entropy of a
/// single flat level, differentiated in the area by central differences.
/// Cross-checked internally against the closed-form equation of state at
/// 1e-8 relative. Throws DensityAboveMax at alpha rho >= 1.
double eos_exclusion_flat(double rho_h, double alpha_h, double beta);

}  // namespace exstat
