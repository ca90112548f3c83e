// Copyright 2026 The exstat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <vector>

#include "exstat/types.hpp"

namespace exstat {

/// Overlap (Gram) matrix of N spin coherent states on the flux-2j sphere,
///
///   M_ij = (1 + conj(z_i) z_j)^(2j),
///
/// stored in log form: log_mag = ln|M_ij| and phase = arg(M_ij) in
/// (-pi, pi]. 2j is an integer, so every entry is single-valued; the phase
/// is accumulated as 2j times the principal argument of the base, never by
/// taking a complex log of the final power. Log storage makes overflow
/// impossible for any finite configuration.
struct GramMatrix {
  Eigen::MatrixXd log_mag;
  Eigen::MatrixXd phase;

  int size() const { return static_cast<int>(log_mag.rows()); }

  /// ln M_ii; diagonal entries are real with M_ii >= 1.
  double log_diag(int i) const { return log_mag(i, i); }

  /// Entry in ordinary arithmetic. May overflow for extreme coordinates at
  /// large 2j; numeric kernels should use normalized() instead.
  Complex entry(int i, int j) const;

  /// Correlation form D^{-1/2} M D^{-1/2} with D = diag(M): unit diagonal
  /// and every magnitude <= 1. Permanent and determinant of M recover the
  /// factor exp(sum_i log_diag(i)).
  Eigen::MatrixXcd normalized() const;
};

enum class MetricMethod { Analytic, FiniteDifference };

/// Kahler metric G_ij = d_zbar_i d_z_j K in units of hbar. Hermitian and
/// positive semi-definite on valid configurations.
struct KahlerMetric {
  Eigen::MatrixXcd g;
  MetricMethod method = MetricMethod::Analytic;

  int size() const { return static_cast<int>(g.rows()); }
};

GramMatrix gram_matrix(const ParticleConfig& config, const FluxSector& flux);

/// ln |N(z, zbar)|^{-2}: ln perm(M) for bosons, ln det(M) for fermions.
/// Evaluated on the row/column-rescaled matrix so intermediates stay
/// bounded. The boson value is never below the fermion value for the same
/// configuration (perm >= det on this Gram family; checked numerically in
/// the test suite, not proved here). Throws FermionDegenerate when
/// det(M) <= 1e-12 * prod_i M_ii (coinciding fermions or N > 2j + 1) and
/// PermanentOverCap for bosons with N > kPermanentCap.
double log_norm(const GramMatrix& gram, const StatisticsKind& kind);

/// Kahler potential K = hbar ln|N|^{-2}. Defined up to an additive
/// constant; this implementation fixes the constant by the permutation sum
/// over coherent-state overlaps, which adds ln N! at coinciding bosons
/// relative to the single-orbit closed form.
double kahler_potential(const ParticleConfig& config, const FluxSector& flux,
                        const StatisticsKind& kind);

/// Berry connection components A_{z_i} = (i/2) hbar d_{z_i} ln|N|^{-2},
/// evaluated analytically (Jacobi identity for determinants, minor
/// expansion for permanents).
std::vector<Complex> berry_connection(const ParticleConfig& config,
                                      const FluxSector& flux,
                                      const StatisticsKind& kind);

/// Kahler metric of the configuration manifold. The analytic path uses
/// exact second derivatives of ln det / ln perm; the finite-difference path
/// uses 4-point central differences of the Kahler potential with step
/// fd_step * max(1, |z_i|) per coordinate and throws StepTooSmall when the
/// difference stencil is dominated by roundoff at the 1e-6 relative level.
/// Both paths return the result symmetrized to exact Hermiticity.
KahlerMetric metric(const ParticleConfig& config, const FluxSector& flux,
                    const StatisticsKind& kind,
                    MetricMethod method = MetricMethod::Analytic,
                    double fd_step = 1e-4);

/// Liouville area of the single-particle manifold: A = h * 2j. Equals the
/// integral of the symplectic density 2 G over the plane for N = 1.
double single_particle_area(const FluxSector& flux);

}  // namespace exstat
