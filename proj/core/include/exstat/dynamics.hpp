// Copyright 2026 The exstat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "exstat/geometry.hpp"
#include "exstat/types.hpp"

namespace exstat {

/// Two-sided Wirtinger gradient of an observable: holo_i = dA/dz_i,
/// anti_i = dA/dzbar_i. A real observable has anti = conj(holo).
struct Gradient {
  std::vector<Complex> holo;
  std::vector<Complex> anti;

  static Gradient real_observable(std::vector<Complex> holo_part);
  static Gradient coordinate(int i, int n);  // the function A = z_i
};

/// Inverse of the Kahler metric; throws SingularMetric when the condition
/// number exceeds 1e12 or an eigenvalue is non-positive.
Eigen::MatrixXcd invert_metric(const KahlerMetric& metric);

/// Poisson bracket of two observables on the constrained manifold. The
/// kernel between the holomorphic and antiholomorphic slots is -i G^{-1};
/// the conjugate block is included so the bracket of real observables is
/// real and antisymmetric:
///
///   {A,B} = -i sum_ij (G^{-1})_ij (holoA_i antiB_j - holoB_i antiA_j).
///
/// The overall phase is fixed by the single-particle precession closed
/// form: {z, zbar} = -i (1 + zbar z)^2 / (hbar 2j) at N = 1.
Complex poisson_bracket(const Gradient& a, const Gradient& b,
                        const KahlerMetric& metric);

/// Holomorphic/antiholomorphic block alone:
/// -i sum_ij (G^{-1})_ij grad_a_i grad_b_bar_j.
Complex poisson_bracket_half(std::span<const Complex> grad_a_holo,
                             std::span<const Complex> grad_b_anti,
                             const KahlerMetric& metric);

/// Expectation-value potentials for trajectory runs.
class Potential {
 public:
  enum class Kind { Zero, Latitude, PairwiseChordal };

  static Potential zero() { return Potential(Kind::Zero, 0.0, 0.0); }

  /// V = lambda sum_i |z_i|^2 / (1 + |z_i|^2), the height above the south
  /// pole; drives uniform precession.
  static Potential latitude(double lambda) {
    return Potential(Kind::Latitude, lambda, 0.0);
  }

  /// V = coupling sum_{i<k} (d_ik^2)^exponent with d_ik the chordal
  /// distance; exponent >= 1.
  static Potential pairwise_chordal(double coupling, double exponent = 1.0);

  Kind kind() const { return kind_; }
  double value(const ParticleConfig& config) const;
  std::vector<Complex> grad_anti(const ParticleConfig& config) const;

 private:
  Potential(Kind kind, double a, double b) : kind_(kind), a_(a), b_(b) {}

  Kind kind_;
  double a_;  // lambda or coupling
  double b_;  // exponent
};

/// zdot_i = -i sum_j (G^{-1})_ij dV/dzbar_j (hbar = 1 units carried by G).
/// The sign is pinned by the single-particle latitude oracle
/// zdot = -i lambda z / (hbar 2j). The FORM of the equations is the same
/// for every statistics kind; the statistics enters only through the
/// metric G, so boson and fermion vector fields differ at the same
/// configuration. Throws SingularMetric, FermionDegenerate and ChartExit
/// for |z_i| > 1e6.
std::vector<Complex> eom_rhs(const ParticleConfig& config,
                             const FluxSector& flux,
                             const StatisticsKind& kind,
                             const Potential& potential);

struct Trajectory {
  std::vector<double> times;
  std::vector<ParticleConfig> states;
  std::vector<double> energies;
  double invariant_drift = 0.0;  // max_k |V(t_k) - V(0)|
  double drift_budget = 0.0;     // 10 tolerance t_end |V(0)| + 1e-12
};

/// Adaptive Dormand-Prince 5(4) on the 2N real coordinates, recording every
/// accepted step. Fermion runs abort (FermionDegenerate) when the minimum
/// pairwise chordal distance drops to 1e-3; leaving the chart (|z| > 1e6)
/// raises ChartExit; stiffness collapse raises StepFailure.
Trajectory integrate(const ParticleConfig& initial, const FluxSector& flux,
                     const StatisticsKind& kind, const Potential& potential,
                     double t_end, double tolerance);

}  // namespace exstat
