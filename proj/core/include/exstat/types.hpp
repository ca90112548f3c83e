// Copyright 2026 The exstat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <string>
#include <vector>

namespace exstat {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

/// Magnetic flux data of the sphere. `two_j` flux quanta thread the sphere
/// and the lowest level has dimension two_j + 1. hbar is kept as an explicit
/// factor (1 by convention) so every downstream quantity carries its units;
/// h = 2 pi hbar.
struct FluxSector {
  int two_j = 0;
  double hbar = 1.0;

  FluxSector() = default;
  explicit FluxSector(int two_j_quanta, double hbar_value = 1.0);

  double h() const { return 2.0 * kPi * hbar; }
  int level_dimension() const { return two_j + 1; }
};

/// Ordered list of stereographic coordinates, one per particle. The single
/// chart excludes the north pole, so all coordinates must be finite.
struct ParticleConfig {
  std::vector<Complex> coords;

  ParticleConfig() = default;
  explicit ParticleConfig(std::vector<Complex> zs);

  int size() const { return static_cast<int>(coords.size()); }
  const Complex& operator[](int i) const {
    return coords[static_cast<std::size_t>(i)];
  }
};

/// Statistics selector. Anyon(0) behaves as Boson and Anyon(1) as Fermion
/// wherever either is accepted; fractional Anyon and ExclusionG enter only
/// through the classical statistics parameter alpha.
class StatisticsKind {
 public:
  enum class Family { Boson, Fermion, Anyon, ExclusionG };

  static StatisticsKind boson() { return StatisticsKind(Family::Boson, 0.0); }
  static StatisticsKind fermion() {
    return StatisticsKind(Family::Fermion, 1.0);
  }
  static StatisticsKind anyon(double nu);
  static StatisticsKind exclusion_g(double g);

  Family family() const { return family_; }

  /// nu for Anyon, g for ExclusionG, 0 for Boson, 1 for Fermion.
  double statistics_parameter() const { return parameter_; }

  /// Phase-space volume excluded per additional particle:
  /// 0 (Boson), h (Fermion), nu h (Anyon), g h (ExclusionG).
  double alpha(double h) const { return parameter_ * h; }

  /// True when the kind reduces to an exchange-(anti)symmetric state:
  /// Boson, Fermion, Anyon(0), Anyon(1).
  bool is_bosonic() const;
  bool is_fermionic() const;

  std::string label() const;

 private:
  StatisticsKind(Family family, double parameter)
      : family_(family), parameter_(parameter) {}

  Family family_;
  double parameter_;
};

/// Chordal (straight-line) distance between two points of the unit sphere
/// given in stereographic coordinates; ranges over [0, 2].
double chordal_distance(const Complex& a, const Complex& b);

/// Minimum chordal distance over all particle pairs; +infinity for N = 1.
double min_pairwise_chordal(const ParticleConfig& config);

}  // namespace exstat
