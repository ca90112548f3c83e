// Copyright 2026 The exstat Authors
// SPDX-License-Identifier: Apache-2.0

#include "exstat/types.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace exstat {

FluxSector::FluxSector(int two_j_quanta, double hbar_value)
    : two_j(two_j_quanta), hbar(hbar_value) {
  if (two_j < 0) {
    throw std::invalid_argument("FluxSector: two_j must be >= 0");
  }
  if (!(hbar > 0.0) || !std::isfinite(hbar)) {
    throw std::invalid_argument("FluxSector: hbar must be positive");
  }
}

ParticleConfig::ParticleConfig(std::vector<Complex> zs) : coords(std::move(zs)) {
  if (coords.empty()) {
    throw std::invalid_argument("ParticleConfig: need at least one particle");
  }
  for (const Complex& z : coords) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw std::invalid_argument(
          "ParticleConfig: coordinates must be finite (the north pole is "
          "outside the chart)");
    }
  }
}

StatisticsKind StatisticsKind::anyon(double nu) {
  if (!(nu >= 0.0) || !std::isfinite(nu)) {
    throw std::invalid_argument("StatisticsKind: anyon nu must be >= 0");
  }
  return StatisticsKind(Family::Anyon, nu);
}

StatisticsKind StatisticsKind::exclusion_g(double g) {
  if (!(g >= 0.0) || !std::isfinite(g)) {
    throw std::invalid_argument("StatisticsKind: exclusion g must be >= 0");
  }
  return StatisticsKind(Family::ExclusionG, g);
}

bool StatisticsKind::is_bosonic() const {
  return family_ == Family::Boson ||
         (family_ == Family::Anyon && parameter_ == 0.0);
}

bool StatisticsKind::is_fermionic() const {
  return family_ == Family::Fermion ||
         (family_ == Family::Anyon && parameter_ == 1.0);
}

std::string StatisticsKind::label() const {
  switch (family_) {
    case Family::Boson:
      return "boson";
    case Family::Fermion:
      return "fermion";
    case Family::Anyon:
      return "anyon(nu=" + std::to_string(parameter_) + ")";
    case Family::ExclusionG:
      return "exclusion(g=" + std::to_string(parameter_) + ")";
  }
  return "unknown";
}

double chordal_distance(const Complex& a, const Complex& b) {
  const double num = 2.0 * std::abs(a - b);
  const double den = std::sqrt((1.0 + std::norm(a)) * (1.0 + std::norm(b)));
  return num / den;
}

double min_pairwise_chordal(const ParticleConfig& config) {
  const int n = config.size();
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    for (int k = i + 1; k < n; ++k) {
      best = std::min(best, chordal_distance(config[i], config[k]));
    }
  }
  return best;
}

}  // namespace exstat
