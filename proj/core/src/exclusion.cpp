// Copyright 2026 The exstat Authors
// SPDX-License-Identifier: Apache-2.0

#include "exstat/exclusion.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "exstat/errors.hpp"
#include "exstat/thermo.hpp"

namespace exstat {

namespace {

constexpr double kDomainSlack = 1e-12;

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

/// Per-level entropy density s(n) for exclusion parameter g.
double level_entropy(double n, double g, const char* op) {
  if (!(n >= 0.0) || !std::isfinite(n)) {
    throw DomainViolation(std::string(op) + ": occupation must be >= 0");
  }
  const double blocked = 1.0 - g * n;
  if (blocked < -kDomainSlack) {
    throw DomainViolation(std::string(op) + ": g n = " +
                          std::to_string(g * n) + " exceeds 1");
  }
  const double enhanced = 1.0 + (1.0 - g) * n;
  if (enhanced < -kDomainSlack) {
    throw DomainViolation(std::string(op) + ": 1 + (1-g) n = " +
                          std::to_string(enhanced) + " is negative");
  }
  return xlogx(std::max(enhanced, 0.0)) - xlogx(std::max(blocked, 0.0)) -
         xlogx(n);
}

/// d s / d n, defined for 0 < n < 1/g (0 < n for g = 0). Strictly
/// decreasing: s is concave.
double level_entropy_slope(double n, double g) {
  double slope = -std::log(n);
  if (g != 1.0) {
    slope += (1.0 - g) * std::log1p((1.0 - g) * n);
  }
  if (g != 0.0) {
    slope += g * std::log1p(-g * n);
  }
  return slope;
}

}  // namespace

double entropy_exclusion(const LevelSpec& spec) {
  if (!(spec.g >= 0.0) || !std::isfinite(spec.g)) {
    throw std::invalid_argument("entropy_exclusion: g must be >= 0");
  }
  if (spec.space_dim_d < 1) {
    throw std::invalid_argument("entropy_exclusion: space_dim_d must be >= 1");
  }
  double s = 0.0;
  for (const QuantumLevel& level : spec.levels) {
    if (level.degeneracy < 1) {
      throw std::invalid_argument(
          "entropy_exclusion: level degeneracy must be positive");
    }
    s += static_cast<double>(level.degeneracy) *
         level_entropy(level.occupation, spec.g, "entropy_exclusion");
  }
  return s;
}

double entropy_classical_limit(const ClassicalLevelSpec& spec) {
  if (!(spec.alpha >= 0.0) || !std::isfinite(spec.alpha)) {
    throw std::invalid_argument("entropy_classical_limit: alpha must be >= 0");
  }
  if (!(spec.h_value > 0.0) || !std::isfinite(spec.h_value)) {
    throw std::invalid_argument("entropy_classical_limit: h must be positive");
  }
  if (spec.space_dim_d < 1) {
    throw std::invalid_argument(
        "entropy_classical_limit: space_dim_d must be >= 1");
  }
  const double cell = std::pow(spec.h_value, spec.space_dim_d);
  double s = 0.0;
  for (const ClassicalLevel& level : spec.levels) {
    if (!(level.degeneracy > 0.0)) {
      throw std::invalid_argument(
          "entropy_classical_limit: level degeneracy must be positive");
    }
    const double rho = level.density;
    if (!(rho >= 0.0) || !std::isfinite(rho)) {
      throw DomainViolation("entropy_classical_limit: density must be >= 0");
    }
    if (rho == 0.0) {
      continue;
    }
    const double alpha_rho = spec.alpha * rho;
    if (alpha_rho >= 1.0) {
      throw DomainViolation(
          "entropy_classical_limit: alpha rho = " + std::to_string(alpha_rho) +
          " reaches the maximum density");
    }
    const double cell_occupation = rho * cell;
    if (cell_occupation >= 1.0) {
      throw DomainViolation(
          "entropy_classical_limit: rho h^D = " +
          std::to_string(cell_occupation) + " is not a classical regime");
    }
    s += level.degeneracy * cell *
         (rho * std::log1p(-alpha_rho) - rho * std::log(cell_occupation) +
          rho);
  }
  return s;
}

std::vector<ConvergencePoint> limit_convergence_study(
    double rho, double alpha, std::span<const double> h_sequence,
    int space_dim_d) {
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw std::invalid_argument("limit_convergence_study: rho must be > 0");
  }
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("limit_convergence_study: alpha must be >= 0");
  }
  if (space_dim_d < 1) {
    throw std::invalid_argument(
        "limit_convergence_study: space_dim_d must be >= 1");
  }
  if (h_sequence.empty()) {
    throw std::invalid_argument("limit_convergence_study: empty h sequence");
  }
  for (std::size_t i = 0; i < h_sequence.size(); ++i) {
    if (!(h_sequence[i] > 0.0)) {
      throw std::invalid_argument(
          "limit_convergence_study: h values must be positive");
    }
    if (i > 0 && !(h_sequence[i] < h_sequence[i - 1])) {
      throw std::invalid_argument(
          "limit_convergence_study: h sequence must be strictly decreasing");
    }
  }

  std::vector<ConvergencePoint> points;
  points.reserve(h_sequence.size());
  for (const double h : h_sequence) {
    const double cell = std::pow(h, space_dim_d);
    const double n = rho * cell;
    const double g = (cell > 0.0) ? alpha / cell : 0.0;
    if (g * n >= 1.0) {
      throw DomainViolation(
          "limit_convergence_study: alpha rho >= 1 is outside the entropy "
          "domain");
    }

    LevelSpec quantum;
    quantum.levels = {QuantumLevel{1, 0.0, n}};
    quantum.g = g;
    quantum.space_dim_d = space_dim_d;

    ClassicalLevelSpec classical;
    classical.levels = {ClassicalLevel{1.0, 0.0, rho}};
    classical.alpha = alpha;
    classical.h_value = h;
    classical.space_dim_d = space_dim_d;

    ConvergencePoint p;
    p.h = h;
    p.quantum_entropy = entropy_exclusion(quantum);
    p.classical_entropy = entropy_classical_limit(classical);
    p.relative_gap = std::abs(p.quantum_entropy - p.classical_entropy) /
                     std::abs(p.classical_entropy);
    points.push_back(p);
  }
  return points;
}

std::vector<double> equilibrium_occupation(
    double g, double beta, double mu,
    std::span<const std::pair<double, double>> levels) {
  if (!(g >= 0.0) || !std::isfinite(g)) {
    throw std::invalid_argument("equilibrium_occupation: g must be >= 0");
  }
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw std::invalid_argument("equilibrium_occupation: beta must be > 0");
  }

  std::vector<double> occupations;
  occupations.reserve(levels.size());
  for (const auto& [degeneracy, energy] : levels) {
    (void)degeneracy;  // the per-level maximizer is degeneracy-independent
    const double x = beta * (energy - mu);

    // Stationarity of s(n) - x n: solve slope(n) = x. The slope decreases
    // from +infinity at n -> 0 to -infinity at the upper edge, so bisection
    // on t = ln n is unconditionally convergent once bracketed.
    auto f = [&](double t) { return level_entropy_slope(std::exp(t), g) - x; };

    double t_lo = std::log(1e-300);
    if (!(f(t_lo) > 0.0)) {
      throw NoRoot("equilibrium_occupation: beta (eps - mu) = " +
                   std::to_string(x) + " is out of numeric range");
    }

    double t_hi;
    if (g > 0.0) {
      t_hi = std::log((1.0 / g) * (1.0 - 1e-15));
      if (!(f(t_hi) < 0.0)) {
        throw NoRoot("equilibrium_occupation: beta (eps - mu) = " +
                     std::to_string(x) +
                     " is below the reachable slope range");
      }
    } else {
      t_hi = 0.0;
      while (f(t_hi) > 0.0) {
        t_hi += 5.0;
        if (t_hi > 700.0) {
          throw NoRoot(
              "equilibrium_occupation: no Bose root for beta (eps - mu) = " +
              std::to_string(x) + " (needs a positive value)");
        }
      }
    }

    for (int iter = 0; iter < 200 && (t_hi - t_lo) > 1e-14; ++iter) {
      const double t_mid = 0.5 * (t_lo + t_hi);
      if (f(t_mid) > 0.0) {
        t_lo = t_mid;
      } else {
        t_hi = t_mid;
      }
    }
    occupations.push_back(std::exp(0.5 * (t_lo + t_hi)));
  }
  return occupations;
}

double eos_exclusion_flat(double rho_h, double alpha_h, double beta) {
  if (!(rho_h > 0.0) || !std::isfinite(rho_h)) {
    throw std::invalid_argument("eos_exclusion_flat: rho must be > 0");
  }
  if (!(alpha_h >= 0.0) || !std::isfinite(alpha_h)) {
    throw std::invalid_argument("eos_exclusion_flat: alpha must be >= 0");
  }
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw std::invalid_argument("eos_exclusion_flat: beta must be > 0");
  }
  const double alpha_rho = alpha_h * rho_h;
  if (alpha_rho >= 1.0) {
    throw DensityAboveMax("eos_exclusion_flat: alpha rho >= 1");
  }

  // Single fully degenerate level of D = A/h cells holding N particles;
  // P = (1/beta) dS/dA at fixed N, by central difference. The pressure is
  // independent of the cell size, which is chosen to keep the cell
  // occupation rho h at 1/2, inside the classical-regime domain.
  const double n_particles = 1.0;
  const double area = n_particles / rho_h;
  const double delta = 1e-4 * (1.0 - alpha_rho) * area;
  const double h_cell = 0.5 * (area - delta) / n_particles;
  auto entropy_at = [&](double a) {
    ClassicalLevelSpec spec;
    spec.levels = {ClassicalLevel{a / h_cell, 0.0, n_particles / a}};
    spec.alpha = alpha_h;
    spec.h_value = h_cell;
    spec.space_dim_d = 1;
    return entropy_classical_limit(spec);
  };
  const double pressure =
      (entropy_at(area + delta) - entropy_at(area - delta)) /
      (2.0 * delta * beta);

  const double closed = equation_of_state(rho_h, alpha_h, beta);
  if (std::abs(pressure - closed) > 1e-8 * std::abs(closed)) {
    throw Error("EosCrossCheckFailed",
                "eos_exclusion_flat: derivative route deviates from the "
                "closed form beyond 1e-8");
  }
  return pressure;
}

}  // namespace exstat
