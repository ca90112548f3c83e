// Copyright 2026 The exstat Authors
// SPDX-License-Identifier: Apache-2.0

#include "exstat/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "exstat/errors.hpp"

namespace exstat {

namespace {

constexpr double kMaxCondition = 1e12;
constexpr double kChartLimit = 1e6;
constexpr double kFermionMinChordal = 1e-3;

void check_chart(const ParticleConfig& config, const char* op) {
  for (const Complex& z : config.coords) {
    if (std::abs(z) > kChartLimit) {
      throw ChartExit(std::string(op) +
                      ": |z| > 1e6 leaves the stereographic chart");
    }
  }
}

void check_fermion_separation(const ParticleConfig& config,
                              const StatisticsKind& kind, const char* op) {
  if (kind.is_fermionic() && config.size() > 1 &&
      min_pairwise_chordal(config) <= kFermionMinChordal) {
    throw FermionDegenerate(
        std::string(op) +
        ": fermion pair closer than chordal distance 1e-3; the metric "
        "degenerates at coincidence");
  }
}

double squared_chordal(const Complex& a, const Complex& b) {
  return 4.0 * std::norm(a - b) / ((1.0 + std::norm(a)) * (1.0 + std::norm(b)));
}

}  // namespace

Gradient Gradient::real_observable(std::vector<Complex> holo_part) {
  Gradient g;
  g.anti.resize(holo_part.size());
  for (std::size_t i = 0; i < holo_part.size(); ++i) {
    g.anti[i] = std::conj(holo_part[i]);
  }
  g.holo = std::move(holo_part);
  return g;
}

Gradient Gradient::coordinate(int i, int n) {
  Gradient g;
  g.holo.assign(static_cast<std::size_t>(n), Complex(0.0, 0.0));
  g.anti.assign(static_cast<std::size_t>(n), Complex(0.0, 0.0));
  g.holo[static_cast<std::size_t>(i)] = 1.0;
  return g;
}

Eigen::MatrixXcd invert_metric(const KahlerMetric& metric) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(metric.g);
  if (es.info() != Eigen::Success) {
    throw SingularMetric("invert_metric: eigendecomposition failed");
  }
  const Eigen::VectorXd ev = es.eigenvalues();
  const double lambda_min = ev.minCoeff();
  const double lambda_max = ev.maxCoeff();
  if (!(lambda_min > 0.0) || lambda_max / lambda_min > kMaxCondition) {
    throw SingularMetric(
        "invert_metric: metric condition number beyond 1e12 (degenerate "
        "direction)");
  }
  return es.eigenvectors() * ev.cwiseInverse().asDiagonal() *
         es.eigenvectors().adjoint();
}

Complex poisson_bracket(const Gradient& a, const Gradient& b,
                        const KahlerMetric& metric) {
  const std::size_t n = static_cast<std::size_t>(metric.size());
  if (a.holo.size() != n || a.anti.size() != n || b.holo.size() != n ||
      b.anti.size() != n) {
    throw std::invalid_argument("poisson_bracket: gradient size mismatch");
  }
  const Eigen::MatrixXcd inv = invert_metric(metric);
  Complex forward(0.0, 0.0), backward(0.0, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Complex kernel = inv(static_cast<int>(i), static_cast<int>(j));
      forward += kernel * a.holo[i] * b.anti[j];
      backward += kernel * b.holo[i] * a.anti[j];
    }
  }
  return Complex(0.0, -1.0) * (forward - backward);
}

Complex poisson_bracket_half(std::span<const Complex> grad_a_holo,
                             std::span<const Complex> grad_b_anti,
                             const KahlerMetric& metric) {
  const std::size_t n = static_cast<std::size_t>(metric.size());
  if (grad_a_holo.size() != n || grad_b_anti.size() != n) {
    throw std::invalid_argument("poisson_bracket_half: gradient size mismatch");
  }
  const Eigen::MatrixXcd inv = invert_metric(metric);
  Complex acc(0.0, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      acc += inv(static_cast<int>(i), static_cast<int>(j)) * grad_a_holo[i] *
             grad_b_anti[j];
    }
  }
  return Complex(0.0, -1.0) * acc;
}

Potential Potential::pairwise_chordal(double coupling, double exponent) {
  if (!(exponent >= 1.0) || !std::isfinite(exponent)) {
    throw std::invalid_argument("Potential: pairwise exponent must be >= 1");
  }
  if (!std::isfinite(coupling)) {
    throw std::invalid_argument("Potential: coupling must be finite");
  }
  return Potential(Kind::PairwiseChordal, coupling, exponent);
}

double Potential::value(const ParticleConfig& config) const {
  const int n = config.size();
  switch (kind_) {
    case Kind::Zero:
      return 0.0;
    case Kind::Latitude: {
      double v = 0.0;
      for (const Complex& z : config.coords) {
        const double r2 = std::norm(z);
        v += r2 / (1.0 + r2);
      }
      return a_ * v;
    }
    case Kind::PairwiseChordal: {
      double v = 0.0;
      for (int i = 0; i < n; ++i) {
        for (int k = i + 1; k < n; ++k) {
          v += std::pow(squared_chordal(config[i], config[k]), b_);
        }
      }
      return a_ * v;
    }
  }
  return 0.0;
}

std::vector<Complex> Potential::grad_anti(const ParticleConfig& config) const {
  const int n = config.size();
  std::vector<Complex> grad(static_cast<std::size_t>(n), Complex(0.0, 0.0));
  switch (kind_) {
    case Kind::Zero:
      break;
    case Kind::Latitude:
      for (int i = 0; i < n; ++i) {
        const double w = 1.0 + std::norm(config[i]);
        grad[static_cast<std::size_t>(i)] = a_ * config[i] / (w * w);
      }
      break;
    case Kind::PairwiseChordal:
      for (int i = 0; i < n; ++i) {
        Complex acc(0.0, 0.0);
        const double wi = 1.0 + std::norm(config[i]);
        for (int k = 0; k < n; ++k) {
          if (k == i) continue;
          const double wk = 1.0 + std::norm(config[k]);
          const double d2 = squared_chordal(config[i], config[k]);
          // d/dzbar_i d2 = 4 (z_i - z_k) / (w_i w_k) - d2 z_i / w_i
          const Complex dd2 =
              4.0 * (config[i] - config[k]) / (wi * wk) - d2 * config[i] / wi;
          const double outer = (b_ == 1.0) ? 1.0 : b_ * std::pow(d2, b_ - 1.0);
          acc += outer * dd2;
        }
        grad[static_cast<std::size_t>(i)] = a_ * acc;
      }
      break;
  }
  return grad;
}

std::vector<Complex> eom_rhs(const ParticleConfig& config,
                             const FluxSector& flux,
                             const StatisticsKind& kind,
                             const Potential& potential) {
  check_chart(config, "eom_rhs");
  const KahlerMetric km = metric(config, flux, kind, MetricMethod::Analytic);
  const Eigen::MatrixXcd inv = invert_metric(km);
  const std::vector<Complex> grad = potential.grad_anti(config);

  const int n = config.size();
  std::vector<Complex> zdot(static_cast<std::size_t>(n), Complex(0.0, 0.0));
  for (int i = 0; i < n; ++i) {
    Complex acc(0.0, 0.0);
    for (int j = 0; j < n; ++j) {
      acc += inv(i, j) * grad[static_cast<std::size_t>(j)];
    }
    zdot[static_cast<std::size_t>(i)] = Complex(0.0, -1.0) * acc;
  }
  return zdot;
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176,
     -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
constexpr double kB5[7] = {35.0 / 384,      0.0,          500.0 / 1113,
                           125.0 / 192,     -2187.0 / 6784, 11.0 / 84,
                           0.0};
constexpr double kB4[7] = {5179.0 / 57600,  0.0,           7571.0 / 16695,
                           393.0 / 640,     -92097.0 / 339200,
                           187.0 / 2100,    1.0 / 40};

using StateVec = Eigen::VectorXd;

ParticleConfig to_config(const StateVec& y) {
  const int n = static_cast<int>(y.size()) / 2;
  std::vector<Complex> zs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    zs[static_cast<std::size_t>(i)] = Complex(y[2 * i], y[2 * i + 1]);
  }
  return ParticleConfig(std::move(zs));
}

StateVec to_state(const ParticleConfig& config) {
  const int n = config.size();
  StateVec y(2 * n);
  for (int i = 0; i < n; ++i) {
    y[2 * i] = config[i].real();
    y[2 * i + 1] = config[i].imag();
  }
  return y;
}

}  // namespace

Trajectory integrate(const ParticleConfig& initial, const FluxSector& flux,
                     const StatisticsKind& kind, const Potential& potential,
                     double t_end, double tolerance) {
  if (!(t_end > 0.0) || !std::isfinite(t_end)) {
    throw std::invalid_argument("integrate: t_end must be positive");
  }
  if (!(tolerance > 0.0) || !(tolerance < 1.0)) {
    throw std::invalid_argument("integrate: tolerance must be in (0, 1)");
  }
  check_chart(initial, "integrate");
  check_fermion_separation(initial, kind, "integrate");

  auto rhs = [&](const StateVec& y) {
    const ParticleConfig config = to_config(y);
    check_chart(config, "integrate");
    check_fermion_separation(config, kind, "integrate");
    const std::vector<Complex> zdot = eom_rhs(config, flux, kind, potential);
    StateVec dy(y.size());
    for (int i = 0; i < config.size(); ++i) {
      dy[2 * i] = zdot[static_cast<std::size_t>(i)].real();
      dy[2 * i + 1] = zdot[static_cast<std::size_t>(i)].imag();
    }
    return dy;
  };

  const int m = 2 * initial.size();
  StateVec y = to_state(initial);
  double t = 0.0;

  Trajectory traj;
  const double v0 = potential.value(initial);
  traj.drift_budget = 10.0 * tolerance * t_end * std::abs(v0) + 1e-12;
  traj.times.push_back(0.0);
  traj.states.push_back(initial);
  traj.energies.push_back(v0);

  StateVec f0 = rhs(y);
  double dt = 0.01 * (y.norm() + tolerance) / (f0.norm() + 1e-30);
  dt = std::clamp(dt, 1e-6 * t_end, t_end);
  const double dt_min = 1e-14 * std::max(t_end, 1.0);

  std::array<StateVec, 7> k;
  long steps = 0;
  constexpr long kMaxSteps = 2'000'000;

  while (t < t_end) {
    if (++steps > kMaxSteps) {
      throw StepFailure("integrate: step budget exhausted");
    }
    dt = std::min(dt, t_end - t);
    if (dt < dt_min) {
      throw StepFailure("integrate: step size collapsed (stiffness near a "
                        "metric degeneracy)");
    }

    k[0] = rhs(y);
    for (int s = 1; s < 7; ++s) {
      StateVec ys = y;
      for (int q = 0; q < s; ++q) {
        if (kA[s][q] != 0.0) {
          ys += dt * kA[s][q] * k[q];
        }
      }
      k[s] = rhs(ys);
    }

    StateVec y5 = y, y4 = y;
    for (int s = 0; s < 7; ++s) {
      if (kB5[s] != 0.0) y5 += dt * kB5[s] * k[s];
      if (kB4[s] != 0.0) y4 += dt * kB4[s] * k[s];
    }

    double err_sq = 0.0;
    for (int i = 0; i < m; ++i) {
      const double sc =
          tolerance + tolerance * std::max(std::abs(y[i]), std::abs(y5[i]));
      const double e = (y5[i] - y4[i]) / sc;
      err_sq += e * e;
    }
    const double err_norm = std::sqrt(err_sq / m);

    if (err_norm <= 1.0) {
      t += dt;
      y = y5;
      const ParticleConfig config = to_config(y);
      traj.times.push_back(t);
      traj.states.push_back(config);
      traj.energies.push_back(potential.value(config));
    }
    const double factor =
        (err_norm > 0.0) ? 0.9 * std::pow(err_norm, -0.2) : 5.0;
    dt *= std::clamp(factor, 0.2, 5.0);
  }

  for (const double e : traj.energies) {
    traj.invariant_drift =
        std::max(traj.invariant_drift, std::abs(e - traj.energies.front()));
  }
  return traj;
}

}  // namespace exstat
