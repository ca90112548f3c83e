// Copyright 2026 The exstat Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "exstat/dynamics.hpp"
#include "exstat/errors.hpp"
#include "test_util.hpp"

using namespace exstat;
using exstat::testing::ConfigSampler;

namespace {
const StatisticsKind kBoson = StatisticsKind::boson();
const StatisticsKind kFermion = StatisticsKind::fermion();
const Complex kI(0.0, 1.0);

Gradient random_real_gradient(ConfigSampler& sampler, int n) {
  std::vector<Complex> holo(static_cast<std::size_t>(n));
  for (auto& g : holo) {
    g = Complex(sampler.uniform() - 0.5, sampler.uniform() - 0.5);
  }
  return Gradient::real_observable(std::move(holo));
}
}  // namespace

TEST_CASE("poisson bracket: single-particle {z, zbar}") {
  const Complex z(0.4, -0.9);
  for (int two_j : {1, 2, 5}) {
    const KahlerMetric km = metric(ParticleConfig({z}), FluxSector(two_j),
                                   kBoson);
    const double w = 1.0 + std::norm(z);
    const Complex expected = -kI * w * w / static_cast<double>(two_j);

    Gradient a = Gradient::coordinate(0, 1);
    Gradient b;  // B = zbar: purely antiholomorphic
    b.holo = {Complex(0.0, 0.0)};
    b.anti = {Complex(1.0, 0.0)};
    CHECK(std::abs(poisson_bracket(a, b, km) - expected) < 1e-12 * w * w);

    const std::vector<Complex> ga{Complex(1.0, 0.0)};
    CHECK(std::abs(poisson_bracket_half(ga, ga, km) - expected) <
          1e-12 * w * w);
  }
}

TEST_CASE("poisson bracket: algebraic properties on real observables") {
  ConfigSampler sampler(83);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(sampler.uniform() * 3.0);
    const FluxSector flux(n + 1 + static_cast<int>(sampler.uniform() * 3.0));
    const ParticleConfig config = sampler.config(n, 0.05);
    const KahlerMetric km = metric(config, flux, kBoson);

    const Gradient a = random_real_gradient(sampler, n);
    const Gradient b = random_real_gradient(sampler, n);

    const Complex ab = poisson_bracket(a, b, km);
    const Complex ba = poisson_bracket(b, a, km);
    CHECK(std::abs(ab + ba) < 1e-10);          // antisymmetry
    CHECK(std::abs(ab.imag()) < 1e-10);        // realness
    CHECK(std::abs(poisson_bracket(a, a, km)) < 1e-10);
  }
}

TEST_CASE("poisson bracket: kernel is anti-Hermitian") {
  ConfigSampler sampler(89);
  const ParticleConfig config = sampler.config(3, 0.1);
  const KahlerMetric km = metric(config, FluxSector(4), kFermion);
  const Eigen::MatrixXcd kernel = -kI * invert_metric(km);
  CHECK((kernel.adjoint() + kernel).norm() < 1e-12 * kernel.norm());
}

TEST_CASE("poisson bracket: singular metric is rejected") {
  // Filled level: N = 2j + 1 fermions live on a zero-dimensional manifold.
  ConfigSampler sampler(97);
  const KahlerMetric km = metric(sampler.config(3, 0.2), FluxSector(2),
                                 kFermion);
  CHECK_THROWS_AS(invert_metric(km), SingularMetric);
}

TEST_CASE("equations of motion: latitude precession closed form") {
  const double lambda = 0.8;
  const Potential potential = Potential::latitude(lambda);
  ConfigSampler sampler(101);
  for (int two_j : {2, 4}) {
    const Complex z = sampler.point();
    const auto zdot =
        eom_rhs(ParticleConfig({z}), FluxSector(two_j), kBoson, potential);
    const Complex expected = -kI * lambda * z / static_cast<double>(two_j);
    CHECK(std::abs(zdot[0] - expected) < 1e-12 * std::abs(expected) + 1e-14);
  }
}

TEST_CASE("equations of motion: flat energy means no motion") {
  ConfigSampler sampler(103);
  const auto zdot = eom_rhs(sampler.config(3, 0.1), FluxSector(5), kBoson,
                            Potential::zero());
  for (const Complex& v : zdot) {
    CHECK(std::abs(v) == 0.0);
  }
}

TEST_CASE("equations of motion: far-separated particles decouple") {
  // Nearly antipodal pairs at moderate |z|; the far chart region would
  // amplify cross terms through the vanishing metric instead.
  const double lambda = 1.3;
  const Potential potential = Potential::latitude(lambda);
  const FluxSector flux(4);
  const Complex z1(0.3, 0.1);
  const Complex z2(-2.8, 2.2);
  const auto zdot =
      eom_rhs(ParticleConfig({z1, z2}), flux, kBoson, potential);
  for (int i = 0; i < 2; ++i) {
    const Complex z = (i == 0) ? z1 : z2;
    const Complex single = -kI * lambda * z / 4.0;
    CHECK(std::abs(zdot[static_cast<std::size_t>(i)] - single) <=
          0.01 * std::abs(single));
  }
}

TEST_CASE("equations of motion: chart boundary") {
  CHECK_THROWS_AS(eom_rhs(ParticleConfig({Complex(2e6, 0.0)}), FluxSector(2),
                          kBoson, Potential::zero()),
                  ChartExit);
}

TEST_CASE("integrate: one latitude precession period returns home") {
  const double lambda = 0.8;
  const int two_j = 4;
  const double period = 2.0 * kPi * two_j / lambda;
  const Complex z0(0.5, 0.2);

  const Trajectory traj =
      integrate(ParticleConfig({z0}), FluxSector(two_j), kBoson,
                Potential::latitude(lambda), period, 1e-10);

  REQUIRE(!traj.states.empty());
  CHECK(traj.times.back() == doctest::Approx(period).epsilon(1e-12));
  CHECK(std::abs(traj.states.back()[0] - z0) < 1e-6);
  CHECK(traj.invariant_drift <= traj.drift_budget);

  // |z| is conserved along the whole trajectory.
  for (const ParticleConfig& state : traj.states) {
    CHECK(std::abs(std::abs(state[0]) - std::abs(z0)) < 1e-8);
  }
}

TEST_CASE("integrate: zero potential keeps the configuration frozen") {
  ConfigSampler sampler(107);
  const ParticleConfig config = sampler.config(2, 0.3);
  const Trajectory traj = integrate(config, FluxSector(3), kFermion,
                                    Potential::zero(), 5.0, 1e-8);
  for (const ParticleConfig& state : traj.states) {
    CHECK(state[0] == config[0]);
    CHECK(state[1] == config[1]);
  }
  CHECK(traj.invariant_drift == 0.0);
}

TEST_CASE("integrate: antipodal fermion pair keeps its symmetry") {
  const Complex z1(0.45, 0.15);
  const ParticleConfig config({z1, -z1});
  const Trajectory traj = integrate(config, FluxSector(3), kFermion,
                                    Potential::latitude(1.1), 8.0, 1e-10);
  CHECK(traj.invariant_drift <= traj.drift_budget);
  for (const ParticleConfig& state : traj.states) {
    CHECK(std::abs(state[1] + state[0]) < 1e-8);
  }
}

TEST_CASE("integrate: pairwise potential conserves the energy") {
  const ParticleConfig config({Complex(0.4, 0.0), Complex(-0.3, 0.5)});
  const Trajectory traj =
      integrate(config, FluxSector(4), kBoson,
                Potential::pairwise_chordal(0.7, 2.0), 6.0, 1e-9);
  CHECK(traj.invariant_drift <= traj.drift_budget);
  CHECK(traj.states.size() > 3);
}

TEST_CASE("integrate: guards") {
  SUBCASE("fermions must stay separated") {
    const ParticleConfig close({Complex(0.1, 0.0), Complex(0.1004, 0.0)});
    CHECK_THROWS_AS(integrate(close, FluxSector(3), kFermion,
                              Potential::latitude(1.0), 1.0, 1e-8),
                    FermionDegenerate);
  }
  SUBCASE("chart exit") {
    CHECK_THROWS_AS(integrate(ParticleConfig({Complex(5e6, 0.0)}),
                              FluxSector(2), kBoson, Potential::latitude(1.0),
                              1.0, 1e-8),
                    ChartExit);
  }
  SUBCASE("parameter validation") {
    const ParticleConfig config({Complex(0.1, 0.0)});
    CHECK_THROWS_AS(integrate(config, FluxSector(2), kBoson,
                              Potential::zero(), -1.0, 1e-8),
                    std::invalid_argument);
    CHECK_THROWS_AS(integrate(config, FluxSector(2), kBoson,
                              Potential::zero(), 1.0, 0.0),
                    std::invalid_argument);
  }
}
