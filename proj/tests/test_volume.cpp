// Copyright 2026 The exstat Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "exstat/errors.hpp"
#include "exstat/rng.hpp"
#include "exstat/volume.hpp"
#include "test_util.hpp"

using namespace exstat;
using exstat::testing::ConfigSampler;
using exstat::testing::mobius_rotate;

namespace {
const StatisticsKind kBoson = StatisticsKind::boson();
const StatisticsKind kFermion = StatisticsKind::fermion();

double single_density(const Complex& z, int two_j) {
  const double w = 1.0 + std::norm(z);
  return 2.0 * two_j / (w * w);
}
}  // namespace

TEST_CASE("closed-form volumes: direct substitutions") {
  CHECK(closed_form_volume(2, FluxSector(2), kBoson) == doctest::Approx(2.0));
  CHECK(closed_form_volume(2, FluxSector(2), kFermion) ==
        doctest::Approx(0.5));
  CHECK(closed_form_volume(3, FluxSector(2), kFermion) == 0.0);  // filled
  CHECK(closed_form_volume(2, FluxSector(2), StatisticsKind::anyon(1.0 / 3)) ==
        doctest::Approx(25.0 / 18.0));
}

TEST_CASE("closed-form volumes: clamping and saturation") {
  CHECK(closed_form_volume_with_area(5, 2.0, 1.0) == 0.0);
  CHECK(closed_form_volume_with_area(3, 2.0, 1.0) == 0.0);  // A = alpha(N-1)
  CHECK(closed_form_volume_with_area(1, 2.0, 50.0) ==
        doctest::Approx(2.0));  // N = 1 never excluded
  CHECK_THROWS_AS(closed_form_volume_with_area(0, 2.0, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(closed_form_volume_with_area(2, -1.0, 0.0),
                  std::invalid_argument);
}

TEST_CASE("closed-form volumes: monotone in the statistics parameter") {
  double previous = closed_form_volume(3, FluxSector(4), kBoson);
  for (double nu : {0.1, 0.3, 0.5, 0.8, 1.0, 1.5}) {
    const double v =
        closed_form_volume(3, FluxSector(4), StatisticsKind::anyon(nu));
    CHECK(v < previous);
    previous = v;
  }

  // Endpoints match boson/fermion; exclusion g mirrors anyon nu.
  CHECK(closed_form_volume(3, FluxSector(4), StatisticsKind::anyon(0.0)) ==
        closed_form_volume(3, FluxSector(4), kBoson));
  CHECK(closed_form_volume(3, FluxSector(4), StatisticsKind::anyon(1.0)) ==
        closed_form_volume(3, FluxSector(4), kFermion));
  CHECK(closed_form_volume(3, FluxSector(4), StatisticsKind::exclusion_g(0.5)) ==
        closed_form_volume(3, FluxSector(4), StatisticsKind::anyon(0.5)));
}

TEST_CASE("liouville density: single-particle closed form") {
  // density (1+r^2)^2 = 2 * 2 * 2j is constant, so the plane integral is
  // 2 2j hbar pi = h 2j: the single-particle area.
  ConfigSampler sampler(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Complex z = sampler.point();
    const double w = 1.0 + std::norm(z);
    const double d = liouville_density(ParticleConfig({z}), FluxSector(2),
                                       kBoson);
    CHECK(d * w * w == doctest::Approx(4.0).epsilon(1e-11));
  }
}

TEST_CASE("liouville density: fermions vanish continuously at coincidence") {
  // The density decays like the squared separation down to the conditioning
  // floor of the inverse Gram matrix (~1e-4 here); exact coincidence throws.
  const FluxSector flux(3);
  const Complex base(0.35, -0.2);
  const double start = liouville_density(
      ParticleConfig({base, base + Complex(1.0, 0.0)}), flux, kFermion);
  double previous = start;
  for (double d : {0.3, 0.1, 0.03, 0.01}) {
    const double density = liouville_density(
        ParticleConfig({base, base + Complex(d, 0.0)}), flux, kFermion);
    CHECK(density < previous);
    previous = density;
  }
  CHECK(previous < 2e-3 * start);
  CHECK_THROWS_AS(
      liouville_density(ParticleConfig({base, base}), flux, kFermion),
      FermionDegenerate);
}

TEST_CASE("liouville density: far-separated bosons factorize") {
  // The cross-particle metric correction decays like 4 / |dz|^2.
  const FluxSector flux(2);
  const Complex z1(0.0, 0.0);
  const Complex z2(30.0, 4.0);
  const double joint = liouville_density(ParticleConfig({z1, z2}), flux,
                                         kBoson);
  const double product = single_density(z1, 2) * single_density(z2, 2);
  CHECK(std::abs(joint - product) <= 0.01 * product);
}

TEST_CASE("mc volume: single particle area is exact") {
  const VolumeEstimate est = mc_volume(1, FluxSector(4), kBoson, 10000, 7, 1);
  CHECK(std::abs(est.mean - 4.0) <= 3.0 * est.std_error + 1e-12 * 4.0);
  CHECK(std::abs(est.mean - 4.0) <= 1e-3 * 4.0);  // 0.1% oracle
  CHECK(est.std_error >= 0.0);
}

TEST_CASE("mc volume: two fermions reproduce the excluded closed form") {
  const VolumeEstimate est =
      mc_volume(2, FluxSector(2), kFermion, 40000, 42, 2);
  CHECK(std::abs(est.mean - 0.5) <= 3.0 * est.std_error);
  CHECK(est.std_error < 0.02);
}

TEST_CASE("mc volume: two bosons reproduce the closed form") {
  // Boson weights have a long bunching tail, so the sample size here is
  // larger than the fermion case for a stable error estimate.
  const VolumeEstimate est =
      mc_volume(2, FluxSector(2), kBoson, 200000, 42, 2);
  CHECK(std::abs(est.mean - 2.0) <= 3.0 * est.std_error);
}

TEST_CASE("mc volume: bit-identical across worker counts") {
  const VolumeEstimate a = mc_volume(2, FluxSector(2), kFermion, 30000, 9, 1);
  const VolumeEstimate b = mc_volume(2, FluxSector(2), kFermion, 30000, 9, 2);
  const VolumeEstimate c = mc_volume(2, FluxSector(2), kFermion, 30000, 9, 5);
  CHECK(a.mean == b.mean);
  CHECK(b.mean == c.mean);
  CHECK(a.std_error == b.std_error);
  CHECK(b.std_error == c.std_error);
}

TEST_CASE("mc volume: input validation") {
  CHECK_THROWS_AS(mc_volume(2, FluxSector(2), kFermion, 9999, 1, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      mc_volume(2, FluxSector(2), StatisticsKind::anyon(0.5), 10000, 1, 1),
      std::invalid_argument);
  CHECK_THROWS_AS(mc_volume(4, FluxSector(2), kFermion, 10000, 1, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(mc_volume(2, FluxSector(2), kFermion, 10000, 1, 0),
                  std::invalid_argument);
}

TEST_CASE("mc volume: fermion estimate below boson estimate pointwise") {
  // Identical sample streams; the fermion Liouville density never exceeds
  // the boson one (det vs permanent of the same Gram matrix).
  // The absolute slack covers the conditioning floor of the fermion metric
  // for the rare near-coincident draws (see the coincidence test above).
  const FluxSector flux(2);
  SubstreamRng rng(42, 0);
  int checked = 0;
  for (int s = 0; s < 2000; ++s) {
    const ParticleConfig config({rng.sphere_point(), rng.sphere_point()});
    double fermion_density = 0.0;
    try {
      fermion_density = liouville_density(config, flux, kFermion);
    } catch (const FermionDegenerate&) {
      continue;
    }
    const double boson_density = liouville_density(config, flux, kBoson);
    CHECK(fermion_density <= boson_density * (1.0 + 1e-9) + 1e-3);
    ++checked;
  }
  CHECK(checked > 1900);
}

TEST_CASE("mc volume: rotation invariance (two-sample z-test)") {
  // Estimate the same fermion volume from rotated sample points; the
  // round-sphere proposal is rotation invariant, so the two independent
  // estimates must agree statistically.
  const FluxSector flux(2);
  const double theta = 0.7;
  const std::uint64_t samples = 60000;

  auto manual_estimate = [&](std::uint64_t seed, bool rotate) {
    double sum = 0.0, sum_sq = 0.0;
    SubstreamRng rng(seed, 1234);
    for (std::uint64_t s = 0; s < samples; ++s) {
      Complex z1 = rng.sphere_point();
      Complex z2 = rng.sphere_point();
      if (rotate) {
        z1 = mobius_rotate(z1, theta);
        z2 = mobius_rotate(z2, theta);
      }
      double w = 0.0;
      try {
        w = liouville_density(ParticleConfig({z1, z2}), flux, kFermion) /
            (sphere_density(z1) * sphere_density(z2));
      } catch (const FermionDegenerate&) {
      }
      sum += w;
      sum_sq += w * w;
    }
    const double s_count = static_cast<double>(samples);
    const double mean = sum / s_count;
    const double var = (sum_sq - s_count * mean * mean) / (s_count - 1.0);
    const double norm = 1.0 / (2.0 * flux.h() * flux.h());
    return std::pair<double, double>{mean * norm,
                                     std::sqrt(var / s_count) * norm};
  };

  const auto [m1, se1] = manual_estimate(101, false);
  const auto [m2, se2] = manual_estimate(202, true);
  const double z_stat = std::abs(m1 - m2) / std::hypot(se1, se2);
  CHECK(z_stat < 4.0);
  CHECK(std::abs(m1 - 0.5) <= 4.0 * se1);
  CHECK(std::abs(m2 - 0.5) <= 4.0 * se2);
}

TEST_CASE("filled level: the constrained manifold degenerates to a point") {
  SUBCASE("2j = 2, N = 3") {
    const double worst = filled_level_check(FluxSector(2));
    CHECK(worst <= 1e-8 * std::pow(2.0, 3));
    CHECK(worst <= 1e-8);
  }
  SUBCASE("2j = 1, N = 2") {
    const double worst = filled_level_check(FluxSector(1));
    CHECK(worst <= 1e-8);
  }
  SUBCASE("sanity inversion: N = 2 at 2j = 2 is not degenerate") {
    ConfigSampler sampler(17);
    double best = 0.0;
    for (int t = 0; t < 20; ++t) {
      const KahlerMetric km =
          metric(sampler.config(2, 0.2), FluxSector(2), kFermion);
      best = std::max(best, std::abs(km.g.determinant().real()));
    }
    CHECK(best > 1e-3);
  }
}
