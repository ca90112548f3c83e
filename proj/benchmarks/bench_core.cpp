// Copyright 2026 The exstat Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <vector>

#include "exstat/geometry.hpp"
#include "exstat/permanent.hpp"
#include "exstat/rng.hpp"
#include "exstat/volume.hpp"

namespace {

using exstat::Complex;

exstat::ParticleConfig random_config(int n, std::uint64_t seed) {
  exstat::SubstreamRng rng(seed, 0);
  std::vector<Complex> zs(static_cast<std::size_t>(n));
  for (auto& z : zs) {
    z = rng.sphere_point();
  }
  return exstat::ParticleConfig(zs);
}

void BM_RyserPermanent(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto config = random_config(n, 42);
  const Eigen::MatrixXcd m =
      exstat::gram_matrix(config, exstat::FluxSector(n + 1)).normalized();
  for (auto _ : state) {
    benchmark::DoNotOptimize(exstat::ryser_permanent(m));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_RyserPermanent)->DenseRange(4, 12, 2)->Complexity();

void BM_LogNormFermion(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto config = random_config(n, 7);
  const auto gram = exstat::gram_matrix(config, exstat::FluxSector(n + 2));
  const auto kind = exstat::StatisticsKind::fermion();
  for (auto _ : state) {
    benchmark::DoNotOptimize(exstat::log_norm(gram, kind));
  }
}
BENCHMARK(BM_LogNormFermion)->Arg(4)->Arg(8)->Arg(12);

void BM_MetricAnalytic(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const bool fermion = state.range(1) != 0;
  const auto config = random_config(n, 11);
  const exstat::FluxSector flux(n + 2);
  const auto kind = fermion ? exstat::StatisticsKind::fermion()
                            : exstat::StatisticsKind::boson();
  for (auto _ : state) {
    benchmark::DoNotOptimize(exstat::metric(config, flux, kind));
  }
}
BENCHMARK(BM_MetricAnalytic)
    ->Args({2, 0})
    ->Args({4, 0})
    ->Args({6, 0})
    ->Args({2, 1})
    ->Args({4, 1})
    ->Args({6, 1});

void BM_LiouvilleDensity(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto config = random_config(n, 13);
  const exstat::FluxSector flux(2 * n);
  const auto kind = exstat::StatisticsKind::fermion();
  for (auto _ : state) {
    benchmark::DoNotOptimize(exstat::liouville_density(config, flux, kind));
  }
}
BENCHMARK(BM_LiouvilleDensity)->Arg(2)->Arg(3)->Arg(4);

void BM_McVolumeChunk(benchmark::State& state) {
  const exstat::FluxSector flux(2);
  const auto kind = exstat::StatisticsKind::fermion();
  for (auto _ : state) {
    benchmark::DoNotOptimize(exstat::mc_volume(2, flux, kind, 10000, 3, 1));
  }
}
BENCHMARK(BM_McVolumeChunk)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
