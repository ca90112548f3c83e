// Copyright 2026 The exstat Authors
// SPDX-License-Identifier: Apache-2.0

#include "exstat/volume.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "exstat/errors.hpp"
#include "exstat/permanent.hpp"
#include "exstat/rng.hpp"

namespace exstat {

namespace {

// Samples per RNG substream. Fixed so the estimate does not depend on the
// worker count.
constexpr std::uint64_t kChunkSamples = 8192;

struct ChunkSums {
  double weight = 0.0;
  double weight_sq = 0.0;
};

void validate_mc_kind(int n, const FluxSector& flux,
                      const StatisticsKind& kind) {
  if (!kind.is_bosonic() && !kind.is_fermionic()) {
    throw std::invalid_argument(
        "mc_volume: Monte Carlo integration supports boson and fermion "
        "statistics only");
  }
  if (n < 1) {
    throw std::invalid_argument("mc_volume: need N >= 1");
  }
  if (n > kPermanentCap) {
    throw std::invalid_argument("mc_volume: N exceeds the permanent cap " +
                                std::to_string(kPermanentCap));
  }
  if (kind.is_fermionic() && n > flux.level_dimension()) {
    throw std::invalid_argument(
        "mc_volume: more fermions than the level dimension 2j+1 = " +
        std::to_string(flux.level_dimension()));
  }
}

}  // namespace

double closed_form_volume_with_area(int n, double area_h, double alpha_h) {
  if (n < 1) {
    throw std::invalid_argument("closed_form_volume: need N >= 1");
  }
  if (!(area_h > 0.0) || !std::isfinite(area_h)) {
    throw std::invalid_argument("closed_form_volume: area must be positive");
  }
  if (!(alpha_h >= 0.0) || !std::isfinite(alpha_h)) {
    throw std::invalid_argument("closed_form_volume: alpha must be >= 0");
  }
  const double available = area_h - alpha_h * static_cast<double>(n - 1);
  if (available <= 0.0) {
    return 0.0;
  }
  return std::exp(n * std::log(available) - std::lgamma(n + 1.0));
}

double closed_form_volume(int n, const FluxSector& flux,
                          const StatisticsKind& kind) {
  if (flux.two_j == 0) {
    // No flux, no phase space.
    return 0.0;
  }
  return closed_form_volume_with_area(n, static_cast<double>(flux.two_j),
                                      kind.alpha(1.0));
}

double liouville_density(const ParticleConfig& config, const FluxSector& flux,
                         const StatisticsKind& kind) {
  const KahlerMetric km = metric(config, flux, kind, MetricMethod::Analytic);
  const int n = km.size();

  // det G through the eigenvalues of the Hermitian metric, projecting
  // roundoff-negative directions to zero. For fermions the eigenvalues
  // carry an absolute error of up to eps (2j N)^2 / det(Gram_normalized)^2
  // through the ill-conditioned inverse Gram factor, which dwarfs the
  // 1e-9 relative floor near coincidences (measured: 2e-5 at det 6e-6).
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(km.g);
  const Eigen::VectorXd ev = es.eigenvalues();
  double tol = 1e-9 * std::max(ev.maxCoeff(), 0.0) * flux.hbar;
  if (kind.is_fermionic() && n > 1) {
    const double det_gram = std::max(
        gram_matrix(config, flux).normalized().determinant().real(), 1e-12);
    const double coeff_scale =
        static_cast<double>(flux.two_j) * static_cast<double>(n);
    tol = std::max(tol, std::numeric_limits<double>::epsilon() *
                            coeff_scale * coeff_scale * flux.hbar /
                            (det_gram * det_gram));
  }
  double det = 1.0;
  for (int i = 0; i < n; ++i) {
    if (ev[i] < -tol) {
      throw NegativeDensity(
          "liouville_density: metric eigenvalue " + std::to_string(ev[i]) +
          " below the negativity tolerance (metric bug)");
    }
    det *= std::max(ev[i], 0.0);
  }
  return std::ldexp(det, n);  // 2^N det G
}

VolumeEstimate mc_volume(int n, const FluxSector& flux,
                         const StatisticsKind& kind, std::uint64_t samples,
                         std::uint64_t seed, int n_workers) {
  validate_mc_kind(n, flux, kind);
  if (samples < 10000) {
    throw std::invalid_argument("mc_volume: need samples >= 10^4");
  }
  if (n_workers < 1) {
    throw std::invalid_argument("mc_volume: need n_workers >= 1");
  }

  const std::uint64_t n_chunks = (samples + kChunkSamples - 1) / kChunkSamples;
  std::vector<ChunkSums> chunks(n_chunks);

  auto run_chunk = [&](std::uint64_t c) {
    SubstreamRng rng(seed, c);
    const std::uint64_t begin = c * kChunkSamples;
    const std::uint64_t count = std::min(kChunkSamples, samples - begin);
    ChunkSums sums;
    std::vector<Complex> zs(static_cast<std::size_t>(n));
    for (std::uint64_t s = 0; s < count; ++s) {
      double inv_proposal = 1.0;
      for (int i = 0; i < n; ++i) {
        zs[static_cast<std::size_t>(i)] = rng.sphere_point();
        inv_proposal /= sphere_density(zs[static_cast<std::size_t>(i)]);
      }
      double w = 0.0;
      try {
        w = liouville_density(ParticleConfig(zs), flux, kind) * inv_proposal;
      } catch (const FermionDegenerate&) {
        w = 0.0;  // measure-zero coincidence set
      }
      sums.weight += w;
      sums.weight_sq += w * w;
    }
    chunks[c] = sums;
  };

  const int workers = std::min<std::uint64_t>(n_workers, n_chunks);
  if (workers <= 1) {
    for (std::uint64_t c = 0; c < n_chunks; ++c) {
      run_chunk(c);
    }
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::uint64_t c = w; c < n_chunks; c += workers) {
            run_chunk(c);
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) {
      t.join();
    }
    for (const auto& e : errors) {
      if (e) {
        std::rethrow_exception(e);
      }
    }
  }

  // Fixed-order reduction over chunks keeps the result bit-identical for
  // every worker count.
  double sum_w = 0.0;
  double sum_w2 = 0.0;
  for (const ChunkSums& c : chunks) {
    sum_w += c.weight;
    sum_w2 += c.weight_sq;
  }

  const double s = static_cast<double>(samples);
  const double mean_w = sum_w / s;
  const double var_w =
      std::max(0.0, (sum_w2 - s * mean_w * mean_w) / (s - 1.0));
  const double se_w = std::sqrt(var_w / s);

  // Weights are in absolute units (hbar^N via det G, area elements from the
  // proposal); divide by N! for identical-particle counting and by h^N for
  // the reported units.
  const double norm =
      std::exp(-std::lgamma(n + 1.0) - n * std::log(flux.h()));
  VolumeEstimate est;
  est.mean = mean_w * norm;
  est.std_error = se_w * norm;
  est.samples = samples;
  est.seed = seed;
  est.n_workers = n_workers;
  return est;
}

double filled_level_check(const FluxSector& flux, int configs,
                          std::uint64_t seed) {
  if (configs < 1) {
    throw std::invalid_argument("filled_level_check: need configs >= 1");
  }
  const int n = flux.level_dimension();
  const StatisticsKind fermion = StatisticsKind::fermion();
  double max_abs_det = 0.0;
  for (int t = 0; t < configs; ++t) {
    SubstreamRng rng(seed, static_cast<std::uint64_t>(t));
    for (int attempt = 0; attempt < 100; ++attempt) {
      std::vector<Complex> zs(static_cast<std::size_t>(n));
      for (auto& z : zs) {
        z = rng.sphere_point();
      }
      try {
        const KahlerMetric km =
            metric(ParticleConfig(zs), flux, fermion, MetricMethod::Analytic);
        max_abs_det =
            std::max(max_abs_det, std::abs(km.g.determinant().real()));
        break;
      } catch (const FermionDegenerate&) {
        continue;  // re-draw the rare near-coincident configuration
      }
    }
  }
  return max_abs_det;
}

}  // namespace exstat
