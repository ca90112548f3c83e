// Copyright 2026 The exstat Authors
// SPDX-License-Identifier: Apache-2.0

#include "exstat/geometry.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "exstat/errors.hpp"
#include "exstat/permanent.hpp"

namespace exstat {

namespace {

enum class Exchange { Symmetric, Antisymmetric };

Exchange resolve_exchange(const StatisticsKind& kind, const char* op) {
  if (kind.is_bosonic()) {
    return Exchange::Symmetric;
  }
  if (kind.is_fermionic()) {
    return Exchange::Antisymmetric;
  }
  throw std::invalid_argument(
      std::string(op) +
      ": requires boson or fermion statistics (no coherent-state "
      "normalization exists for fractional kinds)");
}

double wrap_phase(double phi) {
  double w = std::remainder(phi, 2.0 * kPi);
  if (w <= -kPi) {
    w += 2.0 * kPi;
  }
  return w;
}

void check_fermion_count(const StatisticsKind& kind, int n,
                         const FluxSector& flux, const char* op) {
  if (kind.is_fermionic() && n > flux.level_dimension()) {
    throw FermionDegenerate(
        std::string(op) + ": " + std::to_string(n) +
        " fermions exceed the level dimension 2j+1 = " +
        std::to_string(flux.level_dimension()) +
        "; the Gram determinant vanishes identically");
  }
}

void check_boson_cap(int n, const char* op) {
  if (n > kPermanentCap) {
    throw PermanentOverCap(std::string(op) + ": N = " + std::to_string(n) +
                           " bosons exceed the permanent cap N <= " +
                           std::to_string(kPermanentCap));
  }
}

// Derivative coefficients on the rescaled Gram matrix, with
// s_i = ln M_ii. All entries are O(2j) regardless of the coordinates.
//
//   u(i,l) = 2j z_l (1 + conj(z_i) z_l)^{2j-1} e^{-(s_i+s_l)/2}
//          : scaled d/d(conj z_i) M_il; d/d(z_j) M_kj = conj(u(j,k)).
//   w(i,j) = 2j (1 + 2j conj(z_i) z_j)(1 + conj(z_i) z_j)^{2j-2}
//            e^{-(s_i+s_j)/2}
//          : scaled d/d(conj z_i) d/d(z_j) M_ij.
//
// Powers are taken in log form so antipodal pairs (base 0) stay exact.
struct DerivativeData {
  Eigen::MatrixXcd u;
  Eigen::MatrixXcd w;
};

DerivativeData derivative_data(const ParticleConfig& config,
                               const FluxSector& flux,
                               const GramMatrix& gram) {
  const int n = config.size();
  const double tj = static_cast<double>(flux.two_j);
  DerivativeData d{Eigen::MatrixXcd::Zero(n, n), Eigen::MatrixXcd::Zero(n, n)};
  if (flux.two_j == 0) {
    return d;
  }
  for (int i = 0; i < n; ++i) {
    for (int l = 0; l < n; ++l) {
      const Complex base = 1.0 + std::conj(config[i]) * config[l];
      const double log_base = 0.5 * std::log(std::norm(base));
      const double arg_base = std::arg(base);
      const double half_scale = 0.5 * (gram.log_diag(i) + gram.log_diag(l));

      const int ku = flux.two_j - 1;
      const double lu = (ku == 0 ? 0.0 : ku * log_base) - half_scale;
      d.u(i, l) = tj * config[l] * std::polar(std::exp(lu), ku * arg_base);

      if (flux.two_j == 1) {
        // (1 + 2j t)(1 + t)^{2j-2} == 1 identically at 2j = 1.
        d.w(i, l) = tj * std::exp(-half_scale);
      } else {
        const int kw = flux.two_j - 2;
        const double lw = (kw == 0 ? 0.0 : kw * log_base) - half_scale;
        const Complex t = base - 1.0;
        d.w(i, l) = tj * (1.0 + tj * t) *
                    std::polar(std::exp(lw), kw * arg_base);
      }
    }
  }
  return d;
}

constexpr double kFermionDetTol = 1e-12;  // relative to prod_i M_ii

// LDLT of the rescaled (unit-diagonal) Gram matrix.
struct FermionFactor {
  Eigen::MatrixXcd inverse;
  double log_det;  // ln det of the rescaled matrix
};

FermionFactor fermion_factor(const GramMatrix& gram, const char* op) {
  const Eigen::MatrixXcd mtilde = gram.normalized();
  const int n = gram.size();
  Eigen::LDLT<Eigen::MatrixXcd> ldlt(mtilde);
  const Eigen::VectorXd diag = ldlt.vectorD().real();

  double det = 1.0;
  double log_det = 0.0;
  bool positive = true;
  for (int i = 0; i < n; ++i) {
    const double di = diag[i];
    if (!(di > 0.0) || !std::isfinite(di)) {
      positive = false;
      break;
    }
    det *= di;
    log_det += std::log(di);
  }
  if (!positive || det <= kFermionDetTol) {
    throw FermionDegenerate(
        std::string(op) +
        ": Gram determinant below 1e-12 of its diagonal product "
        "(coinciding fermions or N > 2j+1)");
  }
  FermionFactor f;
  f.log_det = log_det;
  f.inverse = ldlt.solve(Eigen::MatrixXcd::Identity(n, n));
  return f;
}

// Permanent data on the rescaled Gram matrix. `single_minor(k, l)` is the
// permanent with row k and column l removed.
struct BosonFactor {
  Eigen::MatrixXcd mtilde;
  double p0 = 1.0;

  Eigen::MatrixXcd minor_matrix(int drop_r1, int drop_r2, int drop_c1,
                                int drop_c2) const {
    const int n = static_cast<int>(mtilde.rows());
    std::vector<int> rows, cols;
    rows.reserve(n);
    cols.reserve(n);
    for (int r = 0; r < n; ++r) {
      if (r != drop_r1 && r != drop_r2) rows.push_back(r);
    }
    for (int c = 0; c < n; ++c) {
      if (c != drop_c1 && c != drop_c2) cols.push_back(c);
    }
    Eigen::MatrixXcd sub(rows.size(), cols.size());
    for (std::size_t a = 0; a < rows.size(); ++a) {
      for (std::size_t b = 0; b < cols.size(); ++b) {
        sub(a, b) = mtilde(rows[a], cols[b]);
      }
    }
    return sub;
  }

  Complex single_minor(int k, int l) const {
    return ryser_permanent(minor_matrix(k, -1, l, -1));
  }
};

BosonFactor boson_factor(const GramMatrix& gram, const char* op) {
  check_boson_cap(gram.size(), op);
  BosonFactor f;
  f.mtilde = gram.normalized();
  const Complex p = ryser_permanent(f.mtilde);
  f.p0 = p.real();
  if (!(f.p0 > 0.0) || !std::isfinite(f.p0)) {
    throw std::runtime_error(std::string(op) +
                             ": permanent of the rescaled Gram matrix is not "
                             "positive (numeric breakdown)");
  }
  return f;
}

// Cache of double-minor permanents keyed by the dropped row and column
// pairs; filled on demand while assembling the boson metric.
class DoubleMinorCache {
 public:
  DoubleMinorCache(const BosonFactor& factor, int n)
      : factor_(factor),
        n_(n),
        values_(static_cast<std::size_t>(n) * n * n * n),
        filled_(values_.size(), false) {}

  Complex get(int r1, int r2, int c1, int c2) {
    if (r1 > r2) std::swap(r1, r2);
    if (c1 > c2) std::swap(c1, c2);
    const std::size_t idx =
        ((static_cast<std::size_t>(r1) * n_ + r2) * n_ + c1) * n_ + c2;
    if (!filled_[idx]) {
      values_[idx] = ryser_permanent(factor_.minor_matrix(r1, r2, c1, c2));
      filled_[idx] = true;
    }
    return values_[idx];
  }

 private:
  const BosonFactor& factor_;
  int n_;
  std::vector<Complex> values_;
  std::vector<bool> filled_;
};

KahlerMetric metric_analytic(const ParticleConfig& config,
                             const FluxSector& flux,
                             const StatisticsKind& kind) {
  const Exchange ex = resolve_exchange(kind, "metric");
  const int n = config.size();
  check_fermion_count(kind, n, flux, "metric");
  if (ex == Exchange::Symmetric) {
    check_boson_cap(n, "metric");
  }

  const GramMatrix gram = gram_matrix(config, flux);
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(n, n);

  if (flux.two_j == 0) {
    // Zero flux: a single level state, flat potential, vanishing metric.
    if (ex == Exchange::Antisymmetric && n > 1) {
      throw FermionDegenerate("metric: more than one fermion at 2j = 0");
    }
    return KahlerMetric{g, MetricMethod::Analytic};
  }

  const DerivativeData d = derivative_data(config, flux, gram);

  if (ex == Exchange::Antisymmetric) {
    const FermionFactor f = fermion_factor(gram, "metric");
    const Eigen::MatrixXcd t2 = d.u * f.inverse * d.u.adjoint();
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        g(i, j) = flux.hbar * f.inverse(j, i) * (d.w(i, j) - t2(i, j));
      }
    }
  } else {
    const BosonFactor f = boson_factor(gram, "metric");
    Eigen::MatrixXcd sp(n, n);
    for (int k = 0; k < n; ++k) {
      for (int l = 0; l < n; ++l) {
        sp(k, l) = f.single_minor(k, l);
      }
    }
    // First-derivative pieces of ln perm.
    Eigen::VectorXcd grad_anti(n), grad_holo(n);
    for (int i = 0; i < n; ++i) {
      Complex acc_a(0.0, 0.0), acc_h(0.0, 0.0);
      for (int l = 0; l < n; ++l) {
        acc_a += d.u(i, l) * sp(i, l);
        acc_h += std::conj(d.u(i, l)) * sp(l, i);
      }
      grad_anti[i] = acc_a / f.p0;
      grad_holo[i] = acc_h / f.p0;
    }
    DoubleMinorCache dp(f, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        Complex second = d.w(i, j) * sp(i, j);
        for (int k = 0; k < n; ++k) {
          if (k == i) continue;
          for (int l = 0; l < n; ++l) {
            if (l == j) continue;
            second +=
                std::conj(d.u(j, k)) * d.u(i, l) * dp.get(i, k, l, j);
          }
        }
        g(i, j) = flux.hbar * (second / f.p0 - grad_anti[i] * grad_holo[j]);
      }
    }
  }

  g = 0.5 * (g + g.adjoint()).eval();
  return KahlerMetric{std::move(g), MetricMethod::Analytic};
}

KahlerMetric metric_finite_difference(const ParticleConfig& config,
                                      const FluxSector& flux,
                                      const StatisticsKind& kind,
                                      double fd_step) {
  if (!(fd_step > 0.0) || !std::isfinite(fd_step)) {
    throw std::invalid_argument("metric: fd_step must be positive");
  }
  resolve_exchange(kind, "metric");
  const int n = config.size();
  check_fermion_count(kind, n, flux, "metric");
  if (kind.is_bosonic()) {
    check_boson_cap(n, "metric");
  }

  const int m = 2 * n;  // real coordinates (x_0, y_0, x_1, y_1, ...)
  std::vector<double> step(m);
  for (int a = 0; a < m; ++a) {
    step[a] = fd_step * std::max(1.0, std::abs(config[a / 2]));
  }

  auto potential_at = [&](int a, double da, int b, double db) {
    std::vector<Complex> zs = config.coords;
    auto bump = [&zs](int coord, double delta) {
      const int p = coord / 2;
      if (coord % 2 == 0) {
        zs[p] += Complex(delta, 0.0);
      } else {
        zs[p] += Complex(0.0, delta);
      }
    };
    bump(a, da);
    if (b >= 0) {
      bump(b, db);
    }
    return kahler_potential(ParticleConfig(zs), flux, kind);
  };

  const double k0 = kahler_potential(config, flux, kind);
  double k_scale = std::abs(k0);

  Eigen::MatrixXd hess(m, m);
  for (int a = 0; a < m; ++a) {
    const double kp = potential_at(a, step[a], -1, 0.0);
    const double km = potential_at(a, -step[a], -1, 0.0);
    k_scale = std::max({k_scale, std::abs(kp), std::abs(km)});
    hess(a, a) = (kp - 2.0 * k0 + km) / (step[a] * step[a]);
  }
  for (int a = 0; a < m; ++a) {
    for (int b = a + 1; b < m; ++b) {
      const double kpp = potential_at(a, step[a], b, step[b]);
      const double kpm = potential_at(a, step[a], b, -step[b]);
      const double kmp = potential_at(a, -step[a], b, step[b]);
      const double kmm = potential_at(a, -step[a], b, -step[b]);
      k_scale = std::max({k_scale, std::abs(kpp), std::abs(kpm),
                          std::abs(kmp), std::abs(kmm)});
      const double val = (kpp - kpm - kmp + kmm) / (4.0 * step[a] * step[b]);
      hess(a, b) = val;
      hess(b, a) = val;
    }
  }

  // d/dzbar_i d/dz_j = (1/4)[(d_xi d_xj + d_yi d_yj)
  //                          + i (d_yi d_xj - d_xi d_yj)].
  Eigen::MatrixXcd g(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int xi = 2 * i, yi = 2 * i + 1, xj = 2 * j, yj = 2 * j + 1;
      const double re = 0.25 * (hess(xi, xj) + hess(yi, yj));
      const double im = 0.25 * (hess(yi, xj) - hess(xi, yj));
      g(i, j) = Complex(re, im);
    }
  }

  // Roundoff estimate of the stencil: the 4-point numerator carries an
  // absolute error of roughly eps K_scale, divided by 4 d_a d_b.
  const double eps = std::numeric_limits<double>::epsilon();
  double err_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double e = eps * k_scale / (4.0 * step[2 * i] * step[2 * j]);
      err_sq += e * e;
    }
  }
  const double err_norm = std::sqrt(err_sq);
  const double g_norm = g.norm();
  if (g_norm > 0.0 && err_norm > 1e-6 * g_norm) {
    throw StepTooSmall(
        "metric: finite-difference cancellation at step " +
        std::to_string(fd_step) +
        " exceeds 1e-6 of the result; increase the step");
  }

  g = 0.5 * (g + g.adjoint()).eval();
  return KahlerMetric{std::move(g), MetricMethod::FiniteDifference};
}

}  // namespace

Complex GramMatrix::entry(int i, int j) const {
  return std::polar(std::exp(log_mag(i, j)), phase(i, j));
}

Eigen::MatrixXcd GramMatrix::normalized() const {
  const int n = size();
  Eigen::MatrixXcd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double lm =
          log_mag(i, j) - 0.5 * (log_mag(i, i) + log_mag(j, j));
      m(i, j) = std::polar(std::exp(lm), phase(i, j));
    }
  }
  return m;
}

GramMatrix gram_matrix(const ParticleConfig& config, const FluxSector& flux) {
  const int n = config.size();
  const double tj = static_cast<double>(flux.two_j);
  GramMatrix gram;
  gram.log_mag.resize(n, n);
  gram.phase.resize(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Complex base = 1.0 + std::conj(config[i]) * config[j];
      // |base|^2 via norm avoids an intermediate overflow for |z| ~ 1e6.
      const double lb = 0.5 * std::log(std::norm(base));
      gram.log_mag(i, j) = (flux.two_j == 0) ? 0.0 : tj * lb;
      gram.phase(i, j) =
          (flux.two_j == 0) ? 0.0 : wrap_phase(tj * std::arg(base));
    }
    gram.phase(i, i) = 0.0;  // diagonal is real by construction
  }
  return gram;
}

double log_norm(const GramMatrix& gram, const StatisticsKind& kind) {
  const Exchange ex = resolve_exchange(kind, "log_norm");
  const int n = gram.size();
  double scale = 0.0;
  for (int i = 0; i < n; ++i) {
    scale += gram.log_diag(i);
  }
  if (ex == Exchange::Symmetric) {
    check_boson_cap(n, "log_norm");
    const double p0 = ryser_permanent(gram.normalized()).real();
    if (!(p0 > 0.0) || !std::isfinite(p0)) {
      throw std::runtime_error(
          "log_norm: permanent of the rescaled Gram matrix is not positive "
          "(numeric breakdown)");
    }
    return std::log(p0) + scale;
  }
  const FermionFactor f = fermion_factor(gram, "log_norm");
  return f.log_det + scale;
}

double kahler_potential(const ParticleConfig& config, const FluxSector& flux,
                        const StatisticsKind& kind) {
  check_fermion_count(kind, config.size(), flux, "kahler_potential");
  return flux.hbar * log_norm(gram_matrix(config, flux), kind);
}

std::vector<Complex> berry_connection(const ParticleConfig& config,
                                      const FluxSector& flux,
                                      const StatisticsKind& kind) {
  const Exchange ex = resolve_exchange(kind, "berry_connection");
  const int n = config.size();
  check_fermion_count(kind, n, flux, "berry_connection");
  if (ex == Exchange::Symmetric) {
    check_boson_cap(n, "berry_connection");
  }

  const GramMatrix gram = gram_matrix(config, flux);
  std::vector<Complex> a(static_cast<std::size_t>(n), Complex(0.0, 0.0));
  if (flux.two_j == 0) {
    if (ex == Exchange::Antisymmetric && n > 1) {
      throw FermionDegenerate("berry_connection: more than one fermion at 2j = 0");
    }
    return a;
  }

  const DerivativeData d = derivative_data(config, flux, gram);
  const Complex half_i_hbar(0.0, 0.5 * flux.hbar);

  if (ex == Exchange::Antisymmetric) {
    const FermionFactor f = fermion_factor(gram, "berry_connection");
    for (int i = 0; i < n; ++i) {
      Complex acc(0.0, 0.0);
      for (int k = 0; k < n; ++k) {
        acc += f.inverse(i, k) * std::conj(d.u(i, k));
      }
      a[static_cast<std::size_t>(i)] = half_i_hbar * acc;
    }
  } else {
    const BosonFactor f = boson_factor(gram, "berry_connection");
    for (int i = 0; i < n; ++i) {
      Complex acc(0.0, 0.0);
      for (int k = 0; k < n; ++k) {
        acc += std::conj(d.u(i, k)) * f.single_minor(k, i);
      }
      a[static_cast<std::size_t>(i)] = half_i_hbar * acc / f.p0;
    }
  }
  return a;
}

KahlerMetric metric(const ParticleConfig& config, const FluxSector& flux,
                    const StatisticsKind& kind, MetricMethod method,
                    double fd_step) {
  if (method == MetricMethod::Analytic) {
    return metric_analytic(config, flux, kind);
  }
  return metric_finite_difference(config, flux, kind, fd_step);
}

double single_particle_area(const FluxSector& flux) {
  return flux.h() * static_cast<double>(flux.two_j);
}

}  // namespace exstat
