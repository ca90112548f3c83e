// Copyright 2026 The exstat Authors
// SPDX-License-Identifier: Apache-2.0

#include "exstat/thermo.hpp"

#include <cmath>
#include <stdexcept>

#include "exstat/errors.hpp"
#include "exstat/volume.hpp"

namespace exstat {

void ThermoInput::validate() const {
  if (n < 1) {
    throw std::invalid_argument("ThermoInput: need N >= 1");
  }
  if (!(area_h > 0.0) || !std::isfinite(area_h)) {
    throw std::invalid_argument("ThermoInput: area must be positive");
  }
  if (!(alpha_h >= 0.0) || !std::isfinite(alpha_h)) {
    throw std::invalid_argument("ThermoInput: alpha must be >= 0");
  }
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw std::invalid_argument("ThermoInput: beta must be positive");
  }
  if (!std::isfinite(energy_per_particle)) {
    throw std::invalid_argument("ThermoInput: energy must be finite");
  }
}

LogPartition log_partition_function(const ThermoInput& input) {
  input.validate();
  const double available =
      input.area_h - input.alpha_h * static_cast<double>(input.n - 1);
  LogPartition z;
  if (available <= 0.0) {
    z.zero_volume = true;
    return z;
  }
  // ln(V_N / h^N) - beta E_N in log domain throughout.
  z.log_value = input.n * std::log(available) - std::lgamma(input.n + 1.0) -
                input.beta * input.n * input.energy_per_particle;
  return z;
}

double partition_function(const ThermoInput& input) {
  const LogPartition z = log_partition_function(input);
  if (z.zero_volume) {
    throw ZeroVolume(
        "partition_function: phase-space volume vanishes (maximum particle "
        "number reached)");
  }
  return std::exp(z.log_value);
}

double entropy_closed(const ThermoInput& input) {
  input.validate();
  const double n = static_cast<double>(input.n);
  const double alpha_rho = input.alpha_h * input.rho_h();
  if (alpha_rho >= 1.0) {
    throw DensityAboveMax("entropy_closed: alpha rho >= 1");
  }
  return n * std::log1p(-alpha_rho) + n * std::log(input.area_h) -
         n * std::log(n) + n;
}

double entropy_exact(const ThermoInput& input) {
  input.validate();
  const double v =
      closed_form_volume_with_area(input.n, input.area_h, input.alpha_h);
  if (v <= 0.0) {
    throw ZeroVolume("entropy_exact: phase-space volume vanishes");
  }
  const double available =
      input.area_h - input.alpha_h * static_cast<double>(input.n - 1);
  return input.n * std::log(available) - std::lgamma(input.n + 1.0);
}

double equation_of_state(double rho_h, double alpha_h, double beta) {
  if (!(rho_h >= 0.0) || !std::isfinite(rho_h)) {
    throw std::invalid_argument("equation_of_state: rho must be >= 0");
  }
  if (!(alpha_h >= 0.0) || !std::isfinite(alpha_h)) {
    throw std::invalid_argument("equation_of_state: alpha must be >= 0");
  }
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw std::invalid_argument("equation_of_state: beta must be positive");
  }
  const double alpha_rho = alpha_h * rho_h;
  if (alpha_rho >= 1.0) {
    throw DensityAboveMax(
        "equation_of_state: alpha rho >= 1 corresponds to infinite pressure "
        "(incompressible state)");
  }
  return rho_h / (beta * (1.0 - alpha_rho));
}

double max_density(double alpha_h) {
  if (!(alpha_h >= 0.0) || !std::isfinite(alpha_h)) {
    throw std::invalid_argument("max_density: alpha must be >= 0");
  }
  if (alpha_h == 0.0) {
    throw UnboundedDensity("max_density: no bound at alpha = 0");
  }
  return 1.0 / alpha_h;
}

}  // namespace exstat
