// Copyright 2026 The exstat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace exstat {

/// Base class for numerical and domain failures. `name()` is the stable
/// machine-readable identifier; the CLI propagates it verbatim.
class Error : public std::runtime_error {
 public:
  Error(std::string name, const std::string& message)
      : std::runtime_error(message), name_(std::move(name)) {}

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

#define EXSTAT_DEFINE_ERROR(NAME)                   \
  struct NAME : Error {                             \
    explicit NAME(const std::string& message)       \
        : Error(#NAME, message) {}                  \
  }

// geometry
EXSTAT_DEFINE_ERROR(FermionDegenerate);
EXSTAT_DEFINE_ERROR(PermanentOverCap);
EXSTAT_DEFINE_ERROR(StepTooSmall);

// volume
EXSTAT_DEFINE_ERROR(NegativeDensity);

// thermo
EXSTAT_DEFINE_ERROR(ZeroVolume);
EXSTAT_DEFINE_ERROR(DensityAboveMax);
EXSTAT_DEFINE_ERROR(UnboundedDensity);

// exclusion
EXSTAT_DEFINE_ERROR(DomainViolation);
EXSTAT_DEFINE_ERROR(NoRoot);

// dynamics
EXSTAT_DEFINE_ERROR(SingularMetric);
EXSTAT_DEFINE_ERROR(StepFailure);
EXSTAT_DEFINE_ERROR(ChartExit);

#undef EXSTAT_DEFINE_ERROR

}  // namespace exstat
