// Copyright 2026 The exstat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include "exstat/types.hpp"

namespace exstat {

/// Hard cap on permanent evaluations; Ryser costs O(2^N * N).
inline constexpr int kPermanentCap = 14;

/// Permanent of a square complex matrix by Ryser's inclusion-exclusion
/// formula with Gray-code subset updates. The empty matrix has permanent 1.
/// Throws PermanentOverCap for sizes above kPermanentCap.
Complex ryser_permanent(const Eigen::MatrixXcd& m);

}  // namespace exstat
