// Copyright 2026 The exstat Authors
// SPDX-License-Identifier: Apache-2.0

#include "exstat/permanent.hpp"

#include <bit>
#include <cstdint>
#include <string>

#include "exstat/errors.hpp"

namespace exstat {

Complex ryser_permanent(const Eigen::MatrixXcd& m) {
  const int n = static_cast<int>(m.rows());
  if (m.cols() != n) {
    throw std::invalid_argument("ryser_permanent: matrix must be square");
  }
  if (n > kPermanentCap) {
    throw PermanentOverCap("ryser_permanent: N = " + std::to_string(n) +
                           " exceeds the cap N <= " +
                           std::to_string(kPermanentCap));
  }
  if (n == 0) {
    return Complex(1.0, 0.0);
  }

  // perm(M) = (-1)^N sum_{S != 0} (-1)^|S| prod_i sum_{j in S} M_ij.
  // Gray-code order toggles one column per step, so the row sums are
  // updated in O(N) per subset.
  Eigen::VectorXcd row_sums = Eigen::VectorXcd::Zero(n);
  Complex total(0.0, 0.0);
  std::uint64_t gray = 0;
  int popcount = 0;
  const std::uint64_t subsets = (std::uint64_t{1} << n) - 1;
  for (std::uint64_t k = 1; k <= subsets; ++k) {
    const std::uint64_t next_gray = k ^ (k >> 1);
    const std::uint64_t toggled = next_gray ^ gray;
    const int col = std::countr_zero(toggled);
    if (next_gray & toggled) {
      row_sums += m.col(col);
      ++popcount;
    } else {
      row_sums -= m.col(col);
      --popcount;
    }
    gray = next_gray;

    Complex prod(1.0, 0.0);
    for (int i = 0; i < n; ++i) {
      prod *= row_sums[i];
    }
    total += (popcount & 1) ? -prod : prod;
  }
  return (n & 1) ? -total : total;
}

}  // namespace exstat
