// Copyright (c) the parobin contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef PAROBIN_SRC_TRIDIAG_HPP
#define PAROBIN_SRC_TRIDIAG_HPP

#include <vector>

namespace parobin::detail {

// Thomas algorithm for a symmetric positive definite tridiagonal system with
// constant off-diagonal `off` and diagonal `diag`.
inline std::vector<double> solve_tridiag(double off, std::vector<double> diag,
                                         std::vector<double> rhs) {
  const std::size_t n = diag.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double w = off / diag[i - 1];
    diag[i] -= w * off;
    rhs[i] -= w * rhs[i - 1];
  }
  std::vector<double> x(n);
  x[n - 1] = rhs[n - 1] / diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = (rhs[i] - off * x[i + 1]) / diag[i];
  return x;
}

// Same with a varying symmetric off-diagonal: sub[i] couples rows i-1 and i.
inline std::vector<double> solve_tridiag_sym(std::vector<double> sub, std::vector<double> diag,
                                             std::vector<double> rhs) {
  const std::size_t n = diag.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double w = sub[i] / diag[i - 1];
    diag[i] -= w * sub[i];
    rhs[i] -= w * rhs[i - 1];
  }
  std::vector<double> x(n);
  x[n - 1] = rhs[n - 1] / diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = (rhs[i] - sub[i + 1] * x[i + 1]) / diag[i];
  return x;
}

}  // namespace parobin::detail

#endif
