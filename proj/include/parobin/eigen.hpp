// Copyright (c) the parobin contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef PAROBIN_EIGEN_HPP
#define PAROBIN_EIGEN_HPP

#include <cstdint>

#include "parobin/mesh.hpp"
#include "parobin/problem.hpp"

namespace parobin {

struct EigenResult {
  double lambda1 = 0.0;
  DiscreteFunction u1;
  int iterations = 0;
  double residual = 0.0;
};

// Principal eigenpair of the r-exponent Robin problem with potential xi, by
// shifted inverse iteration: with s > ||xi||_inf, each step minimizes the
// strictly convex energy (1/r)(mu_r(u) + s ||u||_r^r) - int u_k^{r-1} u and
// renormalizes. The result is L^r-normalized, strictly positive, with
// gradient-on-sphere residual below tol.
EigenResult principal_eigenpair(double r, const ProblemSpec& prob, const Mesh& mesh, double tol,
                                std::uint64_t seed, int max_outer = 500);

struct SimplicityReport {
  double max_c1_distance = 0.0;
  double lambda_spread = 0.0;
  int starts = 0;
};

// Reruns the eigensolve from random positive starts; the principal eigenpair
// is simple, so all runs must coincide.
SimplicityReport check_simplicity(const EigenResult& res, const ProblemSpec& prob,
                                  const Mesh& mesh, double r, int n_starts, double tol,
                                  std::uint64_t seed);

}  // namespace parobin

#endif
