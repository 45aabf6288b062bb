// Copyright (c) the parobin contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef PAROBIN_CONTINUATION_HPP
#define PAROBIN_CONTINUATION_HPP

#include <optional>
#include <string>
#include <vector>

#include "parobin/eigen.hpp"
#include "parobin/solve.hpp"

namespace parobin {

struct SolutionBranch {
  std::vector<double> lambda_grid;
  std::vector<SolveOutcome> outcomes;
  std::vector<std::optional<SolveOutcome>> second_outcomes;
  std::optional<std::pair<double, double>> lambda_star_estimate;
  std::optional<EigenResult> eigen_ref;

  // Violations of the branch structure (strict nodal increase between solved
  // parameters, half-line layout of the failures); reported, not thrown.
  std::vector<std::string> structure_flags() const;
};

// Minimal-solution sweep over an ascending parameter grid. Per-parameter
// solves are independent; results land by grid index regardless of the
// thread count.
SolutionBranch sweep(const OperatorSpec& op, const ProblemSpec& prob, const Mesh& mesh,
                     const std::vector<double>& lambda_grid, const SolverParams& params,
                     bool with_second = false, int n_threads = 1);

struct LambdaStarInterval {
  double lo = 0.0;
  double hi = 0.0;
  int evaluations = 0;
  int uncertain = 0;  // NoConvergence outcomes counted as the non-solution side
};

// Bisection on the solvability of the minimal-solution problem; the initial
// bracket is expanded geometrically up to 8 times per side.
LambdaStarInterval detect_lambda_star(const OperatorSpec& op, const ProblemSpec& prob,
                                      const Mesh& mesh, std::pair<double, double> bracket,
                                      double tol_lambda, const SolverParams& params);

struct LeftContinuityReport {
  std::vector<double> deltas;
  std::vector<double> distances;  // c1 distance of u(lambda - delta) to u(lambda)
  bool nonincreasing = false;
  bool pass(double final_tol = 1e-4) const {
    return nonincreasing && !distances.empty() && distances.back() < final_tol;
  }
};

LeftContinuityReport check_left_continuity(const OperatorSpec& op, const ProblemSpec& prob,
                                           const Mesh& mesh, double lambda,
                                           const std::vector<double>& deltas,
                                           const SolverParams& params);

// Integral of the Picone remainder R(u1_hat, u) for the p-Laplacian;
// cell-wise exact for P1 interpolants, hence nonnegative up to roundoff.
double picone_defect(const EigenResult& eig, const DiscreteFunction& u, const OperatorSpec& op,
                     const ProblemSpec& prob);

}  // namespace parobin

#endif
