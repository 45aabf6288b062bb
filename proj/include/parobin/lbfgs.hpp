// Copyright (c) the parobin contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef PAROBIN_LBFGS_HPP
#define PAROBIN_LBFGS_HPP

#include <functional>
#include <vector>

namespace parobin {

// Limited-memory BFGS with Armijo backtracking. Iterate energies are
// strictly decreasing until termination; used for every convex subproblem
// and coercive functional in the solver layers.
struct LbfgsOptions {
  double tol_grad_inf = 1e-8;
  int max_iters = 20000;
  int memory = 12;
  double divergence_inf = 1e6;
  double armijo_c1 = 1e-4;
  int max_line_search = 60;
  // Optional H0 replacement in the two-loop recursion (an elliptic solve
  // tames the 1/h^2 stiffness of mesh energies).
  std::function<void(std::vector<double>&)> apply_h0;
};

enum class LbfgsStatus { Converged, MaxIters, Diverged, Stalled };

struct LbfgsResult {
  std::vector<double> x;
  double f = 0.0;
  double grad_inf = 0.0;
  int iterations = 0;
  LbfgsStatus status = LbfgsStatus::MaxIters;
};

// fg fills grad and returns the energy.
using EnergyGradient =
    std::function<double(const std::vector<double>& x, std::vector<double>& grad)>;

LbfgsResult minimize_lbfgs(const EnergyGradient& fg, std::vector<double> x0,
                           const LbfgsOptions& opts);

}  // namespace parobin

#endif
