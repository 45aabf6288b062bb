// Copyright (c) the parobin contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef PAROBIN_SOLVE_HPP
#define PAROBIN_SOLVE_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "parobin/energy.hpp"
#include "parobin/mesh.hpp"

namespace parobin {

// The path deformation found no interior barrier: every polished candidate
// fell back into the low endpoint's basin.
struct PathCollapse : Error {
  using Error::Error;
};

struct SolverParams {
  double tol_grad = 1e-8;
  int max_iters = 20000;
  double eta_shift = 0.0;       // below ||xi||_inf means auto: ||xi||_inf + 1
  double xi_hat = -1.0;         // negative means auto via estimate_xi_hat
  double divergence_norm = 1e6;
  std::uint64_t seed = 42;

  double effective_eta(const ProblemSpec& prob) const {
    const double floor = prob.xi_inf_norm() + 1.0;
    return eta_shift > prob.xi_inf_norm() ? eta_shift : floor;
  }
};

enum class SolveStatus { Solution, NoSolutionDetected, NoConvergence };

struct SolveOutcome {
  SolveStatus status = SolveStatus::NoConvergence;
  std::optional<DiscreteFunction> u;
  double residual = 0.0;
  double energy_value = 0.0;
  int iterations = 0;
};

struct MountainPassParams {
  int path_points = 41;
  double endpoint_scale = 2.0;  // doubling factor of the far-endpoint search
  int deform_steps = 5000;
  double descent_tol = 1e-7;
};

const char* to_string(SolveStatus s);

// Max-norm of the weak-form residual of the untruncated problem at u >= 0,
// Robin terms included.
double residual(const OperatorSpec& op, const ProblemSpec& prob, double lambda,
                const DiscreteFunction& u);

// Quasi-Newton descent with backtracking line search; minimizers with a
// vanishing negative part are clipped to their positive part and re-polished.
// Solution status requires a strictly positive nonzero minimizer.
SolveOutcome minimize(const FunctionalSpec& spec, const OperatorSpec& op, const ProblemSpec& prob,
                      const DiscreteFunction& init, const SolverParams& params);

// Auxiliary comparison problem: certifies coefficients (c9, c10) for the
// one-sided bound lambda x^{p-1} + f >= c9 x^{q-1} - c10 x^{r-1} on a grid,
// then minimizes the auxiliary energy. Explicitly given coefficients are
// used verbatim.
std::pair<SolveOutcome, AuxCoeffs> solve_auxiliary(const OperatorSpec& op,
                                                   const ProblemSpec& prob, double lambda,
                                                   const Mesh& mesh, const SolverParams& params,
                                                   std::optional<AuxCoeffs> given = std::nullopt);

// Monotone iteration from the auxiliary solution upward; the trace is
// nondecreasing nodally and the fixed point is the smallest positive
// solution. Divergence and sustained growth are classified as
// NoSolutionDetected.
SolveOutcome minimal_solution(const OperatorSpec& op, const ProblemSpec& prob, double lambda,
                              const Mesh& mesh, const SolverParams& params);

// Path-deformation min-max search between u_low and a far endpoint t*1 of
// lower energy. Generic engine; the returned point carries the min-max level
// in energy_value and the functional-gradient norm in residual.
SolveOutcome mountain_pass(const FunctionalSpec& spec, const OperatorSpec& op,
                           const ProblemSpec& prob, const DiscreteFunction& u_low,
                           const SolverParams& params, const MountainPassParams& mp);

// Engine over raw callables (also used by the synthetic validation tests).
SolveOutcome mountain_pass_on(const std::function<double(const DiscreteFunction&)>& energy_fn,
                              const std::function<DiscreteFunction(const DiscreteFunction&)>& grad_fn,
                              const DiscreteFunction& u_low, const DiscreteFunction& u_high,
                              const MountainPassParams& mp);

// Second solution above a verified minimal one, via the floor-truncated
// functional and the mountain pass.
SolveOutcome second_solution(const OperatorSpec& op, const ProblemSpec& prob, double lambda,
                             const DiscreteFunction& u_min, const SolverParams& params,
                             const MountainPassParams& mp = {});

struct MultistartReport {
  std::vector<DiscreteFunction> representatives;
  std::vector<int> counts;
  int failed_starts = 0;
  int clusters() const { return static_cast<int>(representatives.size()); }
};

// Clusters the solutions reached from random positive starts (C1 threshold
// 1e-5). Coercive classes run direct minimization; superlinear classes probe
// the minimal and mountain-pass branches.
MultistartReport multistart_uniqueness(const OperatorSpec& op, const ProblemSpec& prob,
                                       double lambda, const Mesh& mesh, int n_starts,
                                       const SolverParams& params);

}  // namespace parobin

#endif
