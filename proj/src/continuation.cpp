// Copyright (c) the parobin contributors.
// SPDX-License-Identifier: Apache-2.0

#include "parobin/continuation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

namespace parobin {

std::vector<std::string> SolutionBranch::structure_flags() const {
  std::vector<std::string> flags;
  // Strict nodal increase between consecutive solved parameters.
  for (std::size_t i = 0, prev = SIZE_MAX; i < outcomes.size(); ++i) {
    if (outcomes[i].status != SolveStatus::Solution || !outcomes[i].u) continue;
    if (prev != SIZE_MAX) {
      const DiscreteFunction& a = *outcomes[prev].u;
      const DiscreteFunction& b = *outcomes[i].u;
      double min_inc = 1e300;
      for (int k = 0; k < a.size(); ++k) min_inc = std::min(min_inc, b[k] - a[k]);
      if (!(min_inc > 0.0)) {
        std::ostringstream os;
        os << "branch not strictly increasing between lambda=" << lambda_grid[prev]
           << " and lambda=" << lambda_grid[i] << " (min nodal increase " << min_inc << ")";
        flags.push_back(os.str());
      }
    }
    prev = i;
  }
  // All failures must sit to the right of every success.
  double max_solved = -1e300, min_failed = 1e300;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (outcomes[i].status == SolveStatus::Solution)
      max_solved = std::max(max_solved, lambda_grid[i]);
    if (outcomes[i].status == SolveStatus::NoSolutionDetected)
      min_failed = std::min(min_failed, lambda_grid[i]);
  }
  if (min_failed < max_solved) {
    std::ostringstream os;
    os << "half-line structure violated: no solution at lambda=" << min_failed
       << " but solution at lambda=" << max_solved;
    flags.push_back(os.str());
  }
  return flags;
}

SolutionBranch sweep(const OperatorSpec& op, const ProblemSpec& prob, const Mesh& mesh,
                     const std::vector<double>& lambda_grid, const SolverParams& params,
                     bool with_second, int n_threads) {
  if (lambda_grid.size() < 2) throw ConfigError("sweep: need at least 2 grid points");
  for (std::size_t i = 1; i < lambda_grid.size(); ++i)
    if (!(lambda_grid[i] > lambda_grid[i - 1]))
      throw ConfigError("sweep: lambda grid must be ascending");

  SolutionBranch branch;
  branch.lambda_grid = lambda_grid;
  branch.outcomes.resize(lambda_grid.size());
  branch.second_outcomes.resize(lambda_grid.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= lambda_grid.size()) return;
      branch.outcomes[i] = minimal_solution(op, prob, lambda_grid[i], mesh, params);
      if (with_second && branch.outcomes[i].status == SolveStatus::Solution) {
        try {
          branch.second_outcomes[i] =
              second_solution(op, prob, lambda_grid[i], *branch.outcomes[i].u, params);
        } catch (const PathCollapse&) {
          SolveOutcome none;
          none.status = SolveStatus::NoSolutionDetected;
          branch.second_outcomes[i] = none;
        }
      }
    }
  };

  const int nt = std::max(1, std::min<int>(n_threads, static_cast<int>(lambda_grid.size())));
  if (nt == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return branch;
}

LambdaStarInterval detect_lambda_star(const OperatorSpec& op, const ProblemSpec& prob,
                                      const Mesh& mesh, std::pair<double, double> bracket,
                                      double tol_lambda, const SolverParams& params) {
  if (!(bracket.first < bracket.second)) throw BracketError("detect_lambda_star: lo must be < hi");
  LambdaStarInterval out;

  auto solvable = [&](double lam) {
    ++out.evaluations;
    const SolveStatus st = minimal_solution(op, prob, lam, mesh, params).status;
    if (st == SolveStatus::NoConvergence) ++out.uncertain;
    return st == SolveStatus::Solution;
  };

  double lo = bracket.first, hi = bracket.second;
  double width = hi - lo;
  int tries = 0;
  while (!solvable(lo)) {
    if (++tries > 8) throw BracketError("detect_lambda_star: no solvable lower endpoint found");
    lo -= width;
    width *= 2.0;
  }
  width = hi - lo;
  tries = 0;
  while (solvable(hi)) {
    if (++tries > 8) throw BracketError("detect_lambda_star: no unsolvable upper endpoint found");
    hi += width;
    width *= 2.0;
  }

  while (hi - lo > tol_lambda) {
    const double mid = 0.5 * (lo + hi);
    if (solvable(mid))
      lo = mid;
    else
      hi = mid;
  }
  out.lo = lo;
  out.hi = hi;
  return out;
}

LeftContinuityReport check_left_continuity(const OperatorSpec& op, const ProblemSpec& prob,
                                           const Mesh& mesh, double lambda,
                                           const std::vector<double>& deltas,
                                           const SolverParams& params) {
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (!(deltas[i] >= 0.0)) throw ConfigError("check_left_continuity: deltas must be >= 0");
    if (i > 0 && !(deltas[i] < deltas[i - 1]))
      throw ConfigError("check_left_continuity: deltas must decrease");
  }

  SolveOutcome base = minimal_solution(op, prob, lambda, mesh, params);
  if (base.status != SolveStatus::Solution)
    throw Error("check_left_continuity: no minimal solution at the base parameter");

  LeftContinuityReport rep;
  rep.deltas = deltas;
  for (double d : deltas) {
    if (d == 0.0) {
      rep.distances.push_back(0.0);
      continue;
    }
    SolveOutcome shifted = minimal_solution(op, prob, lambda - d, mesh, params);
    if (shifted.status != SolveStatus::Solution)
      throw Error("check_left_continuity: no minimal solution at a shifted parameter");
    rep.distances.push_back(c1_distance(*shifted.u, *base.u));
  }
  rep.nonincreasing = true;
  for (std::size_t i = 1; i < rep.distances.size(); ++i)
    if (rep.distances[i] > rep.distances[i - 1] * (1.0 + 1e-12)) rep.nonincreasing = false;
  return rep;
}

double picone_defect(const EigenResult& eig, const DiscreteFunction& u, const OperatorSpec& op,
                     const ProblemSpec& prob) {
  if (op.kind() != OperatorKind::PLaplace)
    throw NotPLaplace("picone_defect: defined for the p-Laplacian only");
  if (cone_check(u) != ConeLocation::InDPlus)
    throw NotPositive("picone_defect: u must be strictly positive");
  require_same_mesh(eig.u1, u);

  const Mesh& mesh = u.mesh();
  const double p = prob.p();
  // ratio v = u1^p / u^{p-1}, differentiated cell-wise from its nodal values
  std::vector<double> v(static_cast<std::size_t>(u.size()));
  for (int i = 0; i < u.size(); ++i)
    v[static_cast<std::size_t>(i)] = std::pow(eig.u1[i], p) / std::pow(u[i], p - 1.0);

  double acc = 0.0;
  for (int c = 0; c < mesh.cells(); ++c) {
    const double du1 = eig.u1.slope(c);
    const double du = u.slope(c);
    const double dv = (v[static_cast<std::size_t>(c + 1)] - v[static_cast<std::size_t>(c)]) / mesh.h();
    const double flux = du == 0.0 ? 0.0 : std::copysign(std::pow(std::abs(du), p - 1.0), du);
    acc += mesh.h() * (std::pow(std::abs(du1), p) - flux * dv);
  }
  return acc;
}

}  // namespace parobin
