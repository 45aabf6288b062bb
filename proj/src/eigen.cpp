// Copyright (c) the parobin contributors.
// SPDX-License-Identifier: Apache-2.0

#include "parobin/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "parobin/energy.hpp"
#include "newton1d.hpp"

namespace parobin {

namespace {

double sgn(double x) { return (x > 0) - (x < 0); }
double abspow_signed(double x, double e) {
  return x == 0.0 ? 0.0 : sgn(x) * std::pow(std::abs(x), e);
}

// Gradient of (1/r)(mu_r(u) - lambda ||u||_r^r); its max-norm is the
// eigen residual.
void eigen_residual_vec(double r, const ProblemSpec& prob, const Mesh& mesh,
                        const std::vector<double>& u, double lambda, std::vector<double>& out) {
  const int n = mesh.nodes();
  std::fill(out.begin(), out.end(), 0.0);
  for (int c = 0; c < mesh.cells(); ++c) {
    const double s = (u[c + 1] - u[c]) / mesh.h();
    const double fl = abspow_signed(s, r - 1.0);
    out[c] -= fl;
    out[c + 1] += fl;
  }
  for (int i = 0; i < n; ++i) {
    const double xi = prob.xi_at(mesh.node(i));
    out[i] += mesh.weight(i) * (xi - lambda) * abspow_signed(u[i], r - 1.0);
  }
  out[0] += prob.beta()[0] * abspow_signed(u[0], r - 1.0);
  out[n - 1] += prob.beta()[1] * abspow_signed(u[n - 1], r - 1.0);
}

double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

void normalize_Lr(const Mesh& mesh, double r, std::vector<double>& u) {
  double s = 0.0;
  for (int i = 0; i < mesh.nodes(); ++i) s += mesh.weight(i) * std::pow(std::abs(u[i]), r);
  const double nrm = std::pow(s, 1.0 / r);
  if (!(nrm > 0.0)) throw ZeroFunction("eigen: iterate collapsed to zero");
  for (double& x : u) x /= nrm;
}

EigenResult eigenpair_from(double r, const ProblemSpec& prob, const Mesh& mesh, double tol,
                           std::vector<double> u, int max_outer) {
  const int n = mesh.nodes();
  const double shift = prob.xi_inf_norm() + 1.0;

  normalize_Lr(mesh, r, u);
  std::vector<double> source(n), rvec(n);
  DiscreteFunction uf(mesh, u);
  double lambda = rayleigh(r, prob, uf);

  // The shifted subproblem is strictly convex with a tridiagonal Jacobian;
  // one damped Newton solve handles every exponent (a single step when r=2).
  detail::Newton1D newton;
  newton.cell = [r](double s, double& W, double& f, double& df) {
    W = std::pow(std::abs(s), r) / r;
    f = abspow_signed(s, r - 1.0);
    df = (r - 1.0) * std::pow(std::max(std::abs(s), 1e-12), r - 2.0);
  };
  newton.node = [&](int i, double x, double& V, double& g, double& dg) {
    const double w = mesh.weight(i);
    const double xi = prob.xi_at(mesh.node(i));
    const double edge = (i == 0) ? prob.beta()[0] : (i == n - 1) ? prob.beta()[1] : 0.0;
    const double coef = w * (xi + shift) + edge;
    V = coef / r * std::pow(std::abs(x), r) - w * source[i] * x;
    g = coef * abspow_signed(x, r - 1.0) - w * source[i];
    dg = coef * (r - 1.0) * std::pow(std::max(std::abs(x), 1e-12), r - 2.0);
  };

  int outer = 0;
  for (; outer < max_outer; ++outer) {
    eigen_residual_vec(r, prob, mesh, u, lambda, rvec);
    const double res = inf_norm(rvec);
    if (res <= tol) {
      EigenResult out{lambda, DiscreteFunction(mesh, u), outer, res};
      return out;
    }
    // Inexact inverse iteration: subproblem accuracy tracks the outer
    // residual instead of a fixed tight tolerance.
    const double sub_tol = std::clamp(0.02 * res, 1e-13, std::min(0.05 * tol, 1e-9));

    for (int i = 0; i < n; ++i) source[i] = abspow_signed(u[i], r - 1.0);
    std::vector<double> next = u;
    const double achieved = newton.solve(mesh, next, sub_tol);
    bool progressed = true;
    if (achieved > sub_tol) {
      std::vector<double> g0(n);
      // keep the partial Newton progress unless the solve went nowhere
      eigen_residual_vec(r, prob, mesh, u, lambda, g0);
      progressed = achieved < 0.9 * inf_norm(g0) + 1e-14;
    }
    if (!progressed) {
      // Fall back to projected gradient descent on the quotient.
      eigen_residual_vec(r, prob, mesh, u, lambda, rvec);
      double step = 1.0 / std::max(1.0, inf_norm(rvec));
      next = u;
      for (int ls = 0; ls < 40; ++ls) {
        std::vector<double> cand = u;
        for (int i = 0; i < n; ++i) cand[i] -= step * rvec[i];
        normalize_Lr(mesh, r, cand);
        if (rayleigh(r, prob, DiscreteFunction(mesh, cand)) < lambda) {
          next = std::move(cand);
          break;
        }
        step *= 0.5;
      }
    }
    u = std::move(next);
    normalize_Lr(mesh, r, u);
    lambda = rayleigh(r, prob, DiscreteFunction(mesh, u));
  }
  throw NoConvergenceError("principal_eigenpair: no convergence within max outer iterations");
}

}  // namespace

EigenResult principal_eigenpair(double r, const ProblemSpec& prob, const Mesh& mesh, double tol,
                                std::uint64_t seed, int max_outer) {
  if (!(r > 1.0)) throw ConfigError("principal_eigenpair: need r > 1");
  if (!(tol > 0.0)) throw ConfigError("principal_eigenpair: need tol > 0");
  (void)seed;  // the default start is deterministic; seeds matter for multistart
  std::vector<double> u0(static_cast<std::size_t>(mesh.nodes()), 1.0);
  EigenResult res = eigenpair_from(r, prob, mesh, tol, std::move(u0), max_outer);

  // The quotient is even, so |u| is also a minimizer; return the positive
  // normalized representative.
  std::vector<double> v = res.u1.values();
  for (double& x : v) x = std::abs(x);
  normalize_Lr(mesh, r, v);
  res.u1 = DiscreteFunction(mesh, v);
  res.lambda1 = rayleigh(r, prob, res.u1);
  std::vector<double> rvec(v.size());
  eigen_residual_vec(r, prob, mesh, v, res.lambda1, rvec);
  res.residual = inf_norm(rvec);
  return res;
}

SimplicityReport check_simplicity(const EigenResult& res, const ProblemSpec& prob,
                                  const Mesh& mesh, double r, int n_starts, double tol,
                                  std::uint64_t seed) {
  if (n_starts < 5) throw ConfigError("check_simplicity: need n_starts >= 5");
  SimplicityReport rep;
  rep.starts = n_starts;
  for (int k = 0; k < n_starts; ++k) {
    std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ULL * (k + 1));
    std::vector<double> u0(static_cast<std::size_t>(mesh.nodes()));
    for (double& x : u0) x = 0.5 + (rng() >> 11) * 0x1.0p-53;
    EigenResult r2 = eigenpair_from(r, prob, mesh, tol, std::move(u0), 500);
    std::vector<double> v = r2.u1.values();
    for (double& x : v) x = std::abs(x);
    normalize_Lr(mesh, r, v);
    DiscreteFunction cand(mesh, v);
    rep.max_c1_distance = std::max(rep.max_c1_distance, c1_distance(cand, res.u1));
    rep.lambda_spread =
        std::max(rep.lambda_spread, std::abs(rayleigh(r, prob, cand) - res.lambda1));
  }
  return rep;
}

}  // namespace parobin
