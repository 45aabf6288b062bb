// Copyright (c) the parobin contributors.
// SPDX-License-Identifier: Apache-2.0

#include "parobin/lbfgs.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace parobin {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double inf_norm(const std::vector<double>& a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

struct Pair {
  std::vector<double> s, y;
  double rho;
};

}  // namespace

LbfgsResult minimize_lbfgs(const EnergyGradient& fg, std::vector<double> x0,
                           const LbfgsOptions& opts) {
  const std::size_t n = x0.size();
  LbfgsResult res;
  res.x = std::move(x0);

  std::vector<double> g(n), g_new(n), x_new(n), d(n);
  double f = fg(res.x, g);
  std::deque<Pair> mem;
  bool just_reset = true;

  for (int it = 0; it < opts.max_iters; ++it) {
    res.iterations = it;
    res.f = f;
    res.grad_inf = inf_norm(g);
    if (res.grad_inf <= opts.tol_grad_inf) {
      res.status = LbfgsStatus::Converged;
      return res;
    }
    if (inf_norm(res.x) > opts.divergence_inf) {
      res.status = LbfgsStatus::Diverged;
      return res;
    }

    // Two-loop recursion.
    d = g;
    std::vector<double> alpha(mem.size());
    for (std::size_t k = mem.size(); k-- > 0;) {
      alpha[k] = mem[k].rho * dot(mem[k].s, d);
      for (std::size_t i = 0; i < n; ++i) d[i] -= alpha[k] * mem[k].y[i];
    }
    if (opts.apply_h0) {
      opts.apply_h0(d);
    } else if (!mem.empty()) {
      const double gamma = dot(mem.back().s, mem.back().y) / dot(mem.back().y, mem.back().y);
      for (double& v : d) v *= gamma;
    }
    for (std::size_t k = 0; k < mem.size(); ++k) {
      const double beta = mem[k].rho * dot(mem[k].y, d);
      for (std::size_t i = 0; i < n; ++i) d[i] += (alpha[k] - beta) * mem[k].s[i];
    }
    for (double& v : d) v = -v;

    double gd = dot(g, d);
    if (!(gd < 0.0)) {  // not a descent direction: drop curvature info
      mem.clear();
      d = g;
      if (opts.apply_h0) opts.apply_h0(d);
      for (double& v : d) v = -v;
      gd = dot(g, d);
      if (!(gd < 0.0)) {
        for (std::size_t i = 0; i < n; ++i) d[i] = -g[i];
        gd = -dot(g, g);
      }
      just_reset = true;
    }

    // Backtracking Armijo line search.
    double t = just_reset ? std::min(1.0, 1.0 / std::max(1.0, inf_norm(d))) : 1.0;
    bool accepted = false;
    double f_new = f;
    for (int ls = 0; ls < opts.max_line_search; ++ls) {
      for (std::size_t i = 0; i < n; ++i) x_new[i] = res.x[i] + t * d[i];
      f_new = fg(x_new, g_new);
      if (std::isfinite(f_new) && f_new <= f + opts.armijo_c1 * t * gd) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      if (!mem.empty()) {  // retry from a fresh steepest-descent state
        mem.clear();
        just_reset = true;
        continue;
      }
      res.status = LbfgsStatus::Stalled;
      return res;
    }

    Pair pr;
    pr.s.resize(n);
    pr.y.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      pr.s[i] = x_new[i] - res.x[i];
      pr.y[i] = g_new[i] - g[i];
    }
    const double sy = dot(pr.s, pr.y);
    if (sy > 1e-14 * std::sqrt(dot(pr.s, pr.s)) * std::sqrt(dot(pr.y, pr.y))) {
      pr.rho = 1.0 / sy;
      mem.push_back(std::move(pr));
      if (static_cast<int>(mem.size()) > opts.memory) mem.pop_front();
    }
    res.x.swap(x_new);
    g.swap(g_new);
    f = f_new;
    just_reset = false;
  }
  res.f = f;
  res.grad_inf = inf_norm(g);
  res.status = LbfgsStatus::MaxIters;
  return res;
}

}  // namespace parobin
