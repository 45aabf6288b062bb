// Copyright (c) the parobin contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef PAROBIN_SRC_NEWTON1D_HPP
#define PAROBIN_SRC_NEWTON1D_HPP

#include <cmath>
#include <functional>
#include <vector>

#include "parobin/mesh.hpp"
#include "tridiag.hpp"

namespace parobin::detail {

// Damped Newton for strictly convex inner energies of the form
// sum_c h W(s_c) + sum_i V_i(u_i): the gradient system is symmetric
// tridiagonal and the Newton direction descends the energy, so an Armijo
// line search on the energy converges globally.
struct Newton1D {
  // cell term: energy density W(s), flux W'(s) and its derivative
  std::function<void(double s, double& W, double& f, double& df)> cell;
  // nodal term: V_i(u), V_i'(u), V_i''(u) (weights and boundary included)
  std::function<void(int i, double u, double& V, double& g, double& dg)> node;

  // Improves u in place; returns the achieved residual inf-norm.
  double solve(const Mesh& mesh, std::vector<double>& u, double tol, int max_newton = 80) const {
    const int n = mesh.nodes();
    std::vector<double> g(n), diag(n), sub(n), cand(n);

    auto assemble = [&](const std::vector<double>& x, std::vector<double>& out_g,
                        std::vector<double>* out_diag, std::vector<double>* out_sub) {
      double energy = 0.0;
      std::fill(out_g.begin(), out_g.end(), 0.0);
      if (out_diag) std::fill(out_diag->begin(), out_diag->end(), 0.0);
      if (out_sub) std::fill(out_sub->begin(), out_sub->end(), 0.0);
      for (int c = 0; c < mesh.cells(); ++c) {
        const double s = (x[c + 1] - x[c]) / mesh.h();
        double W, f, df;
        cell(s, W, f, df);
        energy += mesh.h() * W;
        out_g[c] -= f;
        out_g[c + 1] += f;
        if (out_diag) {
          const double k = std::max(df, 1e-14) / mesh.h();
          (*out_diag)[c] += k;
          (*out_diag)[c + 1] += k;
          (*out_sub)[c + 1] = -k;
        }
      }
      for (int i = 0; i < n; ++i) {
        double V, gv, dgv;
        node(i, x[i], V, gv, dgv);
        energy += V;
        out_g[i] += gv;
        if (out_diag) (*out_diag)[i] += std::max(dgv, 1e-14);
      }
      return energy;
    };

    auto inf = [](const std::vector<double>& v) {
      double m = 0.0;
      for (double x : v) m = std::max(m, std::abs(x));
      return m;
    };

    double e = assemble(u, g, nullptr, nullptr);
    double gn = inf(g);
    for (int it = 0; it < max_newton && gn > tol; ++it) {
      assemble(u, g, &diag, &sub);
      std::vector<double> step = solve_tridiag_sym(sub, diag, g);
      double slope = 0.0;  // directional derivative along -step
      for (int i = 0; i < n; ++i) slope -= g[i] * step[i];
      double t = 1.0;
      bool accepted = false;
      for (int ls = 0; ls < 60; ++ls) {
        for (int i = 0; i < n; ++i) cand[i] = u[i] - t * step[i];
        std::vector<double> gc(n);
        const double ec = assemble(cand, gc, nullptr, nullptr);
        if (std::isfinite(ec) && ec <= e + 1e-4 * t * slope) {
          u.swap(cand);
          g.swap(gc);
          e = ec;
          gn = inf(g);
          accepted = true;
          break;
        }
        t *= 0.5;
      }
      if (!accepted) break;
    }
    return gn;
  }
};

}  // namespace parobin::detail

#endif
