// Copyright (c) the parobin contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef PAROBIN_TESTS_HELPERS_HPP
#define PAROBIN_TESTS_HELPERS_HPP

#include <cmath>
#include <random>
#include <vector>

#include "parobin/energy.hpp"
#include "parobin/mesh.hpp"
#include "parobin/problem.hpp"

namespace helpers {

inline double urand(std::mt19937_64& rng) { return (rng() >> 11) * 0x1.0p-53; }

// Smooth pseudo-random profile: a low-order Fourier combination, offset so it
// can be kept positive when needed.
inline parobin::DiscreteFunction smooth_random(const parobin::Mesh& mesh, std::mt19937_64& rng,
                                               double offset = 0.0, double amplitude = 1.0) {
  std::vector<double> a(4), b(4);
  for (int k = 0; k < 4; ++k) {
    a[k] = 2.0 * urand(rng) - 1.0;
    b[k] = 2.0 * urand(rng) - 1.0;
  }
  parobin::DiscreteFunction u(mesh);
  const double L = mesh.b() - mesh.a();
  for (int i = 0; i < u.size(); ++i) {
    const double t = (mesh.node(i) - mesh.a()) / L;
    double v = 0.0;
    for (int k = 0; k < 4; ++k)
      v += a[k] * std::sin((k + 1) * M_PI * t) + b[k] * std::cos((k + 1) * M_PI * t);
    u[i] = offset + amplitude * v / 4.0;
  }
  return u;
}

// Worst relative deviation between the analytic gradient and central finite
// differences of the energy. Nodes whose neighbourhood crosses a kink can be
// excluded via skip_node.
inline double gradient_fd_error(const parobin::FunctionalSpec& spec, const parobin::OperatorSpec& op,
                                const parobin::ProblemSpec& prob, const parobin::DiscreteFunction& u,
                                const std::function<bool(int)>& skip_node = {}) {
  using namespace parobin;
  DiscreteFunction g = gradient(spec, op, prob, u);
  double worst = 0.0;
  double gmax = g.max_abs();
  for (int i = 0; i < u.size(); ++i) {
    if (skip_node && skip_node(i)) continue;
    const double eps = 1e-6 * std::max(1.0, std::abs(u[i]));
    DiscreteFunction up = u, um = u;
    up[i] += eps;
    um[i] -= eps;
    const double fd = (energy(spec, op, prob, up) - energy(spec, op, prob, um)) / (2.0 * eps);
    worst = std::max(worst, std::abs(fd - g[i]) / std::max(1e-12, gmax));
  }
  return worst;
}

inline parobin::ProblemSpec neumann_cubic(double a = 0.0, double b = 1.0) {
  // f(x) = 2x - x^3 on x >= 0
  using namespace parobin;
  return ProblemSpec(a, b, Potential::constant(0.0), {0.0, 0.0},
                     PerturbationSpec::power_sum({{2.0, 2.0}, {-1.0, 4.0}}, 2.0), 2.0);
}

inline parobin::ProblemSpec sqrt_perturbation(double beta_l = 0.0, double beta_r = 0.0) {
  // f(x) = sqrt(x): strictly positive sublinear (H(f)'_1-type) for p = 2
  using namespace parobin;
  return ProblemSpec(0.0, 1.0, Potential::constant(0.0), {beta_l, beta_r},
                     PerturbationSpec::power_sum({{1.0, 1.5}}, 2.0), 2.0);
}

}  // namespace helpers

#endif
