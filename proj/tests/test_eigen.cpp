// Copyright (c) the parobin contributors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "oracles.hpp"
#include "parobin/eigen.hpp"
#include "parobin/energy.hpp"

using namespace parobin;

namespace {

ProblemSpec eigen_prob(double xi_c, std::array<double, 2> beta) {
  return ProblemSpec(0.0, 1.0, Potential::constant(xi_c), beta,
                     PerturbationSpec::power_sum({{0.0, 2.0}}, 2.0), 2.0);
}

}  // namespace

TEST_CASE("Neumann constant eigenpair is exact") {
  ProblemSpec prob = eigen_prob(0.0, {0.0, 0.0});
  Mesh mesh(0.0, 1.0, 256);
  EigenResult res = principal_eigenpair(2.0, prob, mesh, 1e-10, 42);
  CHECK(std::abs(res.lambda1) < 1e-8);
  for (int i = 0; i < res.u1.size(); ++i) CHECK(std::abs(res.u1[i] - 1.0) < 1e-8);
  CHECK(std::abs(norm_Lp(res.u1, 2.0) - 1.0) < 1e-10);
}

TEST_CASE("constant potential shifts the principal eigenvalue exactly") {
  Mesh mesh(0.0, 1.0, 256);
  EigenResult res = principal_eigenpair(2.0, eigen_prob(5.0, {0.0, 0.0}), mesh, 1e-10, 42);
  CHECK(res.lambda1 == doctest::Approx(5.0).epsilon(1e-10));

  EigenResult base = principal_eigenpair(2.0, eigen_prob(0.0, {1.0, 1.0}), mesh, 1e-9, 42);
  EigenResult shifted = principal_eigenpair(2.0, eigen_prob(2.5, {1.0, 1.0}), mesh, 1e-9, 42);
  CHECK(shifted.lambda1 - base.lambda1 == doctest::Approx(2.5).epsilon(1e-8));
}

TEST_CASE("Robin eigenvalue against the transcendental and finite-difference oracles") {
  // tan w = 2w/(w^2-1) on (0,1) with beta = (1,1); lambda = w^2
  const double omega = oracles::robin_tan_root(1.05, 1.5);
  CHECK(omega == doctest::Approx(1.3065).epsilon(1e-3));
  const double lambda_ref = omega * omega;

  ProblemSpec prob = eigen_prob(0.0, {1.0, 1.0});
  double prev_err = 1e300;
  for (int cells : {256, 512, 1024}) {
    Mesh mesh(0.0, 1.0, cells);
    EigenResult res = principal_eigenpair(2.0, prob, mesh, 1e-10, 42);
    const double err = std::abs(res.lambda1 - lambda_ref);
    CHECK(err < 1e-3);
    CHECK(err < prev_err);
    prev_err = err;
  }

  const double fd = oracles::fd_robin_eigenvalue([](double) { return 0.0; }, 1.0, 1.0, 0.0, 1.0,
                                                 4096);
  CHECK(fd == doctest::Approx(lambda_ref).epsilon(1e-4));
}

TEST_CASE("multistart simplicity") {
  Mesh mesh(0.0, 1.0, 128);

  SUBCASE("Neumann") {
    ProblemSpec prob = eigen_prob(0.0, {0.0, 0.0});
    EigenResult res = principal_eigenpair(2.0, prob, mesh, 1e-10, 42);
    SimplicityReport rep = check_simplicity(res, prob, mesh, 2.0, 5, 1e-10, 42);
    CHECK(rep.lambda_spread < 1e-8);
    CHECK(rep.max_c1_distance < 1e-6);
  }
  SUBCASE("Robin") {
    ProblemSpec prob = eigen_prob(0.0, {1.0, 1.0});
    EigenResult res = principal_eigenpair(2.0, prob, mesh, 1e-11, 42);
    SimplicityReport rep = check_simplicity(res, prob, mesh, 2.0, 5, 1e-11, 42);
    CHECK(rep.max_c1_distance < 1e-6);
  }
  SUBCASE("sign-changing potential") {
    ProblemSpec prob(0.0, 1.0, Potential::samples({-1.0, 2.0, -0.5, 1.0}), {0.5, 0.0},
                     PerturbationSpec::power_sum({{0.0, 2.0}}, 2.0), 2.0);
    EigenResult res = principal_eigenpair(2.0, prob, mesh, 1e-11, 42);
    SimplicityReport rep = check_simplicity(res, prob, mesh, 2.0, 5, 1e-11, 42);
    CHECK(rep.max_c1_distance < 1e-6);
  }
}

TEST_CASE("infimum property and positivity") {
  Mesh mesh(0.0, 1.0, 128);
  ProblemSpec prob(0.0, 1.0, Potential::samples({0.5, -1.0, 1.5}), {1.0, 0.3},
                   PerturbationSpec::power_sum({{0.0, 2.0}}, 2.0), 2.0);
  EigenResult res = principal_eigenpair(2.0, prob, mesh, 1e-10, 42);
  CHECK(res.u1.min() > 0.0);

  std::mt19937_64 rng(71);
  for (int k = 0; k < 100; ++k) {
    DiscreteFunction v = helpers::smooth_random(mesh, rng, 0.3 * helpers::urand(rng), 1.0);
    if (v.max_abs() < 1e-8) continue;
    CHECK(rayleigh(2.0, prob, v) >= res.lambda1 - 1e-8);
  }
}

TEST_CASE("nonlinear exponent eigenpair stays consistent") {
  // r = p = 3: no closed form, but the quotient at the minimizer must match
  // lambda1 and the residual bound must hold.
  ProblemSpec prob(0.0, 1.0, Potential::constant(0.0), {1.0, 1.0},
                   PerturbationSpec::power_sum({{0.0, 2.0}}, 3.0), 3.0);
  Mesh mesh(0.0, 1.0, 128);
  EigenResult res = principal_eigenpair(3.0, prob, mesh, 1e-8, 42);
  CHECK(res.residual < 1e-8);
  CHECK(res.u1.min() > 0.0);
  CHECK(res.lambda1 == doctest::Approx(rayleigh(3.0, prob, res.u1)));
  CHECK(std::abs(norm_Lp(res.u1, 3.0) - 1.0) < 1e-10);

  std::mt19937_64 rng(73);
  for (int k = 0; k < 50; ++k) {
    DiscreteFunction v = helpers::smooth_random(mesh, rng, 0.5, 0.8);
    CHECK(rayleigh(3.0, prob, v) >= res.lambda1 - 1e-8);
  }
}
