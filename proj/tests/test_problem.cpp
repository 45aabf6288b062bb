// Copyright (c) the parobin contributors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "oracles.hpp"
#include "parobin/problem.hpp"

using namespace parobin;

namespace {

ProblemSpec with_f(PerturbationSpec f, double p) {
  return ProblemSpec(0.0, 1.0, Potential::constant(0.0), {0.0, 0.0}, std::move(f), p);
}

}  // namespace

TEST_CASE("perturbation point values") {
  ProblemSpec sub = with_f(PerturbationSpec::sublinear_example(1.5, 2.0, 2.5, 1.8), 3.0);
  CHECK(sub.f(0.5, 1.0) == doctest::Approx(-1.0));
  CHECK(sub.f(0.5, -3.0) == 0.0);

  ProblemSpec ar = with_f(PerturbationSpec::superlinear_ar(1.5, 1.8, 2.0, 4.0), 2.0);
  CHECK(ar.f(0.0, 2.0) == doctest::Approx(4.0));  // x^3 - 2x at x = 2
  CHECK(ar.f(0.0, -1.0) == 0.0);
}

TEST_CASE("primitive F") {
  ProblemSpec lin = with_f(PerturbationSpec::power_sum({{1.0, 2.0}}, 2.0), 2.0);
  CHECK(lin.F(0.0, 2.0) == doctest::Approx(2.0));
  CHECK(lin.F(0.0, 0.0) == 0.0);

  ProblemSpec ar = with_f(PerturbationSpec::superlinear_ar(1.5, 1.8, 2.0, 4.0), 2.0);
  for (double x : {0.4, 1.0, 2.0, 3.7}) {
    const double ref =
        oracles::adaptive_simpson_oracle([&](double s) { return ar.f(0.0, s); }, 0.0, x);
    CHECK(ar.F(0.0, x) == doctest::Approx(ref).epsilon(1e-9));
  }

  ProblemSpec nar = with_f(PerturbationSpec::superlinear_non_ar(1.5, 1.8, 2.0), 2.0);
  for (double x : {0.7, 1.9, 3.2}) {
    const double ref =
        oracles::adaptive_simpson_oracle([&](double s) { return nar.f(0.0, s); }, 0.0, x);
    CHECK(nar.F(0.0, x) == doctest::Approx(ref).epsilon(1e-9));
  }
}

TEST_CASE("d(z,x) = f x - p F") {
  ProblemSpec cubic = with_f(PerturbationSpec::power_sum({{1.0, 4.0}}, 2.0), 2.0);
  CHECK(cubic.d(0.0, 1.0) == doctest::Approx(0.5));
  CHECK(cubic.d(0.0, 0.0) == 0.0);

  // Quasimonotonicity scan for the superlinear AR example: d dips by exactly
  // F-bookkeeping amounts below the breakpoint and increases beyond it; the
  // empirical slack is 1/9 for these exponents.
  ProblemSpec ar = with_f(PerturbationSpec::superlinear_ar(1.5, 1.8, 2.0, 4.0), 2.0);
  double max_decrease = 0.0, prev = 0.0;
  double running_max = -1e300;
  const double dx = 5.0 / 2000.0;
  for (int k = 0; k <= 2000; ++k) {
    const double x = k * dx;
    const double d = ar.d(0.0, x);
    running_max = std::max(running_max, d);
    max_decrease = std::max(max_decrease, running_max - d);
    if (x - dx >= 1.0) CHECK(d >= prev - 1e-12);  // nondecreasing past the breakpoint
    prev = d;
  }
  CHECK(max_decrease == doctest::Approx(1.0 / 9.0).epsilon(1e-3));
}

TEST_CASE("truncated reactions") {
  ProblemSpec cubic = with_f(PerturbationSpec::power_sum({{1.0, 4.0}}, 2.0), 2.0);
  Mesh mesh(0.0, 1.0, 8);

  TruncatedReaction plain{TruncationMode::PlainShifted, 1.0, 2.0, std::nullopt};
  CHECK(eval_truncated(plain, cubic, mesh, 3, -1.0) == 0.0);

  TruncatedReaction cap{TruncationMode::CapAbove, 0.0, 2.0, DiscreteFunction(mesh, 1.0)};
  CHECK(eval_truncated(cap, cubic, mesh, 3, 5.0) == doctest::Approx(3.0));
  CHECK(eval_truncated(cap, cubic, mesh, 3, -1.0) == 0.0);

  TruncatedReaction floor{TruncationMode::FloorBelow, 1.0, 2.0, DiscreteFunction(mesh, 1.0)};
  CHECK(eval_truncated(floor, cubic, mesh, 3, 0.5) == doctest::Approx(4.0));

  TruncatedReaction missing{TruncationMode::CapAbove, 0.0, 2.0, std::nullopt};
  CHECK_THROWS_AS(eval_truncated(missing, cubic, mesh, 0, 1.0), BarrierMissing);
}

TEST_CASE("truncated reaction equals the plain shifted one on the untruncated region") {
  ProblemSpec ar = with_f(PerturbationSpec::superlinear_ar(1.5, 1.8, 2.0, 4.0), 2.0);
  Mesh mesh(0.0, 1.0, 8);
  const double lambda = -1.0, eta = 2.0;
  DiscreteFunction barrier(mesh, 1.7);
  TruncatedReaction cap{TruncationMode::CapAbove, lambda, eta, barrier};
  TruncatedReaction floor{TruncationMode::FloorBelow, lambda, eta, barrier};
  auto plain = [&](double x) {
    return (lambda + eta) * std::pow(x, 1.0) + ar.f(0.5, x);
  };
  for (double x : {0.3, 1.0, 1.69}) {
    CHECK(eval_truncated(cap, ar, mesh, 4, x) == doctest::Approx(plain(x)).epsilon(1e-14));
  }
  for (double x : {1.71, 2.5, 6.0}) {
    CHECK(eval_truncated(floor, ar, mesh, 4, x) == doctest::Approx(plain(x)).epsilon(1e-14));
  }
}

TEST_CASE("primitive consistency of built-in perturbations by central differences") {
  std::vector<ProblemSpec> probs = {
      with_f(PerturbationSpec::sublinear_example(1.5, 2.0, 2.5, 1.8), 3.0),
      with_f(PerturbationSpec::superlinear_ar(1.5, 1.8, 2.0, 4.0), 2.0),
      with_f(PerturbationSpec::superlinear_non_ar(1.5, 1.8, 2.0), 2.0),
      with_f(PerturbationSpec::power_sum({{2.0, 2.0}, {-1.0, 4.0}}, 2.0), 2.0)};
  for (const auto& prob : probs) {
    for (double x : {0.25, 0.8, 1.4, 3.0}) {  // away from the breakpoint at 1
      if (std::abs(x - 1.0) < 1e-3) continue;
      const double eps = 1e-6 * std::max(1.0, x);
      const double fd = (prob.F(0.0, x + eps) - prob.F(0.0, x - eps)) / (2.0 * eps);
      CHECK(fd == doctest::Approx(prob.f(0.0, x)).epsilon(1e-6));
    }
  }
}

TEST_CASE("growth classes behave as flagged") {
  ProblemSpec sub = with_f(PerturbationSpec::sublinear_example(1.5, 2.0, 2.5, 1.8), 3.0);
  CHECK(sub.perturbation().flags().sublinear_H1);
  double prev_ratio = 1e300;
  for (double x = 1e2; x <= 1e6; x *= 10.0) {
    const double ratio = sub.f(0.0, x) / std::pow(x, sub.p() - 1.0);
    CHECK(ratio < prev_ratio);
    prev_ratio = ratio;
  }

  ProblemSpec ar = with_f(PerturbationSpec::superlinear_ar(1.5, 1.8, 2.0, 4.0), 2.0);
  CHECK(ar.perturbation().flags().superlinear_H2);
  double prev = 0.0;
  for (double x = 1e2; x <= 1e6; x *= 10.0) {
    const double ratio = ar.F(0.0, x) / std::pow(x, ar.p());
    CHECK(ratio > prev);
    prev = ratio;
  }
}

TEST_CASE("power sum class flags") {
  auto pos_sub = PerturbationSpec::power_sum({{1.0, 1.5}}, 2.0);
  CHECK(pos_sub.flags().strictly_positive);
  CHECK(pos_sub.flags().sublinear_H1);
  CHECK(pos_sub.flags().unique_H1pp);
  auto cubic = PerturbationSpec::power_sum({{2.0, 2.0}, {-1.0, 4.0}}, 2.0);
  CHECK_FALSE(cubic.flags().strictly_positive);
  CHECK_FALSE(cubic.flags().superlinear_H2);  // negative leading coefficient
  auto pure = PerturbationSpec::power_sum({{1.0, 4.0}}, 2.0);
  CHECK(pure.flags().superlinear_H2);
}

TEST_CASE("estimate_xi_hat") {
  ProblemSpec monotone = with_f(PerturbationSpec::power_sum({{1.0, 2.0}}, 2.0), 2.0);
  CHECK(estimate_xi_hat(monotone, 5.0) == 0.0);

  ProblemSpec neg = with_f(PerturbationSpec::power_sum({{-1.0, 2.0}}, 2.0), 2.0);
  CHECK(estimate_xi_hat(neg, 1.0) == doctest::Approx(1.0));

  ProblemSpec ar = with_f(PerturbationSpec::superlinear_ar(1.5, 1.8, 2.0, 4.0), 2.0);
  const double xi_hat = estimate_xi_hat(ar, 3.0);
  CHECK(xi_hat < 1e6);
  // fine-grid rescan confirms monotonicity of f + xi_hat x^{p-1}
  double prev = 0.0;
  for (int k = 1; k <= 20000; ++k) {
    const double x = 3.0 * k / 20000.0;
    const double g = ar.f(0.0, x) + xi_hat * x;
    CHECK(g >= prev - 1e-10);
    prev = g;
  }
}

TEST_CASE("potential variants and validation") {
  Potential xi = Potential::samples({-1.0, 2.0, 0.5});
  CHECK(xi.inf_norm() == 2.0);
  CHECK(xi.eval(0.0, 0.0, 1.0) == doctest::Approx(-1.0));
  CHECK(xi.eval(0.25, 0.0, 1.0) == doctest::Approx(0.5));
  CHECK(xi.eval(1.0, 0.0, 1.0) == doctest::Approx(0.5));

  CHECK_THROWS_AS(ProblemSpec(0.0, 1.0, Potential::constant(0.0), {-1.0, 0.0},
                              PerturbationSpec::power_sum({{1.0, 2.0}}, 2.0), 2.0),
                  ConfigError);
  CHECK_THROWS_AS(PerturbationSpec::sublinear_example(2.5, 2.0, 2.5, 1.8), ConfigError);
}
