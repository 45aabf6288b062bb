// Copyright (c) the parobin contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef PAROBIN_ENERGY_HPP
#define PAROBIN_ENERGY_HPP

#include <optional>
#include <vector>

#include "parobin/diffop.hpp"
#include "parobin/mesh.hpp"
#include "parobin/problem.hpp"

namespace parobin {

// Discrete energy functionals. Zero-order integrands use the nodal trapezoid
// rule so their analytic gradients are diagonal; the gradient-term integrand
// G(Du) is exact per cell since Du is cell-constant.
enum class Family {
  Mu,          // int p G(Du) + int xi |u|^p + boundary
  PhiLambda,   // (1/p) mu + (eta/p)||u||_p^p - int E_lambda(z,u)
  TruncCap,    // reaction frozen above a barrier (f-based, or auxiliary-based
               // when aux coefficients are present)
  TruncFloor,  // reaction frozen below a barrier
  AuxPsi,      // int G(Du) + (1/p) int |xi||u|^p + boundary/p + (1/p)||u^-||_p^p
               // + (c10/r)||u^+||_r^r - (c9/q)||u^+||_q^q
  SuperPsi,    // (1/p) mu + (eta/p)||u^-||_p^p - (lambda/p)||u^+||_p^p - int F(z,u^+)
  RobinW,      // same assembly as SuperPsi (the p-Laplacian special case)
};

struct AuxCoeffs {
  double c9 = 1.0;
  double c10 = 1.0;
  double q = 2.0;
  double r = 4.0;
};

struct FunctionalSpec {
  Family family = Family::Mu;
  double lambda = 0.0;
  double eta = 0.0;
  std::optional<DiscreteFunction> barrier;
  std::optional<AuxCoeffs> aux;

  void validate(const ProblemSpec& prob) const;
};

double assemble_mu(const OperatorSpec& op, const ProblemSpec& prob, const DiscreteFunction& u);

double energy(const FunctionalSpec& spec, const OperatorSpec& op, const ProblemSpec& prob,
              const DiscreteFunction& u);

DiscreteFunction gradient(const FunctionalSpec& spec, const OperatorSpec& op,
                          const ProblemSpec& prob, const DiscreteFunction& u);

// Rayleigh quotient of the r-exponent eigenvalue problem.
double rayleigh(double r, const ProblemSpec& prob, const DiscreteFunction& u);

struct DiazSaaProbe {
  DiscreteFunction u1;
  DiscreteFunction u2;
  int segment_points = 9;  // m >= 3
  double q_convexity = 2.0;
};

struct DiazSaaReport {
  double max_violation = 0.0;
  std::vector<double> values;  // l along the segment
  bool pass(double tol = 1e-8) const { return max_violation <= tol; }
};

// Samples l along t -> ((1-t) u1^q + t u2^q)^{1/q} and reports the largest
// chord-test convexity violation.
DiazSaaReport diaz_saa_convexity(const DiazSaaProbe& probe, const OperatorSpec& op,
                                 const ProblemSpec& prob);

}  // namespace parobin

#endif
