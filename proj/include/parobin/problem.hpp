// Copyright (c) the parobin contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef PAROBIN_PROBLEM_HPP
#define PAROBIN_PROBLEM_HPP

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "parobin/errors.hpp"
#include "parobin/mesh.hpp"

namespace parobin {

enum class PerturbationKind {
  SublinearExample,   // x^{tau-1} - 2 x^{q-1} on [0,1], x^{r-1} - 2 x^{s-1} beyond
  SuperlinearAR,      // x^{tau-1} - 2 x^{theta-1} on [0,1], x^{r-1} - 2 x^{p-1} beyond
  SuperlinearNonAR,   // x^{tau-1} - 2 x^{theta-1} on [0,1], x^{p-1}(ln x - 1) beyond
  PowerSum,           // sum_k c_k x^{e_k - 1}
  Custom,             // user callable; primitive by adaptive quadrature
};

struct PowerTerm {
  double coef = 0.0;
  double exponent = 2.0;  // exponent of the primitive; f carries exponent-1
};

struct ClassFlags {
  bool sublinear_H1 = false;
  bool strictly_positive = false;
  bool superlinear_H2 = false;
  bool unique_H1pp = false;
};

// The reaction perturbation f(z, x). All built-ins vanish for x <= 0 and at
// x = 0; breakpoint continuity of the piecewise kinds is enforced on
// construction.
class PerturbationSpec {
 public:
  static PerturbationSpec sublinear_example(double tau, double q, double r, double s);
  static PerturbationSpec superlinear_ar(double tau, double theta, double p, double r);
  static PerturbationSpec superlinear_non_ar(double tau, double theta, double p);
  static PerturbationSpec power_sum(std::vector<PowerTerm> terms, double p);
  static PerturbationSpec custom(std::function<double(double, double)> f, ClassFlags flags,
                                 double growth_r, double floor_s = 1.5);

  PerturbationKind kind() const { return kind_; }
  const ClassFlags& flags() const { return flags_; }
  // Growth exponent r of the superlinear classes (p < r < p*), also used as
  // the r of the auxiliary reaction.
  double growth_r() const { return r_; }
  // Exponent s of the small-x floor c x^{s-1} <= f, feeding the auxiliary
  // reaction in the superlinear case.
  double floor_exponent() const;
  double tau() const { return tau_; }
  double q() const { return q_; }
  double s() const { return s_; }
  double theta() const { return theta_; }
  const std::vector<PowerTerm>& terms() const { return terms_; }

  double f(double z, double x) const;
  double F(double z, double x) const;  // primitive, F(z,0) = 0

  std::string kind_name() const;

 private:
  PerturbationSpec() = default;
  void check_breakpoint() const;

  PerturbationKind kind_ = PerturbationKind::PowerSum;
  double tau_ = 0, q_ = 0, r_ = 0, s_ = 0, theta_ = 0;
  std::vector<PowerTerm> terms_;
  std::function<double(double, double)> custom_f_;
  ClassFlags flags_;
};

// Bounded potential xi, either constant or piecewise-linear nodal samples
// over the problem interval.
class Potential {
 public:
  Potential() : const_value_(0.0) {}
  static Potential constant(double c);
  static Potential samples(std::vector<double> values);  // uniform over the interval

  double eval(double z, double a, double b) const;
  double inf_norm() const;
  bool is_constant() const { return samples_.empty(); }
  double constant_value() const { return const_value_; }
  const std::vector<double>& sample_values() const { return samples_; }

 private:
  double const_value_;
  std::vector<double> samples_;
};

class ProblemSpec {
 public:
  ProblemSpec(double a_left, double a_right, Potential xi, std::array<double, 2> beta,
              PerturbationSpec f, double p);

  double a_left() const { return a_left_; }
  double a_right() const { return a_right_; }
  const Potential& xi() const { return xi_; }
  double xi_at(double z) const { return xi_.eval(z, a_left_, a_right_); }
  double xi_inf_norm() const { return xi_inf_norm_; }
  const std::array<double, 2>& beta() const { return beta_; }
  const PerturbationSpec& perturbation() const { return f_; }
  double p() const { return p_; }

  double f(double z, double x) const { return f_.f(z, x); }
  double F(double z, double x) const { return f_.F(z, x); }
  // d(z,x) = f(z,x) x - p F(z,x)
  double d(double z, double x) const;

  Mesh make_mesh(int cells) const { return Mesh(a_left_, a_right_, cells); }

 private:
  double a_left_, a_right_;
  Potential xi_;
  std::array<double, 2> beta_;
  PerturbationSpec f_;
  double p_;
  double xi_inf_norm_;
};

// Truncated reactions used by the solver layers.
enum class TruncationMode {
  PlainShifted,  // 0 below zero, (lambda+eta) x^{p-1} + f above
  CapAbove,      // frozen at the barrier value for x beyond the barrier
  FloorBelow,    // frozen at the barrier value for all x below the barrier
};

struct TruncatedReaction {
  TruncationMode mode = TruncationMode::PlainShifted;
  double lambda = 0.0;
  double eta = 0.0;
  std::optional<DiscreteFunction> barrier;

  void validate(const ProblemSpec& prob) const;
};

double eval_truncated(const TruncatedReaction& tr, const ProblemSpec& prob, const Mesh& mesh,
                      int node, double x);

// Primitive of the truncated reaction in x (vanishing at 0), closed form.
double eval_truncated_primitive(const TruncatedReaction& tr, const ProblemSpec& prob,
                                const Mesh& mesh, int node, double x);

// Smallest xi_hat >= 0 on a doubling candidate ladder such that
// x -> f(z,x) + xi_hat x^{p-1} is nondecreasing on a grid over [0, rho].
double estimate_xi_hat(const ProblemSpec& prob, double rho);

// Adaptive Simpson quadrature (used for Custom primitives; abs tol 1e-10).
double adaptive_simpson(const std::function<double(double)>& g, double a, double b,
                        double tol = 1e-10);

}  // namespace parobin

#endif
