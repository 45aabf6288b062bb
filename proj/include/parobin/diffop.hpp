// Copyright (c) the parobin contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef PAROBIN_DIFFOP_HPP
#define PAROBIN_DIFFOP_HPP

#include <optional>
#include <string>
#include <vector>

#include "parobin/errors.hpp"

namespace parobin {

// The built-in operator maps a(y) = a0(|y|) y.
enum class OperatorKind {
  PLaplace,        // a(y) = |y|^{p-2} y
  PQLaplace,       // a(y) = |y|^{p-2} y + |y|^{q-2} y, 1 < q < p
  PMeanCurvature,  // a(y) = (1+|y|^2)^{(p-2)/2} y
  Perturbed,       // a(y) = |y|^{p-2} y (1 + 1/(1+|y|^p))
  Tabulated,       // a0 from monotone-cubic interpolation of user samples
};

// Recorded growth witnesses (c1 t^{p-1} <= theta(t) <= c2 (t^{tau-1}+t^{p-1}),
// c_hat <= theta'(t) t / theta(t) <= c0). They are inputs to the audit, never
// re-derived from a itself.
struct GrowthWitness {
  double c_hat = 1.0;
  double c0 = 1.0;
  double c1 = 1.0;
  double c2 = 1.0;
  double tau = 1.0;
};

struct HypothesisItem {
  std::string name;
  bool pass = false;
  double max_violation = 0.0;
};

struct HypothesisReport {
  std::vector<HypothesisItem> items;
  double fitted_c5 = 0.0;
  bool pass() const {
    for (const auto& it : items)
      if (!it.pass) return false;
    return true;
  }
};

class OperatorSpec {
 public:
  static OperatorSpec p_laplace(double p);
  static OperatorSpec pq_laplace(double p, double q_secondary);
  static OperatorSpec p_mean_curvature(double p);
  static OperatorSpec perturbed_p_laplace(double p);
  // a0 sampled at strictly increasing positive abscissae; G0 by quadrature.
  static OperatorSpec tabulated(double p, std::vector<double> t_samples,
                                std::vector<double> a0_samples, double q_convexity);

  OperatorKind kind() const { return kind_; }
  double p() const { return p_; }
  std::optional<double> q_secondary() const { return q_secondary_; }
  double q_convexity() const { return q_convexity_; }
  const GrowthWitness& witness() const { return witness_; }
  double regularization_eps() const { return regularization_eps_; }

  OperatorSpec& set_q_convexity(double q);
  OperatorSpec& set_witness(const GrowthWitness& w) {
    witness_ = w;
    return *this;
  }
  OperatorSpec& set_regularization_eps(double eps);

  // a(y) = a0(|y|) y. Total on finite inputs; closed forms avoid division.
  double flux(double y) const;
  // G(y) = G0(|y|), the primitive of t -> a0(t) t, G(0) = 0.
  double energy_density(double y) const;
  // a0(t) t, total at t = 0.
  double flux_mag(double t) const;
  // a0(t); clamped at regularization_eps (division by t).
  double a0(double t) const;
  // d/dy [a0(|y|) y]; a grad-a quantity, so |y| is clamped at
  // regularization_eps where it would otherwise blow up.
  double flux_derivative(double y) const;

  HypothesisReport check_hypotheses(const std::vector<double>& grid) const;

  // 64 log-spaced points in [1e-6, 1e3].
  static std::vector<double> default_audit_grid();

  std::string kind_name() const;

 private:
  OperatorSpec() = default;
  void validate() const;

  OperatorKind kind_ = OperatorKind::PLaplace;
  double p_ = 2.0;
  std::optional<double> q_secondary_;
  double q_convexity_ = 2.0;
  GrowthWitness witness_;
  double regularization_eps_ = 1e-12;

  // Tabulated kind: PCHIP slopes for a0 and cumulative integral of a0(s)s at
  // the sample abscissae.
  std::vector<double> tab_t_, tab_a0_, tab_d_, tab_G0_;
  double tab_a0_interp(double t) const;
  double tab_G0_interp(double t) const;
};

}  // namespace parobin

#endif
