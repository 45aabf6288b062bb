// Copyright (c) the parobin contributors.
// SPDX-License-Identifier: Apache-2.0

#include "parobin/problem.hpp"

#include <algorithm>
#include <cmath>

namespace parobin {

namespace {

double pospow(double x, double e) { return x > 0.0 ? std::pow(x, e) : 0.0; }

double simpson_rec(const std::function<double(double)>& g, double a, double fa, double b,
                   double fb, double m, double fm, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = g(lm), frm = g(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol || depth > 40) return left + right + delta / 15.0;
  return simpson_rec(g, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth + 1) +
         simpson_rec(g, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth + 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& g, double a, double b, double tol) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = g(a), fb = g(b), fm = g(m);
  if (!std::isfinite(fa) || !std::isfinite(fb) || !std::isfinite(fm))
    throw QuadratureError("adaptive_simpson: non-finite integrand");
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(g, a, fa, b, fb, m, fm, whole, tol, 0);
}

// ---------------------------------------------------------------------------
// PerturbationSpec

PerturbationSpec PerturbationSpec::sublinear_example(double tau, double q, double r, double s) {
  if (!(tau < q && 1.0 < s && s < r)) throw ConfigError("sublinear_example: need tau < q, 1 < s < r");
  PerturbationSpec f;
  f.kind_ = PerturbationKind::SublinearExample;
  f.tau_ = tau;
  f.q_ = q;
  f.r_ = r;
  f.s_ = s;
  f.flags_ = {true, false, false, false};
  f.check_breakpoint();
  return f;
}

PerturbationSpec PerturbationSpec::superlinear_ar(double tau, double theta, double p, double r) {
  if (!(1.0 < tau && tau < theta && theta < p && p < r))
    throw ConfigError("superlinear_ar: need 1 < tau < theta < p < r");
  PerturbationSpec f;
  f.kind_ = PerturbationKind::SuperlinearAR;
  f.tau_ = tau;
  f.theta_ = theta;
  f.q_ = p;  // the p-exponent of the upper branch
  f.r_ = r;
  f.s_ = 0.5 * (tau + theta);  // floor exponent witness for the auxiliary reaction
  f.flags_ = {false, false, true, false};
  f.check_breakpoint();
  return f;
}

PerturbationSpec PerturbationSpec::superlinear_non_ar(double tau, double theta, double p) {
  if (!(1.0 < tau && tau < theta && theta < p))
    throw ConfigError("superlinear_non_ar: need 1 < tau < theta < p");
  PerturbationSpec f;
  f.kind_ = PerturbationKind::SuperlinearNonAR;
  f.tau_ = tau;
  f.theta_ = theta;
  f.q_ = p;
  f.r_ = p + 1.0;  // |f| <= a (1 + x^{r-1}) holds for any r > p on this branch
  f.s_ = 0.5 * (tau + theta);
  f.flags_ = {false, false, true, false};
  f.check_breakpoint();
  return f;
}

PerturbationSpec PerturbationSpec::power_sum(std::vector<PowerTerm> terms, double p) {
  PerturbationSpec f;
  f.kind_ = PerturbationKind::PowerSum;
  if (terms.empty()) throw ConfigError("power_sum: need at least one term");
  double emax = 0.0, emin = 1e300;
  bool all_pos = true;
  double lead_coef = 0.0;
  for (const auto& t : terms) {
    if (!(t.exponent > 1.0)) throw ConfigError("power_sum: exponents must exceed 1");
    if (t.exponent > emax) {
      emax = t.exponent;
      lead_coef = t.coef;
    }
    emin = std::min(emin, t.exponent);
    all_pos = all_pos && t.coef > 0.0;
  }
  f.terms_ = std::move(terms);
  f.s_ = emin;
  f.r_ = std::max(emax, p + 1.0);
  f.flags_.sublinear_H1 = emax < p;
  f.flags_.strictly_positive = all_pos;
  f.flags_.superlinear_H2 = emax > p && lead_coef > 0.0;
  // Positive sublinear sums have strictly decreasing f(x)/x^{p-1}.
  f.flags_.unique_H1pp = all_pos && emax < p;
  return f;
}

PerturbationSpec PerturbationSpec::custom(std::function<double(double, double)> fn,
                                          ClassFlags flags, double growth_r, double floor_s) {
  PerturbationSpec f;
  f.kind_ = PerturbationKind::Custom;
  f.custom_f_ = std::move(fn);
  f.flags_ = flags;
  f.r_ = growth_r;
  f.s_ = floor_s;
  return f;
}

double PerturbationSpec::floor_exponent() const {
  return kind_ == PerturbationKind::SublinearExample ? tau_ : s_;
}

void PerturbationSpec::check_breakpoint() const {
  double left = 0.0, right = 0.0;
  switch (kind_) {
    case PerturbationKind::SublinearExample:
      left = 1.0 - 2.0;
      right = 1.0 - 2.0;
      break;
    case PerturbationKind::SuperlinearAR:
      left = 1.0 - 2.0;
      right = 1.0 - 2.0;
      break;
    case PerturbationKind::SuperlinearNonAR:
      left = 1.0 - 2.0;
      right = std::log(1.0) - 1.0;
      break;
    default:
      return;
  }
  if (std::abs(left - right) > 1e-12)
    throw ConfigError("perturbation: discontinuous at the piecewise breakpoint");
}

double PerturbationSpec::f(double z, double x) const {
  if (x <= 0.0) return 0.0;
  switch (kind_) {
    case PerturbationKind::SublinearExample:
      if (x <= 1.0) return std::pow(x, tau_ - 1.0) - 2.0 * std::pow(x, q_ - 1.0);
      return std::pow(x, r_ - 1.0) - 2.0 * std::pow(x, s_ - 1.0);
    case PerturbationKind::SuperlinearAR:
      if (x <= 1.0) return std::pow(x, tau_ - 1.0) - 2.0 * std::pow(x, theta_ - 1.0);
      return std::pow(x, r_ - 1.0) - 2.0 * std::pow(x, q_ - 1.0);
    case PerturbationKind::SuperlinearNonAR:
      if (x <= 1.0) return std::pow(x, tau_ - 1.0) - 2.0 * std::pow(x, theta_ - 1.0);
      return std::pow(x, q_ - 1.0) * (std::log(x) - 1.0);
    case PerturbationKind::PowerSum: {
      double acc = 0.0;
      for (const auto& t : terms_) acc += t.coef * std::pow(x, t.exponent - 1.0);
      return acc;
    }
    case PerturbationKind::Custom:
      return custom_f_(z, x);
  }
  return 0.0;
}

double PerturbationSpec::F(double z, double x) const {
  if (x <= 0.0) return 0.0;
  switch (kind_) {
    case PerturbationKind::SublinearExample: {
      auto lowF = [&](double y) { return std::pow(y, tau_) / tau_ - 2.0 * std::pow(y, q_) / q_; };
      if (x <= 1.0) return lowF(x);
      return lowF(1.0) + (std::pow(x, r_) - 1.0) / r_ - 2.0 * (std::pow(x, s_) - 1.0) / s_;
    }
    case PerturbationKind::SuperlinearAR: {
      auto lowF = [&](double y) {
        return std::pow(y, tau_) / tau_ - 2.0 * std::pow(y, theta_) / theta_;
      };
      if (x <= 1.0) return lowF(x);
      return lowF(1.0) + (std::pow(x, r_) - 1.0) / r_ - 2.0 * (std::pow(x, q_) - 1.0) / q_;
    }
    case PerturbationKind::SuperlinearNonAR: {
      auto lowF = [&](double y) {
        return std::pow(y, tau_) / tau_ - 2.0 * std::pow(y, theta_) / theta_;
      };
      if (x <= 1.0) return lowF(x);
      // primitive of y^{p-1}(ln y - 1) is y^p/p (ln y - 1) - y^p/p^2
      const double p = q_;
      auto hiF = [&](double y) {
        return std::pow(y, p) / p * (std::log(y) - 1.0) - std::pow(y, p) / (p * p);
      };
      return lowF(1.0) + hiF(x) - hiF(1.0);
    }
    case PerturbationKind::PowerSum: {
      double acc = 0.0;
      for (const auto& t : terms_) acc += t.coef * std::pow(x, t.exponent) / t.exponent;
      return acc;
    }
    case PerturbationKind::Custom:
      return adaptive_simpson([&](double s) { return custom_f_(z, s); }, 0.0, x, 1e-10);
  }
  return 0.0;
}

std::string PerturbationSpec::kind_name() const {
  switch (kind_) {
    case PerturbationKind::SublinearExample:
      return "sublinear_example";
    case PerturbationKind::SuperlinearAR:
      return "superlinear_ar";
    case PerturbationKind::SuperlinearNonAR:
      return "superlinear_non_ar";
    case PerturbationKind::PowerSum:
      return "power_sum";
    case PerturbationKind::Custom:
      return "custom";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Potential

Potential Potential::constant(double c) {
  Potential xi;
  xi.const_value_ = c;
  return xi;
}

Potential Potential::samples(std::vector<double> values) {
  if (values.size() < 2) throw ConfigError("potential: need >= 2 samples");
  Potential xi;
  xi.samples_ = std::move(values);
  return xi;
}

double Potential::eval(double z, double a, double b) const {
  if (samples_.empty()) return const_value_;
  const double t = std::clamp((z - a) / (b - a), 0.0, 1.0) * (samples_.size() - 1);
  const auto i = std::min(static_cast<std::size_t>(t), samples_.size() - 2);
  const double s = t - static_cast<double>(i);
  return (1.0 - s) * samples_[i] + s * samples_[i + 1];
}

double Potential::inf_norm() const {
  if (samples_.empty()) return std::abs(const_value_);
  double m = 0.0;
  for (double v : samples_) m = std::max(m, std::abs(v));
  return m;
}

// ---------------------------------------------------------------------------
// ProblemSpec

ProblemSpec::ProblemSpec(double a_left, double a_right, Potential xi, std::array<double, 2> beta,
                         PerturbationSpec f, double p)
    : a_left_(a_left), a_right_(a_right), xi_(std::move(xi)), beta_(beta), f_(std::move(f)), p_(p) {
  if (!(a_left < a_right)) throw ConfigError("problem: interval endpoints must satisfy a < b");
  if (beta_[0] < 0.0 || beta_[1] < 0.0) throw ConfigError("problem: beta must be nonnegative");
  if (!(p > 1.0)) throw ConfigError("problem: need p > 1");
  xi_inf_norm_ = xi_.inf_norm();
  if (!std::isfinite(xi_inf_norm_)) throw ConfigError("problem: xi must be bounded");
}

double ProblemSpec::d(double z, double x) const {
  if (x < 0.0) throw Error("d(z,x): needs x >= 0");
  return f(z, x) * x - p_ * F(z, x);
}

// ---------------------------------------------------------------------------
// Truncated reactions

void TruncatedReaction::validate(const ProblemSpec& prob) const {
  if (!(eta > prob.xi_inf_norm()))
    throw ConfigError("truncated reaction: eta must exceed ||xi||_inf");
  if (mode != TruncationMode::PlainShifted) {
    if (!barrier) throw BarrierMissing("truncated reaction: barrier required");
    if (!(barrier->min() > 0.0))
      throw ConfigError("truncated reaction: barrier must be strictly positive");
  }
}

double eval_truncated(const TruncatedReaction& tr, const ProblemSpec& prob, const Mesh& mesh,
                      int node, double x) {
  const double z = mesh.node(node);
  const double p = prob.p();
  auto shifted = [&](double y) { return (tr.lambda + tr.eta) * pospow(y, p - 1.0) + prob.f(z, y); };
  switch (tr.mode) {
    case TruncationMode::PlainShifted:
      return x <= 0.0 ? 0.0 : shifted(x);
    case TruncationMode::CapAbove: {
      if (!tr.barrier) throw BarrierMissing("CapAbove: barrier required");
      const double b = (*tr.barrier)[node];
      if (x < 0.0) return 0.0;
      return x <= b ? shifted(x) : shifted(b);
    }
    case TruncationMode::FloorBelow: {
      if (!tr.barrier) throw BarrierMissing("FloorBelow: barrier required");
      const double b = (*tr.barrier)[node];
      return x <= b ? shifted(b) : shifted(x);
    }
  }
  return 0.0;
}

double eval_truncated_primitive(const TruncatedReaction& tr, const ProblemSpec& prob,
                                const Mesh& mesh, int node, double x) {
  const double z = mesh.node(node);
  const double p = prob.p();
  auto E = [&](double y) {
    // primitive of the plain shifted reaction, zero on the negative axis
    return (tr.lambda + tr.eta) / p * pospow(y, p) + prob.F(z, y);
  };
  switch (tr.mode) {
    case TruncationMode::PlainShifted:
      return E(x);
    case TruncationMode::CapAbove: {
      if (!tr.barrier) throw BarrierMissing("CapAbove: barrier required");
      const double b = (*tr.barrier)[node];
      if (x <= b) return E(x);
      const double fb = (tr.lambda + tr.eta) * pospow(b, p - 1.0) + prob.f(z, b);
      return E(b) + fb * (x - b);
    }
    case TruncationMode::FloorBelow: {
      if (!tr.barrier) throw BarrierMissing("FloorBelow: barrier required");
      const double b = (*tr.barrier)[node];
      const double fb = (tr.lambda + tr.eta) * pospow(b, p - 1.0) + prob.f(z, b);
      if (x <= b) return fb * x;
      return fb * b + E(x) - E(b);
    }
  }
  return 0.0;
}

// ---------------------------------------------------------------------------

double estimate_xi_hat(const ProblemSpec& prob, double rho) {
  if (!(rho > 0.0)) throw Error("estimate_xi_hat: rho must be positive");
  const int nx = 1024;
  const int nz = 17;
  const double p = prob.p();

  auto nondecreasing = [&](double xi_hat) {
    for (int zi = 0; zi < nz; ++zi) {
      const double z = prob.a_left() + (prob.a_right() - prob.a_left()) * zi / (nz - 1);
      double prev = 0.0;
      for (int k = 1; k <= nx; ++k) {
        const double x = rho * k / nx;
        const double g = prob.f(z, x) + xi_hat * std::pow(x, p - 1.0);
        if (g < prev - 1e-12 * (1.0 + std::abs(prev))) return false;
        prev = g;
      }
    }
    return true;
  };

  if (nondecreasing(0.0)) return 0.0;
  for (double cand = 1.0 / 16.0; cand <= 1e6; cand *= 2.0)
    if (nondecreasing(cand)) return cand;
  throw NotFound("estimate_xi_hat: no xi_hat <= 1e6 restores monotonicity");
}

}  // namespace parobin
