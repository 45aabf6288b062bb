// Copyright (c) the parobin contributors.
// SPDX-License-Identifier: Apache-2.0

#include "parobin/diffop.hpp"

#include <algorithm>
#include <cmath>

namespace parobin {

namespace {

double sgn(double x) { return (x > 0) - (x < 0); }

// sign(y) |y|^e, total for e > 0.
double signed_pow(double y, double e) {
  if (y == 0.0) return 0.0;
  return sgn(y) * std::pow(std::abs(y), e);
}

double rel(double violation, double scale) { return violation / std::max(1.0, scale); }

}  // namespace

OperatorSpec OperatorSpec::p_laplace(double p) {
  OperatorSpec s;
  s.kind_ = OperatorKind::PLaplace;
  s.p_ = p;
  s.q_convexity_ = p;
  s.witness_ = {p - 1, p - 1, p - 1, p - 1, 1.0};
  s.validate();
  return s;
}

OperatorSpec OperatorSpec::pq_laplace(double p, double q_secondary) {
  OperatorSpec s;
  s.kind_ = OperatorKind::PQLaplace;
  s.p_ = p;
  s.q_secondary_ = q_secondary;
  s.q_convexity_ = q_secondary;
  s.witness_ = {q_secondary - 1, p - 1, p - 1, p - 1, q_secondary};
  s.validate();
  if (!(1.0 < q_secondary && q_secondary < p))
    throw ConfigError("pq_laplace: need 1 < q < p");
  return s;
}

OperatorSpec OperatorSpec::p_mean_curvature(double p) {
  OperatorSpec s;
  s.kind_ = OperatorKind::PMeanCurvature;
  s.p_ = p;
  // G0 ~ t^2/2 near zero, so q = 2 is the exponent with a positive limit
  // q G0(t)/t^q; clamp for p < 2 where q must not exceed p.
  s.q_convexity_ = std::min(2.0, p);
  s.witness_ = {1.0, std::max(1.0, p - 1), p - 1, std::pow(2.0, 0.5 * std::max(0.0, p - 2)),
                std::min(2.0, p)};
  s.validate();
  return s;
}

OperatorSpec OperatorSpec::perturbed_p_laplace(double p) {
  OperatorSpec s;
  s.kind_ = OperatorKind::Perturbed;
  s.p_ = p;
  s.q_convexity_ = p;
  s.witness_ = {0.5 * std::min(1.0, p - 1), 2.0 * p, p - 1, 2.0 * (p - 1), 1.0};
  s.validate();
  return s;
}

OperatorSpec OperatorSpec::tabulated(double p, std::vector<double> t_samples,
                                     std::vector<double> a0_samples, double q_convexity) {
  OperatorSpec s;
  s.kind_ = OperatorKind::Tabulated;
  s.p_ = p;
  s.q_convexity_ = q_convexity;
  s.witness_ = {1.0, 1.0, p - 1, p - 1, 1.0};
  s.validate();

  const auto n = t_samples.size();
  if (n < 4 || a0_samples.size() != n)
    throw GridError("tabulated operator: need >= 4 matching (t, a0) samples");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(t_samples[i] > 0.0) || !(a0_samples[i] > 0.0))
      throw GridError("tabulated operator: samples must be positive");
    if (i > 0 && !(t_samples[i] > t_samples[i - 1]))
      throw GridError("tabulated operator: abscissae must be strictly increasing");
  }
  s.tab_t_ = std::move(t_samples);
  s.tab_a0_ = std::move(a0_samples);

  // Fritsch-Carlson monotone cubic slopes.
  std::vector<double> hseg(n - 1), del(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    hseg[i] = s.tab_t_[i + 1] - s.tab_t_[i];
    del[i] = (s.tab_a0_[i + 1] - s.tab_a0_[i]) / hseg[i];
  }
  s.tab_d_.assign(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (del[i - 1] * del[i] <= 0.0) {
      s.tab_d_[i] = 0.0;
    } else {
      const double w1 = 2.0 * hseg[i] + hseg[i - 1];
      const double w2 = hseg[i] + 2.0 * hseg[i - 1];
      s.tab_d_[i] = (w1 + w2) / (w1 / del[i - 1] + w2 / del[i]);
    }
  }
  auto end_slope = [](double h0, double h1, double d0, double d1) {
    double d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (d * d0 <= 0.0) return 0.0;
    if (d0 * d1 <= 0.0 && std::abs(d) > 3.0 * std::abs(d0)) return 3.0 * d0;
    return d;
  };
  s.tab_d_[0] = end_slope(hseg[0], hseg[1], del[0], del[1]);
  s.tab_d_[n - 1] = end_slope(hseg[n - 2], hseg[n - 3], del[n - 2], del[n - 3]);

  // Cumulative integral of a0(t) t; below the first sample a0 is extended as
  // a constant, so G0(t_0) = a0(t_0) t_0^2 / 2.
  s.tab_G0_.assign(n, 0.0);
  s.tab_G0_[0] = 0.5 * s.tab_a0_[0] * s.tab_t_[0] * s.tab_t_[0];
  for (std::size_t i = 0; i + 1 < n; ++i) {
    // Composite Simpson; the integrand per interval is a quintic at most.
    const int m = 16;
    const double a = s.tab_t_[i], b = s.tab_t_[i + 1];
    const double step = (b - a) / m;
    double acc = 0.0;
    for (int k = 0; k < m; ++k) {
      const double x0 = a + k * step, x1 = x0 + step, xm = 0.5 * (x0 + x1);
      acc += (step / 6.0) * (s.tab_a0_interp(x0) * x0 + 4.0 * s.tab_a0_interp(xm) * xm +
                             s.tab_a0_interp(x1) * x1);
    }
    s.tab_G0_[i + 1] = s.tab_G0_[i] + acc;
  }
  return s;
}

void OperatorSpec::validate() const {
  if (!(p_ > 1.0)) throw ConfigError("operator: need p > 1");
  if (!(q_convexity_ > 1.0 && q_convexity_ <= p_ + 1e-12))
    throw ConfigError("operator: need 1 < q_convexity <= p");
}

OperatorSpec& OperatorSpec::set_q_convexity(double q) {
  q_convexity_ = q;
  validate();
  return *this;
}

OperatorSpec& OperatorSpec::set_regularization_eps(double eps) {
  if (!(eps > 0.0)) throw ConfigError("operator: regularization_eps must be positive");
  regularization_eps_ = eps;
  return *this;
}

double OperatorSpec::tab_a0_interp(double t) const {
  const auto& ts = tab_t_;
  if (t <= ts.front()) return tab_a0_.front();
  if (t >= ts.back()) return tab_a0_.back();
  const auto it = std::upper_bound(ts.begin(), ts.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - ts.begin()) - 1;
  const double h = ts[i + 1] - ts[i];
  const double s = (t - ts[i]) / h;
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
  const double h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s);
  const double h11 = s * s * (s - 1);
  return h00 * tab_a0_[i] + h * h10 * tab_d_[i] + h01 * tab_a0_[i + 1] + h * h11 * tab_d_[i + 1];
}

double OperatorSpec::tab_G0_interp(double t) const {
  const auto& ts = tab_t_;
  if (t <= ts.front()) return 0.5 * tab_a0_.front() * t * t;
  if (t >= ts.back())
    return tab_G0_.back() + 0.5 * tab_a0_.back() * (t * t - ts.back() * ts.back());
  const auto it = std::upper_bound(ts.begin(), ts.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - ts.begin()) - 1;
  const int m = 8;
  const double step = (t - ts[i]) / m;
  double acc = tab_G0_[i];
  for (int k = 0; k < m; ++k) {
    const double x0 = ts[i] + k * step, x1 = x0 + step, xm = 0.5 * (x0 + x1);
    acc += (step / 6.0) *
           (tab_a0_interp(x0) * x0 + 4.0 * tab_a0_interp(xm) * xm + tab_a0_interp(x1) * x1);
  }
  return acc;
}

double OperatorSpec::flux(double y) const {
  const double t = std::abs(y);
  switch (kind_) {
    case OperatorKind::PLaplace:
      return signed_pow(y, p_ - 1.0);
    case OperatorKind::PQLaplace:
      return signed_pow(y, p_ - 1.0) + signed_pow(y, *q_secondary_ - 1.0);
    case OperatorKind::PMeanCurvature:
      return std::pow(1.0 + t * t, 0.5 * (p_ - 2.0)) * y;
    case OperatorKind::Perturbed:
      return signed_pow(y, p_ - 1.0) * (1.0 + 1.0 / (1.0 + std::pow(t, p_)));
    case OperatorKind::Tabulated:
      return tab_a0_interp(t) * y;
  }
  return 0.0;
}

double OperatorSpec::energy_density(double y) const {
  const double t = std::abs(y);
  switch (kind_) {
    case OperatorKind::PLaplace:
      return std::pow(t, p_) / p_;
    case OperatorKind::PQLaplace:
      return std::pow(t, p_) / p_ + std::pow(t, *q_secondary_) / *q_secondary_;
    case OperatorKind::PMeanCurvature:
      return (std::pow(1.0 + t * t, 0.5 * p_) - 1.0) / p_;
    case OperatorKind::Perturbed:
      return std::pow(t, p_) / p_ + std::log1p(std::pow(t, p_)) / p_;
    case OperatorKind::Tabulated:
      return tab_G0_interp(t);
  }
  return 0.0;
}

double OperatorSpec::flux_mag(double t) const { return flux(t); }

double OperatorSpec::a0(double t) const {
  const double tc = std::max(t, regularization_eps_);
  return flux(tc) / tc;
}

double OperatorSpec::flux_derivative(double y) const {
  const double t = std::max(std::abs(y), regularization_eps_);
  switch (kind_) {
    case OperatorKind::PLaplace:
      return (p_ - 1.0) * std::pow(t, p_ - 2.0);
    case OperatorKind::PQLaplace:
      return (p_ - 1.0) * std::pow(t, p_ - 2.0) +
             (*q_secondary_ - 1.0) * std::pow(t, *q_secondary_ - 2.0);
    case OperatorKind::PMeanCurvature:
      return std::pow(1.0 + t * t, 0.5 * (p_ - 4.0)) * (1.0 + (p_ - 1.0) * t * t);
    case OperatorKind::Perturbed: {
      const double tp = std::pow(t, p_);
      const double base = (p_ - 1.0) * std::pow(t, p_ - 2.0);
      return base * (1.0 + 1.0 / (1.0 + tp)) - p_ * tp * std::pow(t, p_ - 2.0) / ((1.0 + tp) * (1.0 + tp));
    }
    case OperatorKind::Tabulated: {
      const double eps = 1e-5 * (1.0 + t);
      return (flux(t + eps) - flux(std::max(t - eps, 0.0))) / (eps + std::min(t, eps));
    }
  }
  return 0.0;
}

std::vector<double> OperatorSpec::default_audit_grid() {
  std::vector<double> g(64);
  const double lo = std::log(1e-6), hi = std::log(1e3);
  for (int i = 0; i < 64; ++i) g[i] = std::exp(lo + (hi - lo) * i / 63.0);
  return g;
}

HypothesisReport OperatorSpec::check_hypotheses(const std::vector<double>& grid) const {
  if (grid.size() < 16) throw GridError("hypothesis audit: need >= 16 grid points");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0)) throw GridError("hypothesis audit: grid must be positive");
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw GridError("hypothesis audit: grid must be strictly increasing");
  }

  constexpr double tol = 1e-10;
  HypothesisReport rep;

  // (i) strict monotonicity of t -> a0(t) t.
  {
    double viol = 0.0;
    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
      const double f0 = flux_mag(grid[k]), f1 = flux_mag(grid[k + 1]);
      viol = std::max(viol, rel(f0 - f1, std::abs(f0) + std::abs(f1)));
    }
    rep.items.push_back({"flux_strictly_increasing", viol <= tol, viol});
  }

  // (ii) 0 <= p G0(t) - a0(t) t^2.
  {
    double viol = 0.0;
    for (double t : grid) {
      const double lhs = flux_mag(t) * t, rhs = p_ * energy_density(t);
      viol = std::max(viol, rel(lhs - rhs, std::abs(rhs)));
    }
    rep.items.push_back({"pG0_dominates_flux", viol <= tol, viol});
  }

  // (iii) midpoint convexity of t -> G0(t^{1/q}).
  {
    const double q = q_convexity_;
    auto phi = [&](double t) { return energy_density(std::pow(t, 1.0 / q)); };
    double viol = 0.0;
    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
      const double ta = std::pow(grid[k], q), tb = std::pow(grid[k + 1], q);
      const double fa = phi(ta), fb = phi(tb), fm = phi(0.5 * (ta + tb));
      viol = std::max(viol, rel(fm - 0.5 * (fa + fb), std::abs(fa) + std::abs(fb)));
    }
    rep.items.push_back({"G0_q_convex", viol <= tol, viol});
  }

  // (iv) sandwich c1/(p(p-1)) t^p <= G0(t) <= c5 (1 + t^p); c5 is fitted on a
  // dense sweep so the reported constant is valid well beyond the audit grid.
  {
    const double lower = witness_.c1 / (p_ * (p_ - 1.0));
    double viol = 0.0, c5 = 0.0;
    for (double t : grid) {
      const double g = energy_density(t), tp = std::pow(t, p_);
      viol = std::max(viol, rel(lower * tp - g, std::abs(g) + tp));
    }
    for (int k = 0; k <= 4000; ++k) {
      const double t = 1e-6 + (2e3 - 1e-6) * k / 4000.0;
      c5 = std::max(c5, energy_density(t) / (1.0 + std::pow(t, p_)));
    }
    rep.fitted_c5 = c5 * (1.0 + 1e-6);
    rep.items.push_back({"corollary_sandwich_lower", viol <= tol, viol});
  }

  // (v) a0(t) t^2 >= c1/(p-1) t^p.
  {
    const double lower = witness_.c1 / (p_ - 1.0);
    double viol = 0.0;
    for (double t : grid) {
      const double lhs = flux_mag(t) * t, tp = std::pow(t, p_);
      viol = std::max(viol, rel(lower * tp - lhs, std::abs(lhs) + tp));
    }
    rep.items.push_back({"flux_coercivity_lower", viol <= tol, viol});
  }

  return rep;
}

std::string OperatorSpec::kind_name() const {
  switch (kind_) {
    case OperatorKind::PLaplace:
      return "p_laplace";
    case OperatorKind::PQLaplace:
      return "pq_laplace";
    case OperatorKind::PMeanCurvature:
      return "p_mean_curvature";
    case OperatorKind::Perturbed:
      return "perturbed_p_laplace";
    case OperatorKind::Tabulated:
      return "tabulated";
  }
  return "?";
}

}  // namespace parobin
