// Copyright (c) the parobin contributors.
// SPDX-License-Identifier: Apache-2.0

#include "oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace oracles {

double composite_simpson(const std::function<double(double)>& g, double a, double b, int panels) {
  if (panels % 2) ++panels;
  const double h = (b - a) / panels;
  double acc = g(a) + g(b);
  for (int i = 1; i < panels; ++i) acc += g(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

namespace {

double simpson_value(const std::function<double(double)>& g, double a, double b) {
  return (b - a) / 6.0 * (g(a) + 4.0 * g(0.5 * (a + b)) + g(b));
}

double adaptive_step(const std::function<double(double)>& g, double a, double b, double whole,
                     double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double left = simpson_value(g, a, m);
  const double right = simpson_value(g, m, b);
  if (depth > 48 || std::abs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_step(g, a, m, left, 0.5 * tol, depth + 1) +
         adaptive_step(g, m, b, right, 0.5 * tol, depth + 1);
}

}  // namespace

double adaptive_simpson_oracle(const std::function<double(double)>& g, double a, double b,
                               double tol) {
  if (a == b) return 0.0;
  return adaptive_step(g, a, b, simpson_value(g, a, b), tol, 0);
}

double robin_tan_root(double lo, double hi) {
  auto g = [](double w) { return std::sin(w) * (w * w - 1.0) - 2.0 * w * std::cos(w); };
  double flo = g(lo), fhi = g(hi);
  if (flo * fhi > 0.0) throw std::runtime_error("robin_tan_root: invalid bracket");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = g(mid);
    if (fm == 0.0) return mid;
    if (flo * fm < 0.0) {
      hi = mid;
      fhi = fm;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  return 0.5 * (lo + hi);
}

namespace {

// Tridiagonal solve (Thomas), destructive on copies.
std::vector<double> thomas(std::vector<double> sub, std::vector<double> diag,
                           std::vector<double> sup, std::vector<double> rhs) {
  const std::size_t n = diag.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double w = sub[i] / diag[i - 1];
    diag[i] -= w * sup[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  std::vector<double> x(n);
  x[n - 1] = rhs[n - 1] / diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = (rhs[i] - sup[i] * x[i + 1]) / diag[i];
  return x;
}

}  // namespace

double fd_robin_eigenvalue(const std::function<double(double)>& xi, double beta_l, double beta_r,
                           double a, double b, int n) {
  const double H = (b - a) / n;
  const std::size_t N = static_cast<std::size_t>(n) + 1;
  // Symmetrized generalized problem A u = lambda D u, D = diag(1/2,1,..,1,1/2).
  std::vector<double> sub(N, 0.0), diag(N, 0.0), sup(N, 0.0), dmass(N, 1.0);
  dmass.front() = dmass.back() = 0.5;
  for (std::size_t i = 1; i + 1 < N; ++i) {
    sub[i] = -1.0 / (H * H);
    sup[i] = -1.0 / (H * H);
    diag[i] = 2.0 / (H * H) + xi(a + i * H);
  }
  diag[0] = 1.0 / (H * H) + beta_l / H + 0.5 * xi(a);
  sup[0] = -1.0 / (H * H);
  diag[N - 1] = 1.0 / (H * H) + beta_r / H + 0.5 * xi(b);
  sub[N - 1] = -1.0 / (H * H);

  double xi_max = 0.0;
  for (std::size_t i = 0; i < N; ++i) xi_max = std::max(xi_max, std::abs(xi(a + i * H)));
  const double sigma = -xi_max - 1.0;

  std::vector<double> sd = diag;
  for (std::size_t i = 0; i < N; ++i) sd[i] -= sigma * dmass[i];

  std::vector<double> v(N, 1.0);
  double lambda = 0.0;
  for (int it = 0; it < 300; ++it) {
    std::vector<double> rhs(N);
    for (std::size_t i = 0; i < N; ++i) rhs[i] = dmass[i] * v[i];
    v = thomas(sub, sd, sup, rhs);
    double nrm = 0.0;
    for (double x : v) nrm = std::max(nrm, std::abs(x));
    for (double& x : v) x /= nrm;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      double Av = diag[i] * v[i];
      if (i > 0) Av += sub[i] * v[i - 1];
      if (i + 1 < N) Av += sup[i] * v[i + 1];
      num += v[i] * Av;
      den += dmass[i] * v[i] * v[i];
    }
    lambda = num / den;
  }
  return lambda;
}

namespace {

struct ShotResult {
  bool valid = false;   // stayed positive and finite
  double end = 0.0;     // flux defect at the right endpoint
  std::vector<double> profile;
};

ShotResult shoot(double p, const std::function<double(double)>& xi, double beta_l, double beta_r,
                 double a, double b, double lambda, const std::function<double(double)>& f,
                 double m, int n_samples, bool record) {
  // State (u, phi) with phi = |u'|^{p-2} u'.
  const int steps = 4000;
  const double dt = (b - a) / steps;
  auto uprime = [&](double phi) {
    return phi == 0.0 ? 0.0 : std::copysign(std::pow(std::abs(phi), 1.0 / (p - 1.0)), phi);
  };
  auto phiprime = [&](double z, double u) {
    const double up = u > 0.0 ? std::pow(u, p - 1.0) : 0.0;
    return (xi(z) - lambda) * up - f(std::max(u, 0.0));
  };

  ShotResult res;
  if (record) res.profile.assign(static_cast<std::size_t>(n_samples) + 1, 0.0);
  double u = m;
  double phi = beta_l * std::pow(m, p - 1.0);
  const int stride = steps / std::max(1, n_samples);
  if (record) res.profile[0] = u;
  for (int k = 0; k < steps; ++k) {
    const double z = a + k * dt;
    const double k1u = uprime(phi), k1p = phiprime(z, u);
    const double k2u = uprime(phi + 0.5 * dt * k1p), k2p = phiprime(z + 0.5 * dt, u + 0.5 * dt * k1u);
    const double k3u = uprime(phi + 0.5 * dt * k2p), k3p = phiprime(z + 0.5 * dt, u + 0.5 * dt * k2u);
    const double k4u = uprime(phi + dt * k3p), k4p = phiprime(z + dt, u + dt * k3u);
    u += dt / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    phi += dt / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
    if (!std::isfinite(u) || !std::isfinite(phi) || u <= 0.0 || std::abs(u) > 1e8) return res;
    if (record && (k + 1) % stride == 0 && (k + 1) / stride <= n_samples)
      res.profile[static_cast<std::size_t>((k + 1) / stride)] = u;
  }
  res.valid = true;
  res.end = phi + beta_r * std::pow(u, p - 1.0);
  return res;
}

}  // namespace

std::vector<ShootingSolution> shoot_positive_solutions(
    double p, const std::function<double(double)>& xi, double beta_l, double beta_r, double a,
    double b, double lambda, const std::function<double(double)>& f, double m_lo, double m_hi,
    int n_scan, int n_samples) {
  std::vector<ShootingSolution> found;
  double prev_m = 0.0, prev_end = 0.0;
  bool have_prev = false;
  for (int k = 0; k <= n_scan; ++k) {
    const double m =
        std::exp(std::log(m_lo) + (std::log(m_hi) - std::log(m_lo)) * k / n_scan);
    ShotResult r = shoot(p, xi, beta_l, beta_r, a, b, lambda, f, m, n_samples, false);
    if (!r.valid) {
      have_prev = false;
      continue;
    }
    if (have_prev && prev_end * r.end <= 0.0 && (prev_end != 0.0 || r.end != 0.0)) {
      double lo = prev_m, hi = m, flo = prev_end;
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        ShotResult rm = shoot(p, xi, beta_l, beta_r, a, b, lambda, f, mid, n_samples, false);
        if (!rm.valid) break;
        if (flo * rm.end <= 0.0) {
          hi = mid;
        } else {
          lo = mid;
          flo = rm.end;
        }
      }
      const double root = 0.5 * (lo + hi);
      ShotResult rr = shoot(p, xi, beta_l, beta_r, a, b, lambda, f, root, n_samples, true);
      if (rr.valid) found.push_back({root, rr.profile});
    }
    prev_m = m;
    prev_end = r.end;
    have_prev = true;
  }
  return found;
}

double constant_solution_root(double lambda, const std::function<double(double)>& f, double lo,
                              double hi) {
  auto g = [&](double m) { return lambda * m + f(m); };
  double flo = g(lo), fhi = g(hi);
  if (flo * fhi > 0.0) throw std::runtime_error("constant_solution_root: invalid bracket");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = g(mid);
    if (flo * fm <= 0.0) {
      hi = mid;
      fhi = fm;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace oracles
