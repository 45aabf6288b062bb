// Copyright (c) the parobin contributors.
// SPDX-License-Identifier: Apache-2.0

#include "parobin/energy.hpp"

#include <algorithm>
#include <cmath>

namespace parobin {

namespace {

double sgn(double x) { return (x > 0) - (x < 0); }
double pospow(double x, double e) { return x > 0.0 ? std::pow(x, e) : 0.0; }
double negpart_pow(double x, double e) { return x < 0.0 ? std::pow(-x, e) : 0.0; }
double abspow_signed(double x, double e) {  // |x|^{e} sign(x), total for e > 0
  return x == 0.0 ? 0.0 : sgn(x) * std::pow(std::abs(x), e);
}

// Zero-order integrand of each family and its derivative in u.
struct ZeroOrder {
  double value;
  double slope;
};

class Assembler {
 public:
  Assembler(const FunctionalSpec& spec, const OperatorSpec& op, const ProblemSpec& prob,
            const Mesh& mesh)
      : spec_(spec), op_(op), prob_(prob), mesh_(mesh) {
    if (spec.family == Family::TruncCap || spec.family == Family::TruncFloor) {
      tr_.mode = spec.family == Family::TruncCap ? TruncationMode::CapAbove
                                                 : TruncationMode::FloorBelow;
      tr_.lambda = spec.lambda;
      tr_.eta = spec.eta;
      tr_.barrier = spec.barrier;
    }
  }

  double g_coef() const { return spec_.family == Family::Mu ? prob_.p() : 1.0; }
  double b_coef() const { return spec_.family == Family::Mu ? 1.0 : 1.0 / prob_.p(); }

  ZeroOrder zero_order(int i, double u) const {
    const double z = mesh_.node(i);
    const double p = prob_.p();
    const double xi = prob_.xi_at(z);
    switch (spec_.family) {
      case Family::Mu:
        return {xi * std::pow(std::abs(u), p), p * xi * abspow_signed(u, p - 1.0)};
      case Family::PhiLambda: {
        const double le = spec_.lambda + spec_.eta;
        const double val = (xi + spec_.eta) / p * std::pow(std::abs(u), p) -
                           (le / p * pospow(u, p) + prob_.F(z, u));
        const double der = (xi + spec_.eta) * abspow_signed(u, p - 1.0) -
                           (le * pospow(u, p - 1.0) + prob_.f(z, u));
        return {val, der};
      }
      case Family::TruncCap: {
        if (spec_.aux) return aux_capped(i, u, xi);
        const double val = (xi + spec_.eta) / p * std::pow(std::abs(u), p) -
                           eval_truncated_primitive(tr_, prob_, mesh_, i, u);
        const double der = (xi + spec_.eta) * abspow_signed(u, p - 1.0) -
                           eval_truncated(tr_, prob_, mesh_, i, u);
        return {val, der};
      }
      case Family::TruncFloor: {
        const double val = (xi + spec_.eta) / p * std::pow(std::abs(u), p) -
                           eval_truncated_primitive(tr_, prob_, mesh_, i, u);
        const double der = (xi + spec_.eta) * abspow_signed(u, p - 1.0) -
                           eval_truncated(tr_, prob_, mesh_, i, u);
        return {val, der};
      }
      case Family::AuxPsi: {
        const AuxCoeffs& a = *spec_.aux;
        const double val = std::abs(xi) / p * std::pow(std::abs(u), p) +
                           negpart_pow(u, p) / p + a.c10 / a.r * pospow(u, a.r) -
                           a.c9 / a.q * pospow(u, a.q);
        const double der = std::abs(xi) * abspow_signed(u, p - 1.0) -
                           negpart_pow(u, p - 1.0) + a.c10 * pospow(u, a.r - 1.0) -
                           a.c9 * pospow(u, a.q - 1.0);
        return {val, der};
      }
      case Family::SuperPsi:
      case Family::RobinW: {
        const double val = xi / p * std::pow(std::abs(u), p) +
                           spec_.eta / p * negpart_pow(u, p) -
                           spec_.lambda / p * pospow(u, p) - prob_.F(z, u);
        const double der = xi * abspow_signed(u, p - 1.0) -
                           spec_.eta * negpart_pow(u, p - 1.0) -
                           spec_.lambda * pospow(u, p - 1.0) - prob_.f(z, u);
        return {val, der};
      }
    }
    return {0.0, 0.0};
  }

 private:
  // Reaction of the auxiliary comparison problem capped above the barrier.
  ZeroOrder aux_capped(int i, double u, double xi) const {
    const AuxCoeffs& a = *spec_.aux;
    const double p = prob_.p();
    const double b = (*spec_.barrier)[i];
    auto react = [&](double x) {
      return a.c9 * pospow(x, a.q - 1.0) - a.c10 * pospow(x, a.r - 1.0) +
             spec_.eta * pospow(x, p - 1.0);
    };
    auto prim = [&](double x) {
      return a.c9 / a.q * pospow(x, a.q) - a.c10 / a.r * pospow(x, a.r) +
             spec_.eta / p * pospow(x, p);
    };
    double P, R;
    if (u < 0.0) {
      P = 0.0;
      R = 0.0;
    } else if (u <= b) {
      P = prim(u);
      R = react(u);
    } else {
      P = prim(b) + react(b) * (u - b);
      R = react(b);
    }
    const double val = (xi + spec_.eta) / p * std::pow(std::abs(u), p) - P;
    const double der = (xi + spec_.eta) * abspow_signed(u, p - 1.0) - R;
    return {val, der};
  }

  const FunctionalSpec& spec_;
  const OperatorSpec& op_;
  const ProblemSpec& prob_;
  const Mesh& mesh_;
  TruncatedReaction tr_;
};

}  // namespace

void FunctionalSpec::validate(const ProblemSpec& prob) const {
  switch (family) {
    case Family::TruncCap:
    case Family::TruncFloor:
      if (!barrier) throw BarrierMissing("functional: barrier required");
      [[fallthrough]];
    case Family::PhiLambda:
    case Family::SuperPsi:
    case Family::RobinW:
      if (!(eta > prob.xi_inf_norm()))
        throw ConfigError("functional: eta must exceed ||xi||_inf");
      break;
    case Family::AuxPsi:
      if (!aux) throw ConfigError("AuxPsi: aux coefficients required");
      break;
    case Family::Mu:
      break;
  }
}

double assemble_mu(const OperatorSpec& op, const ProblemSpec& prob, const DiscreteFunction& u) {
  FunctionalSpec spec;
  spec.family = Family::Mu;
  return energy(spec, op, prob, u);
}

double energy(const FunctionalSpec& spec, const OperatorSpec& op, const ProblemSpec& prob,
              const DiscreteFunction& u) {
  spec.validate(prob);
  const Mesh& mesh = u.mesh();
  if (spec.barrier && !(spec.barrier->mesh() == mesh))
    throw MeshMismatch("functional barrier does not match the argument mesh");
  Assembler as(spec, op, prob, mesh);

  double acc = 0.0;
  for (int c = 0; c < mesh.cells(); ++c) acc += mesh.h() * op.energy_density(u.slope(c));
  acc *= as.g_coef();
  for (int i = 0; i < u.size(); ++i) acc += mesh.weight(i) * as.zero_order(i, u[i]).value;
  acc += as.b_coef() * boundary_term(u, prob.beta(), prob.p());
  return acc;
}

DiscreteFunction gradient(const FunctionalSpec& spec, const OperatorSpec& op,
                          const ProblemSpec& prob, const DiscreteFunction& u) {
  spec.validate(prob);
  const Mesh& mesh = u.mesh();
  if (spec.barrier && !(spec.barrier->mesh() == mesh))
    throw MeshMismatch("functional barrier does not match the argument mesh");
  Assembler as(spec, op, prob, mesh);

  DiscreteFunction g(mesh);
  const double gc = as.g_coef();
  for (int c = 0; c < mesh.cells(); ++c) {
    const double fl = gc * op.flux(u.slope(c));
    g[c] -= fl;
    g[c + 1] += fl;
  }
  for (int i = 0; i < u.size(); ++i) g[i] += mesh.weight(i) * as.zero_order(i, u[i]).slope;
  const double p = prob.p();
  const double bc = as.b_coef() * p;
  g[0] += bc * prob.beta()[0] * abspow_signed(u[0], p - 1.0);
  g[u.size() - 1] += bc * prob.beta()[1] * abspow_signed(u[u.size() - 1], p - 1.0);
  return g;
}

double rayleigh(double r, const ProblemSpec& prob, const DiscreteFunction& u) {
  const Mesh& mesh = u.mesh();
  const double den = norm_Lp_pow(u, r);
  if (!(den > 1e-300)) throw ZeroFunction("rayleigh: u must be nonzero");
  double num = 0.0;
  for (int c = 0; c < mesh.cells(); ++c) num += mesh.h() * std::pow(std::abs(u.slope(c)), r);
  for (int i = 0; i < u.size(); ++i)
    num += mesh.weight(i) * prob.xi_at(mesh.node(i)) * std::pow(std::abs(u[i]), r);
  num += boundary_term(u, prob.beta(), r);
  return num / den;
}

DiazSaaReport diaz_saa_convexity(const DiazSaaProbe& probe, const OperatorSpec& op,
                                 const ProblemSpec& prob) {
  require_same_mesh(probe.u1, probe.u2);
  if (cone_check(probe.u1) != ConeLocation::InDPlus || cone_check(probe.u2) != ConeLocation::InDPlus)
    throw NotPositive("diaz_saa_convexity: probe functions must be strictly positive");
  if (probe.segment_points < 3) throw ConfigError("diaz_saa_convexity: need m >= 3");

  const Mesh& mesh = probe.u1.mesh();
  const double q = probe.q_convexity;
  const double p = prob.p();

  auto l_value = [&](const DiscreteFunction& w) {
    double acc = 0.0;
    for (int c = 0; c < mesh.cells(); ++c) acc += mesh.h() * op.energy_density(w.slope(c));
    for (int i = 0; i < w.size(); ++i)
      acc += mesh.weight(i) * std::abs(prob.xi_at(mesh.node(i))) / p * std::pow(w[i], p);
    acc += boundary_term(w, prob.beta(), p) / p;
    return acc;
  };

  DiazSaaReport rep;
  const int m = probe.segment_points;
  rep.values.resize(m);
  for (int j = 0; j < m; ++j) {
    const double t = static_cast<double>(j) / (m - 1);
    DiscreteFunction w(mesh);
    for (int i = 0; i < w.size(); ++i)
      w[i] = std::pow((1.0 - t) * std::pow(probe.u1[i], q) + t * std::pow(probe.u2[i], q), 1.0 / q);
    rep.values[j] = l_value(w);
  }
  const double scale = std::max({1.0, std::abs(rep.values.front()), std::abs(rep.values.back())});
  for (int j = 1; j + 1 < m; ++j) {
    const double t = static_cast<double>(j) / (m - 1);
    const double chord = (1.0 - t) * rep.values.front() + t * rep.values.back();
    rep.max_violation = std::max(rep.max_violation, (rep.values[j] - chord) / scale);
  }
  rep.max_violation = std::max(rep.max_violation, 0.0);
  return rep;
}

}  // namespace parobin
