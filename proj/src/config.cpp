// Copyright (c) the parobin contributors.
// SPDX-License-Identifier: Apache-2.0

#include "parobin/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace parobin {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError("config: unknown key '" + it.key() + "' in " + where);
}

double get_num(const json& obj, const std::string& key, std::optional<double> fallback = {}) {
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError("config: missing key '" + key + "'");
  }
  if (!obj[key].is_number()) throw ConfigError("config: key '" + key + "' must be a number");
  return obj[key].get<double>();
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

OperatorSpec parse_operator(const json& j) {
  reject_unknown(j, {"kind", "p", "q", "q_convexity", "regularization_eps", "witness",
                     "t_samples", "a0_samples"},
                 "operator");
  const std::string kind = j.value("kind", "p_laplace");
  const double p = get_num(j, "p");
  OperatorSpec op = OperatorSpec::p_laplace(2.0);
  if (kind == "p_laplace") {
    op = OperatorSpec::p_laplace(p);
  } else if (kind == "pq_laplace") {
    op = OperatorSpec::pq_laplace(p, get_num(j, "q"));
  } else if (kind == "p_mean_curvature") {
    op = OperatorSpec::p_mean_curvature(p);
  } else if (kind == "perturbed_p_laplace") {
    op = OperatorSpec::perturbed_p_laplace(p);
  } else if (kind == "tabulated") {
    if (!j.contains("t_samples") || !j.contains("a0_samples"))
      throw ConfigError("config: tabulated operator needs t_samples and a0_samples");
    op = OperatorSpec::tabulated(p, j["t_samples"].get<std::vector<double>>(),
                                 j["a0_samples"].get<std::vector<double>>(),
                                 get_num(j, "q_convexity", p));
  } else {
    throw ConfigError("config: unknown operator kind '" + kind + "'");
  }
  if (j.contains("q_convexity")) op.set_q_convexity(get_num(j, "q_convexity"));
  if (j.contains("regularization_eps")) op.set_regularization_eps(get_num(j, "regularization_eps"));
  if (j.contains("witness")) {
    const json& w = j["witness"];
    reject_unknown(w, {"c_hat", "c0", "c1", "c2", "tau"}, "operator.witness");
    GrowthWitness gw = op.witness();
    gw.c_hat = get_num(w, "c_hat", gw.c_hat);
    gw.c0 = get_num(w, "c0", gw.c0);
    gw.c1 = get_num(w, "c1", gw.c1);
    gw.c2 = get_num(w, "c2", gw.c2);
    gw.tau = get_num(w, "tau", gw.tau);
    op.set_witness(gw);
  }
  return op;
}

PerturbationSpec parse_perturbation(const json& j, double p) {
  reject_unknown(j, {"kind", "tau", "q", "r", "s", "theta", "terms"}, "problem.f");
  const std::string kind = j.value("kind", "power_sum");
  if (kind == "sublinear_example")
    return PerturbationSpec::sublinear_example(get_num(j, "tau", 1.5), get_num(j, "q", 2.0),
                                               get_num(j, "r", 2.5), get_num(j, "s", 1.8));
  if (kind == "superlinear_ar")
    return PerturbationSpec::superlinear_ar(get_num(j, "tau", 1.5), get_num(j, "theta", 1.8), p,
                                            get_num(j, "r", p + 2.0));
  if (kind == "superlinear_non_ar")
    return PerturbationSpec::superlinear_non_ar(get_num(j, "tau", 1.5), get_num(j, "theta", 1.8),
                                                p);
  if (kind == "power_sum") {
    if (!j.contains("terms") || !j["terms"].is_array() || j["terms"].empty())
      throw ConfigError("config: power_sum needs a nonempty terms array");
    std::vector<PowerTerm> terms;
    for (const json& t : j["terms"]) {
      reject_unknown(t, {"coef", "exp"}, "problem.f.terms");
      terms.push_back({get_num(t, "coef"), get_num(t, "exp")});
    }
    return PerturbationSpec::power_sum(std::move(terms), p);
  }
  throw ConfigError("config: unknown perturbation kind '" + kind + "'");
}

ProblemSpec parse_problem(const json& j, double p) {
  reject_unknown(j, {"interval", "xi", "beta", "f"}, "problem");
  if (!j.contains("interval") || !j["interval"].is_array() || j["interval"].size() != 2)
    throw ConfigError("config: problem.interval must be [a, b]");
  const double a = j["interval"][0].get<double>();
  const double b = j["interval"][1].get<double>();

  Potential xi = Potential::constant(0.0);
  if (j.contains("xi")) {
    const json& x = j["xi"];
    reject_unknown(x, {"const", "nodes"}, "problem.xi");
    if (x.contains("const") == x.contains("nodes"))
      throw ConfigError("config: problem.xi needs exactly one of 'const' or 'nodes'");
    if (x.contains("const"))
      xi = Potential::constant(get_num(x, "const"));
    else
      xi = Potential::samples(x["nodes"].get<std::vector<double>>());
  }

  std::array<double, 2> beta = {0.0, 0.0};
  if (j.contains("beta")) {
    if (!j["beta"].is_array() || j["beta"].size() != 2)
      throw ConfigError("config: problem.beta must be [left, right]");
    beta = {j["beta"][0].get<double>(), j["beta"][1].get<double>()};
  }

  PerturbationSpec f = j.contains("f")
                           ? parse_perturbation(j["f"], p)
                           : PerturbationSpec::power_sum({{1.0, std::min(1.5, 0.5 * (1.0 + p))}}, p);
  return ProblemSpec(a, b, std::move(xi), beta, std::move(f), p);
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  reject_unknown(j,
                 {"operator", "problem", "solver", "output_dir", "hypcheck", "eigen", "solve",
                  "second", "sweep", "lambda_star", "verify"},
                 "top level");
  if (!j.contains("operator")) throw ConfigError("config: operator block is required");

  RunConfig cfg;
  cfg.raw = j;
  cfg.config_hash = fnv1a_hex(text);
  cfg.op = parse_operator(j["operator"]);
  if (j.contains("problem")) cfg.problem = parse_problem(j["problem"], cfg.op.p());

  if (j.contains("solver")) {
    const json& s = j["solver"];
    reject_unknown(
        s, {"n_cells", "tol_grad", "max_iters", "eta_shift", "xi_hat", "divergence_norm", "seed"},
        "solver");
    cfg.n_cells = static_cast<int>(get_num(s, "n_cells", 256));
    cfg.params.tol_grad = get_num(s, "tol_grad", cfg.params.tol_grad);
    cfg.params.max_iters = static_cast<int>(get_num(s, "max_iters", cfg.params.max_iters));
    cfg.params.eta_shift = get_num(s, "eta_shift", cfg.params.eta_shift);
    cfg.params.xi_hat = get_num(s, "xi_hat", cfg.params.xi_hat);
    cfg.params.divergence_norm = get_num(s, "divergence_norm", cfg.params.divergence_norm);
    cfg.params.seed = static_cast<std::uint64_t>(get_num(s, "seed", 42));
    if (!(cfg.params.tol_grad > 0.0)) throw ConfigError("config: tol_grad must be positive");
  }
  cfg.output_dir = j.value("output_dir", "out");
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace parobin
