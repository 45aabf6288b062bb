// Copyright (c) the parobin contributors.
// SPDX-License-Identifier: Apache-2.0

#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

#include "parobin/config.hpp"
#include "parobin/continuation.hpp"
#include "parobin/eigen.hpp"
#include "parobin/version.hpp"

namespace parobin {

namespace {

using nlohmann::json;

json meta(const RunConfig& cfg) {
  return json{{"version", PAROBIN_VERSION},
              {"config_hash", cfg.config_hash},
              {"seed", cfg.params.seed}};
}

std::vector<std::string> csv_header(const RunConfig& cfg) {
  return {std::string("parobin ") + PAROBIN_VERSION + " config=" + cfg.config_hash +
          " seed=" + std::to_string(cfg.params.seed)};
}

void write_json(const json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << j.dump(2) << "\n";
}

json outcome_json(const SolveOutcome& out) {
  json j{{"status", to_string(out.status)},
         {"residual", out.residual},
         {"energy", out.energy_value},
         {"iterations", out.iterations}};
  if (out.u) j["uinf_norm"] = out.u->max_abs();
  return j;
}

std::vector<double> slopes_column(const DiscreteFunction& u) {
  std::vector<double> s(static_cast<std::size_t>(u.size()));
  for (int c = 0; c < u.mesh().cells(); ++c) s[static_cast<std::size_t>(c)] = u.slope(c);
  s.back() = u.slope(u.mesh().cells() - 1);
  return s;
}

int exit_code_for(const SolveOutcome& out) {
  switch (out.status) {
    case SolveStatus::Solution:
      return 0;
    case SolveStatus::NoSolutionDetected:
      return 2;
    case SolveStatus::NoConvergence:
      return 5;
  }
  return 5;
}

void reject_unknown_block(const json& obj, const std::set<std::string>& allowed,
                          const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError("config: unknown key '" + it.key() + "' in " + where);
}

int cmd_hypcheck(const RunConfig& cfg, const std::filesystem::path& dir) {
  if (cfg.raw.contains("hypcheck"))
    reject_unknown_block(cfg.raw["hypcheck"], {}, "hypcheck");
  HypothesisReport rep = cfg.op.check_hypotheses(OperatorSpec::default_audit_grid());
  json items = json::array();
  for (const auto& it : rep.items)
    items.push_back(json{{"name", it.name}, {"pass", it.pass}, {"max_violation", it.max_violation}});
  json j{{"_meta", meta(cfg)},
         {"operator", cfg.op.kind_name()},
         {"p", cfg.op.p()},
         {"q_convexity", cfg.op.q_convexity()},
         {"items", items},
         {"fitted_c5", rep.fitted_c5},
         {"pass", rep.pass()}};
  if (cfg.problem) {
    const auto& fl = cfg.problem->perturbation().flags();
    j["perturbation"] = json{{"kind", cfg.problem->perturbation().kind_name()},
                             {"sublinear_H1", fl.sublinear_H1},
                             {"strictly_positive", fl.strictly_positive},
                             {"superlinear_H2", fl.superlinear_H2},
                             {"unique_H1pp", fl.unique_H1pp}};
  }
  write_json(j, dir / "hypcheck.json");
  return rep.pass() ? 0 : 3;
}

int cmd_eigen(const RunConfig& cfg, const std::filesystem::path& dir) {
  const ProblemSpec& prob = cfg.require_problem();
  json blk = cfg.raw.value("eigen", json::object());
  reject_unknown_block(blk, {"r", "tol", "check_simplicity", "n_starts"}, "eigen");
  const double r = blk.value("r", cfg.op.p());
  const double tol = blk.value("tol", 1e-10);
  const Mesh mesh = prob.make_mesh(cfg.n_cells);

  EigenResult res = principal_eigenpair(r, prob, mesh, tol, cfg.params.seed);
  json j{{"_meta", meta(cfg)},
         {"lambda1", res.lambda1},
         {"residual", res.residual},
         {"iterations", res.iterations},
         {"r", r}};
  if (blk.value("check_simplicity", false)) {
    SimplicityReport sr = check_simplicity(res, prob, mesh, r, blk.value("n_starts", 8), tol,
                                           cfg.params.seed);
    j["simplicity"] = json{{"max_c1_distance", sr.max_c1_distance},
                           {"lambda_spread", sr.lambda_spread},
                           {"starts", sr.starts}};
  }
  write_json(j, dir / "eigen.json");
  write_csv(res.u1, (dir / "eigenfunction.csv").string(), csv_header(cfg));
  return 0;
}

int cmd_solve(const RunConfig& cfg, const std::filesystem::path& dir) {
  const ProblemSpec& prob = cfg.require_problem();
  if (!cfg.raw.contains("solve")) throw ConfigError("config: solve block is required");
  const json& blk = cfg.raw["solve"];
  reject_unknown_block(blk, {"lambda", "aux"}, "solve");
  if (!blk.contains("lambda")) throw ConfigError("config: solve.lambda is required");
  const double lambda = blk["lambda"].get<double>();
  const Mesh mesh = prob.make_mesh(cfg.n_cells);

  SolveOutcome out = minimal_solution(cfg.op, prob, lambda, mesh, cfg.params);
  json j{{"_meta", meta(cfg)}, {"lambda", lambda}, {"outcome", outcome_json(out)}};
  write_json(j, dir / "solve.json");
  if (out.u)
    write_csv(*out.u, (dir / "solution.csv").string(), csv_header(cfg),
              {{"Du", slopes_column(*out.u)}});
  return exit_code_for(out);
}

int cmd_second(const RunConfig& cfg, const std::filesystem::path& dir) {
  const ProblemSpec& prob = cfg.require_problem();
  if (!cfg.raw.contains("second")) throw ConfigError("config: second block is required");
  const json& blk = cfg.raw["second"];
  reject_unknown_block(blk, {"lambda"}, "second");
  if (!blk.contains("lambda")) throw ConfigError("config: second.lambda is required");
  const double lambda = blk["lambda"].get<double>();
  const Mesh mesh = prob.make_mesh(cfg.n_cells);

  SolveOutcome first = minimal_solution(cfg.op, prob, lambda, mesh, cfg.params);
  json j{{"_meta", meta(cfg)}, {"lambda", lambda}, {"minimal", outcome_json(first)}};
  if (first.status != SolveStatus::Solution) {
    write_json(j, dir / "second.json");
    return exit_code_for(first);
  }
  write_csv(*first.u, (dir / "solution_min.csv").string(), csv_header(cfg));

  int code = 0;
  try {
    SolveOutcome second = second_solution(cfg.op, prob, lambda, *first.u, cfg.params);
    j["second"] = outcome_json(second);
    if (second.status == SolveStatus::Solution) {
      write_csv(*second.u, (dir / "solution_second.csv").string(), csv_header(cfg));
      double min_gap = 1e300;
      for (int i = 0; i < second.u->size(); ++i)
        min_gap = std::min(min_gap, (*second.u)[i] - (*first.u)[i]);
      j["ordering_min_gap"] = min_gap;
      j["c1_distance"] = c1_distance(*second.u, *first.u);
    }
    code = exit_code_for(second);
  } catch (const PathCollapse& e) {
    j["second"] = json{{"status", "path_collapse"}, {"message", e.what()}};
    code = 2;
  }
  write_json(j, dir / "second.json");
  return code;
}

int cmd_sweep(const RunConfig& cfg, const std::filesystem::path& dir, int threads) {
  const ProblemSpec& prob = cfg.require_problem();
  if (!cfg.raw.contains("sweep")) throw ConfigError("config: sweep block is required");
  const json& blk = cfg.raw["sweep"];
  reject_unknown_block(blk, {"lambda_grid", "with_second"}, "sweep");
  if (!blk.contains("lambda_grid")) throw ConfigError("config: sweep.lambda_grid is required");
  const auto grid = blk["lambda_grid"].get<std::vector<double>>();
  const bool with_second = blk.value("with_second", false);
  const Mesh mesh = prob.make_mesh(cfg.n_cells);

  SolutionBranch branch = sweep(cfg.op, prob, mesh, grid, cfg.params, with_second, threads);

  std::ofstream csv(dir / "branch.csv");
  csv.precision(17);
  for (const auto& line : csv_header(cfg)) csv << "# " << line << "\n";
  csv << "lambda,status,u_min_at_nodes_file,uinf_norm,energy,residual,second_solution_status\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const SolveOutcome& out = branch.outcomes[i];
    std::string file = "-";
    if (out.status == SolveStatus::Solution && out.u) {
      char name[32];
      std::snprintf(name, sizeof(name), "lambda_%03zu.csv", i);
      file = name;
      write_csv(*out.u, (dir / name).string(), csv_header(cfg));
    }
    csv << grid[i] << "," << to_string(out.status) << "," << file << ","
        << (out.u ? out.u->max_abs() : 0.0) << "," << out.energy_value << "," << out.residual
        << ",";
    if (branch.second_outcomes[i])
      csv << to_string(branch.second_outcomes[i]->status);
    else
      csv << "-";
    csv << "\n";
  }

  json j{{"_meta", meta(cfg)}, {"structure_flags", branch.structure_flags()}};
  write_json(j, dir / "sweep.json");
  return 0;
}

int cmd_lambda_star(const RunConfig& cfg, const std::filesystem::path& dir) {
  const ProblemSpec& prob = cfg.require_problem();
  if (!cfg.raw.contains("lambda_star")) throw ConfigError("config: lambda_star block is required");
  const json& blk = cfg.raw["lambda_star"];
  reject_unknown_block(blk, {"bracket", "tol_lambda"}, "lambda_star");
  if (!blk.contains("bracket") || !blk["bracket"].is_array() || blk["bracket"].size() != 2)
    throw ConfigError("config: lambda_star.bracket must be [lo, hi]");
  const double tol = blk.value("tol_lambda", 1e-2);
  const Mesh mesh = prob.make_mesh(cfg.n_cells);

  LambdaStarInterval iv = detect_lambda_star(
      cfg.op, prob, mesh, {blk["bracket"][0].get<double>(), blk["bracket"][1].get<double>()}, tol,
      cfg.params);
  json j{{"_meta", meta(cfg)},
         {"lo", iv.lo},
         {"hi", iv.hi},
         {"evaluations", iv.evaluations},
         {"uncertain", iv.uncertain}};
  write_json(j, dir / "lambda_star.json");
  return 0;
}

int cmd_verify(const RunConfig& cfg, const std::filesystem::path& dir) {
  const ProblemSpec& prob = cfg.require_problem();
  if (!cfg.raw.contains("verify")) throw ConfigError("config: verify block is required");
  const json& blk = cfg.raw["verify"];
  reject_unknown_block(blk, {"lambda", "profile", "residual_tol", "picone"}, "verify");
  if (!blk.contains("lambda") || !blk.contains("profile"))
    throw ConfigError("config: verify needs lambda and profile");
  const double lambda = blk["lambda"].get<double>();
  const double residual_tol = blk.value("residual_tol", 1e-6);
  const Mesh mesh = prob.make_mesh(cfg.n_cells);

  DiscreteFunction u = read_csv(blk["profile"].get<std::string>(), mesh);
  const double rsd = residual(cfg.op, prob, lambda, u);
  const ConeLocation cone = cone_check(u);

  auto [aux_out, aux] = solve_auxiliary(cfg.op, prob, lambda, mesh, cfg.params);
  double barrier_gap = 0.0;
  if (aux_out.u) {
    barrier_gap = 1e300;
    for (int i = 0; i < u.size(); ++i)
      barrier_gap = std::min(barrier_gap, u[i] - (*aux_out.u)[i]);
  }

  json j{{"_meta", meta(cfg)},
         {"lambda", lambda},
         {"residual", rsd},
         {"residual_pass", rsd <= residual_tol},
         {"cone", cone == ConeLocation::InDPlus   ? "D_plus"
                  : cone == ConeLocation::InCPlusOnly ? "C_plus_boundary"
                                                      : "outside"},
         {"barrier_min_gap", barrier_gap},
         {"aux", json{{"c9", aux.c9}, {"c10", aux.c10}, {"q", aux.q}, {"r", aux.r}}}};

  bool pass = rsd <= residual_tol && cone == ConeLocation::InDPlus && barrier_gap >= -1e-8;
  if (blk.value("picone", cfg.op.kind() == OperatorKind::PLaplace)) {
    EigenResult eig = principal_eigenpair(cfg.op.p(), prob, mesh, 1e-10, cfg.params.seed);
    const double defect = picone_defect(eig, u, cfg.op, prob);
    j["picone_defect"] = defect;
    j["lambda1"] = eig.lambda1;
    pass = pass && defect >= -1e-8;
  }
  j["pass"] = pass;
  write_json(j, dir / "verify.json");
  return pass ? 0 : 3;
}

}  // namespace

int run_command(const RunConfig& cfg, const std::string& command, const std::string& out_dir,
                int threads, std::optional<std::uint64_t> seed_override) {
  RunConfig local = cfg;
  if (seed_override) local.params.seed = *seed_override;
  const std::filesystem::path dir = out_dir.empty() ? local.output_dir : out_dir;
  std::filesystem::create_directories(dir);

  if (command == "hypcheck") return cmd_hypcheck(local, dir);
  if (command == "eigen") return cmd_eigen(local, dir);
  if (command == "solve") return cmd_solve(local, dir);
  if (command == "second") return cmd_second(local, dir);
  if (command == "sweep") return cmd_sweep(local, dir, threads);
  if (command == "lambda-star") return cmd_lambda_star(local, dir);
  if (command == "verify") return cmd_verify(local, dir);
  throw ConfigError("unknown command '" + command + "'");
}

}  // namespace parobin
