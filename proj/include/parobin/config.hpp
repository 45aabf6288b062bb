// Copyright (c) the parobin contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef PAROBIN_CONFIG_HPP
#define PAROBIN_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "parobin/diffop.hpp"
#include "parobin/problem.hpp"
#include "parobin/solve.hpp"

namespace parobin {

// Parsed and cross-validated run configuration. Unknown keys anywhere are
// rejected.
struct RunConfig {
  OperatorSpec op = OperatorSpec::p_laplace(2.0);
  std::optional<ProblemSpec> problem;  // set when a problem block is present
  int n_cells = 256;
  SolverParams params;
  std::string output_dir = "out";
  std::string config_hash;
  nlohmann::json raw;

  const ProblemSpec& require_problem() const {
    if (!problem) throw ConfigError("config: a problem block is required for this command");
    return *problem;
  }
};

RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text);

// Exit codes: 0 success, 2 no-solution outcome, 3 hypothesis audit failure,
// 4 config error, 5 solver non-convergence.
int run_command(const RunConfig& cfg, const std::string& command, const std::string& out_dir,
                int threads, std::optional<std::uint64_t> seed_override);

}  // namespace parobin

#endif
