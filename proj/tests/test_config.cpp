// Copyright (c) the parobin contributors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "parobin/config.hpp"

using namespace parobin;

namespace {

const char* kBaseConfig = R"({
  "operator": {"kind": "p_laplace", "p": 2.0},
  "problem": {
    "interval": [0, 1],
    "xi": {"const": 0.0},
    "beta": [0, 0],
    "f": {"kind": "power_sum", "terms": [{"coef": 1.0, "exp": 1.5}]}
  },
  "solver": {"n_cells": 64, "seed": 42}
})";

}  // namespace

TEST_CASE("config parsing and validation") {
  RunConfig cfg = parse_config(kBaseConfig);
  CHECK(cfg.op.p() == 2.0);
  CHECK(cfg.n_cells == 64);
  CHECK(cfg.problem.has_value());
  CHECK(cfg.problem->perturbation().flags().strictly_positive);
  CHECK(!cfg.config_hash.empty());

  SUBCASE("unknown keys are rejected") {
    CHECK_THROWS_AS(parse_config(R"({"operator": {"kind": "p_laplace", "p": 2.0}, "bogus": 1})"),
                    ConfigError);
    CHECK_THROWS_AS(
        parse_config(R"({"operator": {"kind": "p_laplace", "p": 2.0, "surprise": 3}})"),
        ConfigError);
  }

  SUBCASE("negative beta is rejected") {
    CHECK_THROWS_AS(parse_config(R"({
      "operator": {"kind": "p_laplace", "p": 2.0},
      "problem": {"interval": [0, 1], "beta": [-1, 0]}
    })"),
                    ConfigError);
  }

  SUBCASE("xi needs exactly one representation") {
    CHECK_THROWS_AS(parse_config(R"({
      "operator": {"kind": "p_laplace", "p": 2.0},
      "problem": {"interval": [0, 1], "xi": {"const": 1.0, "nodes": [1, 2]}}
    })"),
                    ConfigError);
  }

  SUBCASE("operator kinds") {
    CHECK(parse_config(R"({"operator": {"kind": "pq_laplace", "p": 3.0, "q": 2.0}})").op.kind() ==
          OperatorKind::PQLaplace);
    CHECK_THROWS_AS(parse_config(R"({"operator": {"kind": "nope", "p": 2.0}})"), ConfigError);
  }
}

TEST_CASE("command dispatch smoke tests") {
  const auto dir = std::filesystem::temp_directory_path() / "parobin_cli_test";
  std::filesystem::remove_all(dir);

  RunConfig cfg = parse_config(kBaseConfig);

  SUBCASE("hypcheck") {
    CHECK(run_command(cfg, "hypcheck", (dir / "hyp").string(), 1, std::nullopt) == 0);
    CHECK(std::filesystem::exists(dir / "hyp" / "hypcheck.json"));
  }

  SUBCASE("eigen on the Neumann constant case") {
    CHECK(run_command(cfg, "eigen", (dir / "eig").string(), 1, std::nullopt) == 0);
    std::ifstream in(dir / "eig" / "eigen.json");
    nlohmann::json j;
    in >> j;
    CHECK(std::abs(j["lambda1"].get<double>()) < 1e-8);
  }

  SUBCASE("solve past the critical parameter exits with code 2") {
    RunConfig c2 = parse_config(R"({
      "operator": {"kind": "p_laplace", "p": 2.0},
      "problem": {
        "interval": [0, 1],
        "xi": {"const": 0.0},
        "beta": [0, 0],
        "f": {"kind": "power_sum", "terms": [{"coef": 1.0, "exp": 1.5}]}
      },
      "solver": {"n_cells": 64, "max_iters": 4000},
      "solve": {"lambda": 0.5}
    })");
    CHECK(run_command(c2, "solve", (dir / "ns").string(), 1, std::nullopt) == 2);
  }

  SUBCASE("unknown command") {
    CHECK_THROWS_AS(run_command(cfg, "fly", (dir / "x").string(), 1, std::nullopt), ConfigError);
  }

  std::filesystem::remove_all(dir);
}
