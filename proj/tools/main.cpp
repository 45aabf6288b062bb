// Copyright (c) the parobin contributors.
// SPDX-License-Identifier: Apache-2.0

#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "parobin/config.hpp"
#include "parobin/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"parobin: positive-solution branches of quasilinear Robin problems on an interval"};
  app.set_version_flag("--version", PAROBIN_VERSION);

  std::string command;
  std::string config_path;
  std::string out_dir;
  int threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads <= 0) threads = 1;
  std::optional<std::uint64_t> seed;

  app.add_option("command", command, "hypcheck | eigen | solve | second | sweep | lambda-star | verify")
      ->required();
  app.add_option("--config", config_path, "JSON configuration file")->required();
  app.add_option("--out", out_dir, "output directory (default: config output_dir)");
  app.add_option("--threads", threads, "worker threads for sweep");
  std::uint64_t seed_value = 0;
  auto* seed_opt = app.add_option("--seed", seed_value, "override the solver seed");

  CLI11_PARSE(app, argc, argv);
  if (seed_opt->count() > 0) seed = seed_value;

  try {
    parobin::RunConfig cfg = parobin::load_config(config_path);
    return parobin::run_command(cfg, command, out_dir, threads, seed);
  } catch (const parobin::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 4;
  } catch (const parobin::NoConvergenceError& e) {
    std::cerr << "solver did not converge: " << e.what() << "\n";
    return 5;
  } catch (const parobin::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 4;
  }
}
