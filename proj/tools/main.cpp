#include <iostream>

#if __has_include(<CLI/CLI.hpp>)
#include <CLI/CLI.hpp>
#else
#include <CLI11.hpp>
#endif

#include "maid/experiment/commands.hpp"
#include "maid/version.hpp"

namespace ex = maid::experiment;

int main(int argc, char** argv) {
  CLI::App app{"Bilevel hyperparameter learning with adaptive inexact descent"};
  app.set_version_flag("--version", std::string(maid::kVersion));
  app.require_subcommand(1);

  ex::Overrides overrides;
  std::int64_t budget = 0;
  std::uint64_t seed = 0;
  std::string out_path;
  auto add_overrides = [&](CLI::App* cmd, bool with_budget, bool with_seed) {
    if (with_budget) cmd->add_option("--budget", budget, "Lower-level unit budget cap")->check(CLI::NonNegativeNumber);
    if (with_seed) cmd->add_option("--seed", seed, "Root seed");
    cmd->add_option("--out", out_path, "Output directory (run) or image path (denoise)");
  };

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run MAID for every sweep element of a config");
  run->add_option("config", config_path, "Experiment config (JSON)")->required();
  add_overrides(run, true, true);

  std::string problem;
  std::uint64_t check_seed = 0;
  auto* check = app.add_subcommand("check", "Finite-difference check of a built-in problem");
  check->add_option("problem", problem, "quadratic | tv | tv-robust | logistic")->required();
  check->add_option("--seed", check_seed, "Instance and direction seed");

  auto* denoise = app.add_subcommand("denoise", "Denoise a PGM image with learned TV parameters");
  denoise->add_option("config", config_path, "Denoise config (JSON)")->required();
  add_overrides(denoise, false, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return ex::kExitConfig;
  }

  if (run->count("--budget")) overrides.budget = budget;
  if (run->count("--seed")) overrides.seed = seed;
  if (!out_path.empty()) overrides.out = out_path;

  if (*run) return ex::cmd_run(config_path, overrides, std::cout, std::cerr);
  if (*check) return ex::cmd_check(problem, check_seed, std::cout, std::cerr);
  return ex::cmd_denoise(config_path, overrides, std::cout, std::cerr);
}
