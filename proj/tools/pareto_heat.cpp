// Command line runner: single solves, (alpha, mu) front sweeps, the built-in
// validation suite and preset management.
//
// Exit codes: 0 success, 1 configuration/usage error, 2 solver non-convergence
// (solve only), 3 validation failure.
#include <cstdio>
#include <exception>
#include <functional>
#include <iostream>

#include "CLI11.hpp"
#include "pareto/experiment.hpp"
#include "pareto/validation.hpp"

namespace {

using namespace pareto;

int run_solve(const std::string& path) {
  config::ExperimentConfig cfg = config::parse_config_file(path);
  cfg.validate();
  if (cfg.alpha_values.size() != 1 || cfg.mu_values.size() != 1)
    throw config::ConfigError(
        "solve needs exactly one alpha and one mu; use 'front' for sweeps");

  const experiment::FrontResult fr = experiment::run_front(cfg);
  for (const auto& file : experiment::write_outputs(cfg, fr))
    std::cerr << "wrote " << file << "\n";

  const experiment::CellResult& cell = fr.cells.front();
  std::cout << experiment::kCsvHeader << "\n" << experiment::csv_row(cfg, cell) << "\n";
  if (cell.failed) {
    std::cerr << "solver error: " << cell.error << "\n";
    return 2;
  }
  if (!cell.report.converged) {
    std::cerr << "not converged after " << cell.report.iterations
              << " iterations (residual " << cell.report.final_residual() << ")\n";
    return 2;
  }
  return 0;
}

int run_front(const std::string& path) {
  config::ExperimentConfig cfg = config::parse_config_file(path);
  cfg.validate();
  const experiment::FrontResult fr = experiment::run_front(cfg);
  for (const auto& file : experiment::write_outputs(cfg, fr))
    std::cerr << "wrote " << file << "\n";
  if (cfg.csv_path.empty()) std::cout << fr.csv;

  int failures = 0;
  for (const auto& cell : fr.cells)
    if (cell.failed) {
      ++failures;
      std::cerr << "cell alpha=" << cell.alpha << " mu=" << cell.mu
                << " failed: " << cell.error << "\n";
    }
  if (failures > 0)
    std::cerr << failures << " of " << fr.cells.size()
              << " cells failed; their CSV rows carry nan costs\n";
  return 0;
}

int run_validate(const std::string& preset, bool flip_gradient_sign) {
  if (preset != "default")
    throw config::ConfigError("unknown validation preset '" + preset + "' (only: default)");
  const validation::SuiteReport rep = validation::run_suite(flip_gradient_sign);
  for (const auto& c : rep.checks) {
    std::printf("%s  %-26s max err %.3e  (allowed %.0e)  %s\n", c.passed ? "PASS" : "FAIL",
                c.name.c_str(), c.error, c.threshold, c.detail.c_str());
  }
  if (!rep.all_passed()) {
    std::printf("validation FAILED\n");
    return 3;
  }
  std::printf("validation passed\n");
  return 0;
}

int run_presets(const std::string& action, const std::string& name, bool full) {
  if (action == "list") {
    for (const auto& n : config::preset_names()) std::cout << n << "\n";
    return 0;
  }
  if (action == "show") {
    if (name.empty()) throw config::ConfigError("presets show needs a preset name");
    std::cout << config::preset_text(name, full);
    return 0;
  }
  throw config::ConfigError("unknown presets action '" + action + "' (list or show)");
}

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const SolverFailure& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pareto equilibria for controlled heat models"};
  app.require_subcommand(1);

  std::string solve_cfg, front_cfg;
  auto* solve = app.add_subcommand("solve", "run a single (alpha, mu) solve from a config file");
  solve->add_option("config", solve_cfg, "config file path")->required();

  auto* front = app.add_subcommand("front", "run the full (alpha, mu) sweep of a config file");
  front->add_option("config", front_cfg, "config file path")->required();

  std::string val_preset = "default";
  bool flip_sign = false;
  auto* validate = app.add_subcommand("validate", "run the built-in correctness suite");
  validate->add_option("--preset", val_preset, "check selection (default)");
  validate->add_flag("--flip-gradient-sign", flip_sign,
                     "debug: corrupt the gradients so the suite must fail");

  std::string presets_action, presets_name;
  bool presets_full = false;
  auto* presets = app.add_subcommand("presets", "list or show the built-in experiment presets");
  presets->add_option("action", presets_action, "list | show")->required();
  presets->add_option("name", presets_name, "preset name for 'show'");
  presets->add_flag("--full", presets_full,
                    "emit the full-resolution variant (long runtimes, untimed)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (*solve) return guarded([&] { return run_solve(solve_cfg); });
  if (*front) return guarded([&] { return run_front(front_cfg); });
  if (*validate) return guarded([&] { return run_validate(val_preset, flip_sign); });
  return guarded([&] { return run_presets(presets_action, presets_name, presets_full); });
}
