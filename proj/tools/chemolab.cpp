// Command-line front end: chemolab run | verify | sweep.
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "chemolab/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"chemolab: radial chemotaxis simulations with self-checks"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string suite = "all";
  std::string axis;
  std::string values;
  std::string fault;

  auto* run = app.add_subcommand("run", "Run one configuration and write series/snapshots/meta");
  run->add_option("--config", config_path, "Config file (key = value lines)")->required();
  run->add_option("--out", out_dir, "Output directory (default: run.out or out/<label>)");

  auto* verify = app.add_subcommand("verify", "Run built-in invariant checks");
  verify->add_option("--suite", suite, "grid, motility, stepper, diagnostics, scenarios or all");
  verify->add_option("--inject-fault", fault, "Deliberately break an operator (leaky-boundary)")
      ->group("")
      ->check(CLI::IsMember({"leaky-boundary"}));

  auto* sweep = app.add_subcommand("sweep", "Run a config template over a list of values of one key");
  sweep->add_option("--config", config_path, "Template config file")->required();
  sweep->add_option("--axis", axis, "Config key to vary, e.g. scenario.epsilon")->required();
  sweep->add_option("--values", values, "Comma-separated values")->required();
  sweep->add_option("--out", out_dir, "Output directory (default: run.out or out/<label>)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return chemolab::kExitInvalidConfig;
  }

  if (run->parsed()) return chemolab::cmd_run(config_path, out_dir, std::cerr);
  if (verify->parsed()) {
    chemolab::VerifyOptions options;
    if (fault == "leaky-boundary") options.laplacian = chemolab::leaky_boundary_laplacian();
    return chemolab::cmd_verify(suite, std::cout, options);
  }
  return chemolab::cmd_sweep(config_path, axis, chemolab::split_values(values), out_dir, std::cerr);
}
