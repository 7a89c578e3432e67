#include <CLI11.hpp>
#include <iostream>
#include <string>

#include "polysafe/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"certify and simulate multi-barrier safety filters"};
  app.require_subcommand(1);

  std::string scenario;
  std::string csv_path;
  std::string svg_path;
  polysafe::CliOptions opts;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("scenario", scenario, "scenario file")->required();
    cmd->add_option("--seed-override", opts.seed_override, "replace the scenario seed list");
    cmd->add_option("--dt", opts.dt_override, "override the integration step");
    cmd->add_option("--policy", opts.policy_override,
                    "override the policy (chebyshev_center, qp_tracking, lp_vertex, "
                    "rotating_vertex, safety_program)");
  };

  CLI::App* check = app.add_subcommand("check", "run certification and print the report");
  add_common(check);

  CLI::App* gamma = app.add_subcommand("gamma", "estimate the contraction margin");
  add_common(gamma);

  CLI::App* run = app.add_subcommand("run", "certify then simulate every (seed, start) case");
  add_common(run);
  run->add_option("--out", opts.out_dir, "output directory (default out)");
  run->add_flag("--force", opts.force, "simulate even if certification fails");

  CLI::App* plot = app.add_subcommand("plot", "render a trajectory CSV as SVG");
  plot->add_option("csv", csv_path, "trajectory CSV from a run")->required();
  plot->add_option("scenario", scenario, "scenario file")->required();
  plot->add_option("svg", svg_path, "output SVG path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? polysafe::kExitOk : polysafe::kExitBadInput;
  }

  if (*check) return polysafe::cmd_check(scenario, opts, std::cout, std::cerr);
  if (*gamma) return polysafe::cmd_gamma(scenario, opts, std::cout, std::cerr);
  if (*run) return polysafe::cmd_run(scenario, opts, std::cout, std::cerr);
  if (*plot) return polysafe::cmd_plot(csv_path, scenario, svg_path, std::cout, std::cerr);
  return polysafe::kExitBadInput;
}
