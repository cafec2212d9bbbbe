#include <softds_cli/commands.hpp>

#include <CLI11.hpp>

#include <iostream>

namespace {

void add_common(CLI::App* cmd, softds::cli::CommonOptions& o) {
  cmd->add_option("--scenario", o.scenario, "Scenario JSON file")->required();
  cmd->add_option("--out", o.out, "Output path")->required();
  cmd->add_option("--dt", o.dt, "Override the integration time step");
  cmd->add_option("--max-steps", o.max_steps, "Override the step budget");
  cmd->add_option("--seed", o.seed, "Recorded in output metadata (no stochastic paths)");
  cmd->add_option("--starts-grid", o.starts_grid, "Replace starts with an AxB grid over the workspace box");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Soft-obstacle DS modulation toolkit"};
  app.set_version_flag("--version", std::string(SOFTDS_CLI_VERSION));
  app.require_subcommand(1);

  softds::cli::SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Integrate trajectories and write CSVs plus summary.json");
  add_common(simulate, sim.common);
  simulate->add_flag("--concat", sim.concat, "Write one trajectories.csv with a run column");
  simulate->add_option("--workers", sim.workers, "Worker threads (0 = all cores)");

  softds::cli::FieldOptions fld;
  auto* field = app.add_subcommand("field", "Evaluate the total velocity field on a grid");
  add_common(field, fld.common);
  field->add_option("--grid", fld.grid, "Grid resolution AxB over the workspace box")->capture_default_str();

  softds::cli::SweepOptions swp;
  auto* sweep = app.add_subcommand("sweep", "Stiffness sweep and time-reduction map");
  add_common(sweep, swp.common);
  sweep->add_option("--k", swp.k_values, "Comma-separated k values, e.g. 1,e^0.25,e^0.5")->capture_default_str();
  sweep->add_option("--reduction-k", swp.reduction_k, "Stiffness for the reduction map (default: largest k)");
  sweep->add_option("--workers", swp.workers, "Worker threads (0 = all cores)");

  softds::cli::ValidateOptions val;
  auto* validate = app.add_subcommand("validate", "Check DS stability conditions");
  validate->add_option("--ds", val.ds, "DS JSON file (or a scenario file)")->required();
  validate->add_option("--out", val.out, "Also write the report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : softds::cli::kValidationFailure;
  }

  if (*simulate) return softds::cli::cmd_simulate(sim, std::cout, std::cerr);
  if (*field) return softds::cli::cmd_field(fld, std::cout, std::cerr);
  if (*sweep) return softds::cli::cmd_sweep(swp, std::cout, std::cerr);
  return softds::cli::cmd_validate(val, std::cout, std::cerr);
}
