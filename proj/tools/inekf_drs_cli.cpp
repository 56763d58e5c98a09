#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "inekf_drs/errors.hpp"
#include "inekf_drs/harness.hpp"

using namespace inekf_drs;

int main(int argc, char** argv) {
  CLI::App app{"Invariant EKF for legged robots on a moving rigid surface"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic scenario dataset");
  simulate->add_option("--config", config_path, "Scenario config (key = value)")->required();
  simulate->add_option("--out", out_path, "Output dataset (JSON Lines)")->required();

  CliRunArgs run_args;
  std::string variant = "drs";
  auto* run = app.add_subcommand("run", "Run the filter over a dataset");
  run->add_option("--dataset", run_args.dataset, "Dataset file")->required();
  run->add_option("--variant", variant, "drs or srs")->check(CLI::IsMember({"drs", "srs"}));
  run->add_option("--runs", run_args.runs, "Number of Monte Carlo runs")->check(CLI::PositiveNumber);
  run->add_option("--seed", run_args.seed, "Base seed for initial-error draws");
  run->add_option("--out", run_args.out_dir, "Output directory")->required();
  run->add_option("--noise", run_args.noise_path, "Noise config overriding the dataset header");
  run->add_option("--threads", run_args.threads, "Worker threads (0: all cores)");

  std::string truth_path;
  std::string estimate_path;
  auto* eval = app.add_subcommand("eval", "Evaluate an estimate trajectory against truth");
  eval->add_option("--dataset", truth_path, "Dataset file holding the truth records")->required();
  eval->add_option("--estimate", estimate_path, "Estimate trajectory (JSON Lines)")->required();

  TiltSweep sweep;
  std::string obs_out;
  bool no_orientation = false;
  auto* obs = app.add_subcommand("obs", "Observability rank and flags versus surface tilt");
  obs->add_option("--tilt-start", sweep.start_deg, "First tilt (deg)");
  obs->add_option("--tilt-stop", sweep.stop_deg, "Last tilt (deg)");
  obs->add_option("--tilt-step", sweep.step_deg, "Tilt step (deg)");
  obs->add_option("--dt", sweep.dt, "Propagation interval (s)");
  obs->add_option("--blocks", sweep.n_blocks, "Number of stacked blocks");
  obs->add_flag("--no-orientation", no_orientation, "Drop the foot-orientation rows");
  obs->add_option("--out", obs_out, "Output JSON (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  if (*simulate) return cli_simulate(config_path, out_path, std::cout, std::cerr);
  if (*run) {
    run_args.variant = parse_variant(variant);
    return cli_run(run_args, std::cout, std::cerr);
  }
  if (*eval) return cli_eval(truth_path, estimate_path, std::cout, std::cerr);
  sweep.include_orientation = !no_orientation;
  return cli_observability(sweep, obs_out, std::cout, std::cerr);
}
