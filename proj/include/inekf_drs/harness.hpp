#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "inekf_drs/filter.hpp"
#include "inekf_drs/metrics.hpp"
#include "inekf_drs/observability.hpp"
#include "inekf_drs/sim.hpp"

namespace inekf_drs {

enum ExitCode { kExitOk = 0, kExitInputError = 1, kExitNumericalError = 2 };

struct MonteCarloOptions {
  FilterVariant variant = FilterVariant::kDrs;
  int runs = 1;
  std::uint64_t seed = 1;
  NoiseConfig noise = default_noise_config();
  int threads = 0;  // 0: hardware concurrency
  bool zero_initial_error = false;
  double rms_after_start = 5.0;
};

struct RunResult {
  InitialError initial;
  RunLog log;
  std::vector<ErrorSample> errors;
  RunReport report;
};

/// Seed of run `index` derived from the base seed (splitmix64).
std::uint64_t run_seed(std::uint64_t seed, int index);

/// Independent runs with per-run initial-error draws. Output order follows the
/// run index regardless of scheduling. A run that hits a numerical failure is
/// marked failed in its report.
std::vector<RunResult> run_monte_carlo(const ScenarioDataset& data, const MonteCarloOptions& options);

/// Median over runs of a per-run value.
double median(std::vector<double> values);

std::string report_json(const std::vector<RunResult>& runs, FilterVariant variant);
std::string observability_json(const std::vector<ObservabilityReport>& rows);

int cli_simulate(const std::string& config_path, const std::string& out_path, std::ostream& out,
                 std::ostream& err);

struct CliRunArgs {
  std::string dataset;
  FilterVariant variant = FilterVariant::kDrs;
  int runs = 1;
  std::uint64_t seed = 1;
  std::string out_dir;
  std::string noise_path;  // optional override of the dataset's noise settings
  int threads = 0;
};

/// Writes run_NNN.jsonl per run, report.json and envelope.csv into out_dir.
int cli_run(const CliRunArgs& args, std::ostream& out, std::ostream& err);

/// Prints a RunReport as JSON; `truth_path` is a dataset file.
int cli_eval(const std::string& truth_path, const std::string& estimate_path, std::ostream& out,
             std::ostream& err);

int cli_observability(const TiltSweep& sweep, const std::string& out_path, std::ostream& out,
                      std::ostream& err);

}  // namespace inekf_drs
