#include "inekf_drs/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "inekf_drs/dataset_io.hpp"
#include "inekf_drs/errors.hpp"

namespace inekf_drs {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

json channels_json(const ChannelArray& a) {
  json j = json::object();
  for (int c = 0; c < kChannelCount; ++c) j[channel_name(c)] = a[c];
  return j;
}

json report_to_json(const RunReport& r) {
  json j;
  j["samples"] = r.samples;
  j["failed"] = r.failed;
  if (r.failed) j["failure"] = r.failure;
  j["rms_full"] = channels_json(r.rms_full);
  j["rms_after"] = channels_json(r.rms_after);
  j["rms_after_start"] = r.rms_after_start;
  json conv = json::object();
  for (int c = 0; c < kChannelCount; ++c) {
    conv[channel_name(c)] = r.convergence[c] ? json(*r.convergence[c]) : json(nullptr);
  }
  j["convergence_time"] = conv;
  j["initial_abs_error"] = channels_json(r.initial_abs);
  j["final_abs_error"] = channels_json(r.final_abs);
  return j;
}

}  // namespace

std::uint64_t run_seed(std::uint64_t seed, int index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<RunResult> run_monte_carlo(const ScenarioDataset& data, const MonteCarloOptions& options) {
  if (options.runs < 1) throw InputError("number of runs must be at least 1");
  const VirtualLeg model;
  const ChannelArray thresholds = default_thresholds();
  std::vector<RunResult> results(static_cast<std::size_t>(options.runs));

  auto one = [&](int i) {
    RunResult& r = results[static_cast<std::size_t>(i)];
    if (!options.zero_initial_error) r.initial = initial_error_draw(run_seed(options.seed, i));
    try {
      const FilterState init = initial_filter_state(data, r.initial, model);
      r.log = run_variant(init, data, options.variant, options.noise, model);
      std::vector<EstimateRecord> records;
      records.reserve(r.log.estimates.size());
      for (const FilterState& s : r.log.estimates) records.push_back(to_record(s));
      r.errors = compute_errors(data.truth, records);
      r.report = make_report(r.errors, thresholds, options.rms_after_start);
    } catch (const NumericalError& e) {
      r.report.failed = true;
      r.report.failure = e.what();
    }
  };

  int threads = options.threads > 0 ? options.threads : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, options.runs);
  if (threads == 1) {
    for (int i = 0; i < options.runs; ++i) one(i);
    return results;
  }
  std::atomic<int> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&]() {
      for (int i = next++; i < options.runs; i = next++) {
        try {
          one(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
  return results;
}

double median(std::vector<double> v) {
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string report_json(const std::vector<RunResult>& runs, FilterVariant variant) {
  json j;
  j["variant"] = variant_name(variant);
  j["runs"] = runs.size();
  int failed = 0;
  json per_run = json::array();
  ChannelArray med_full{};
  ChannelArray med_after{};
  for (int c = 0; c < kChannelCount; ++c) {
    std::vector<double> full;
    std::vector<double> after;
    for (const RunResult& r : runs) {
      if (r.report.failed) continue;
      full.push_back(r.report.rms_full[c]);
      after.push_back(r.report.rms_after[c]);
    }
    med_full[c] = median(full);
    med_after[c] = median(after);
  }
  for (const RunResult& r : runs) {
    if (r.report.failed) ++failed;
    json rj = report_to_json(r.report);
    rj["initial_velocity_error"] = {r.initial.velocity.x(), r.initial.velocity.y(), r.initial.velocity.z()};
    rj["initial_orientation_error"] = {r.initial.orientation.x(), r.initial.orientation.y(),
                                       r.initial.orientation.z()};
    rj["updates_applied"] = r.log.updates_applied;
    rj["updates_skipped"] = r.log.updates_skipped;
    rj["jumps"] = r.log.jumps;
    rj["warnings"] = r.log.warnings.size();
    per_run.push_back(rj);
  }
  j["failed"] = failed;
  j["median_rms_full"] = channels_json(med_full);
  j["median_rms_after"] = channels_json(med_after);
  j["per_run"] = per_run;
  return j.dump(2);
}

std::string observability_json(const std::vector<ObservabilityReport>& rows) {
  json table = json::array();
  for (const ObservabilityReport& r : rows) {
    table.push_back({{"tilt_deg", r.tilt * 180.0 / M_PI},
                     {"rank", r.rank},
                     {"roll_pitch", r.roll_pitch},
                     {"yaw", r.yaw},
                     {"velocity", r.velocity},
                     {"position", r.position},
                     {"contact_position", r.contact_position},
                     {"relative_position", r.relative_position},
                     {"dt", r.dt},
                     {"n_blocks", r.n_blocks}});
  }
  return json{{"tilt_sweep", table}}.dump(2);
}

int cli_simulate(const std::string& config_path, const std::string& out_path, std::ostream& out,
                 std::ostream& err) {
  try {
    const ScenarioConfig config = load_scenario_config(config_path);
    const ScenarioDataset data = generate(config);
    save_dataset(out_path, data);
    double max_vc = 0.0;
    for (const auto& s : data.contact_velocity) max_vc = std::max(max_vc, s.v.norm());
    out << "scenario " << data.header.scenario << ": duration " << config.duration << " s, "
        << data.imu.size() << " imu, " << data.encoder.size() << " encoder, "
        << data.drs_orientation.size() << " drs_pose, " << data.contact_switch.size()
        << " contact_switch; max |v_c| = " << std::setprecision(4) << max_vc << " m/s\n";
    return kExitOk;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumericalError;
  }
}

int cli_run(const CliRunArgs& args, std::ostream& out, std::ostream& err) {
  try {
    if (args.runs < 1) throw InputError("--runs must be at least 1");
    const ScenarioDataset data = load_dataset(args.dataset);
    MonteCarloOptions opts;
    opts.variant = args.variant;
    opts.runs = args.runs;
    opts.seed = args.seed;
    opts.threads = args.threads;
    opts.noise = args.noise_path.empty() ? data.header.noise : load_noise_config(args.noise_path);
    const std::vector<RunResult> runs = run_monte_carlo(data, opts);

    fs::create_directories(args.out_dir);
    std::vector<std::vector<ErrorSample>> ok_errors;
    int failed = 0;
    for (std::size_t i = 0; i < runs.size(); ++i) {
      std::ostringstream name;
      name << "run_" << std::setw(3) << std::setfill('0') << i << ".jsonl";
      save_estimates((fs::path(args.out_dir) / name.str()).string(), runs[i].log.estimates);
      for (const std::string& w : runs[i].log.warnings) err << "warning (run " << i << "): " << w << '\n';
      if (runs[i].report.failed) {
        ++failed;
        err << "run " << i << " failed: " << runs[i].report.failure << '\n';
      } else {
        ok_errors.push_back(runs[i].errors);
      }
    }
    {
      std::ofstream rep(fs::path(args.out_dir) / "report.json");
      rep << report_json(runs, args.variant) << '\n';
    }
    {
      std::ofstream env(fs::path(args.out_dir) / "envelope.csv");
      write_envelope_csv(env, error_envelope(ok_errors));
    }
    out << variant_name(args.variant) << ": " << runs.size() << " runs, " << failed << " failed; outputs in "
        << args.out_dir << '\n';
    return failed > 0 ? kExitNumericalError : kExitOk;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumericalError;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
}

int cli_eval(const std::string& truth_path, const std::string& estimate_path, std::ostream& out,
             std::ostream& err) {
  try {
    const ScenarioDataset data = load_dataset(truth_path);
    const std::vector<EstimateRecord> est = load_estimates(estimate_path);
    const RunReport r = make_report(compute_errors(data.truth, est), default_thresholds());
    out << report_to_json(r).dump(2) << '\n';
    return kExitOk;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
}

int cli_observability(const TiltSweep& sweep, const std::string& out_path, std::ostream& out,
                      std::ostream& err) {
  try {
    const std::string text = observability_json(tilt_sweep(sweep));
    if (out_path.empty()) {
      out << text << '\n';
    } else {
      std::ofstream f(out_path);
      if (!f) throw InputError("cannot write '" + out_path + "'");
      f << text << '\n';
    }
    return kExitOk;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
}

}  // namespace inekf_drs
