#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "inekf_drs/drs.hpp"
#include "inekf_drs/state.hpp"
#include "inekf_drs/streams.hpp"

namespace inekf_drs {

enum class RobotMotion { kStepping, kStanding };  // RM1, RM2

struct ScenarioConfig {
  std::string name = "custom";
  PitchProfile truth_profile = PitchProfile::Named("TM1");
  PitchProfile filter_profile = PitchProfile::Named("TM1");  // what the surface sensors report
  RobotMotion motion = RobotMotion::kStepping;
  double duration = 30.0;
  double imu_rate = 200.0;
  double meas_rate = 15.0;
  double step_period = 0.8;
  double stance_width = 0.2;
  double pivot_distance = 0.8;  // horizontal distance from the pivot to the stance feet
  double base_height = 0.9;
  double heading = 0.0;  // rad, base yaw about world z
  NoiseConfig noise = default_noise_config();
  bool zero_bias = false;
  std::uint64_t seed = 1;
};

/// Presets "A".."D": A = stepping + TM1, B = stepping + TM2, C = standing + TM1
/// after 10 s flat, D = stepping + TM1 with TM3 reported to the filter.
ScenarioConfig scenario_preset(const std::string& name);

/// key = value file. `case` selects a preset and must come first if present;
/// other keys: truth_profile, filter_profile (preset names or csv:PATH), motion
/// (RM1|RM2), duration, imu_rate, meas_rate, step_period, stance_width,
/// pivot_distance, base_height, heading_deg, seed, zero_bias, plus all noise keys.
ScenarioConfig parse_scenario_config(const std::string& text);
ScenarioConfig load_scenario_config(const std::string& path);

/// Body kinematics of the base at one instant.
struct BaseKinematics {
  GroupElement X;  // R, v, p and the tracked contact point
  Vec3 omega_body = Vec3::Zero();
  Vec3 acc_world = Vec3::Zero();  // d v / dt
};

/// Noise-free analytic ground truth of a scenario.
class Scenario {
 public:
  explicit Scenario(const ScenarioConfig& config);

  const ScenarioConfig& config() const { return config_; }

  /// Index of the stance phase at t; the tracked contact switches at switch_time(n).
  int phase_at(double t) const;
  double switch_time(int n) const;
  int switch_count() const;

  /// Tracked contact foot location in surface coordinates during phase n.
  Vec3 foothold(int phase) const;
  /// Base pose and derivatives, with the contact column filled for `phase`.
  BaseKinematics base_at(double t, int phase) const;
  BaseKinematics base_at(double t) const { return base_at(t, phase_at(t)); }

  /// Foot orientation in the world (flat on the surface).
  Mat3 foot_rotation_world(double t) const;

  /// Exact joint vector of the leg standing on `phase`'s foothold.
  JointVector leg_joints(double t, int phase) const;

  /// Contact velocity as seen through `profile`.
  Vec3 contact_velocity(double t, int phase, const PitchProfile& profile) const;

 private:
  ScenarioConfig config_;
  DrsGeometry geometry_;
  std::vector<double> switch_times_;
};

/// Deterministic function of the config (including its seed).
ScenarioDataset generate(const ScenarioConfig& config);

/// Synthesizes noise-free IMU readings from truth: omega = vee(R^T dR/dt),
/// a = R^T (dv/dt - g).
ImuSample imu_from_kinematics(const BaseKinematics& k, double t);

struct InitialError {
  Vec3 velocity = Vec3::Zero();     // m/s, each component uniform in [-1.5, 1.5]
  Vec3 orientation = Vec3::Zero();  // rad, exponential coordinates, uniform in [-1, 1]
};

InitialError initial_error_draw(std::uint64_t seed);

/// Filter initialization from the first truth sample: rotation exp(dphi) R,
/// velocity v + dv, exact position, contact from the first encoder reading.
FilterState initial_filter_state(const ScenarioDataset& data, const InitialError& error,
                                 const KinematicModel& model);

std::string motion_name(RobotMotion motion);

}  // namespace inekf_drs
