#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "inekf_drs/kinematics.hpp"
#include "inekf_drs/state.hpp"

namespace inekf_drs {

struct ImuSample {
  double t = 0.0;
  Vec3 omega = Vec3::Zero();  // rad/s, body frame
  Vec3 acc = Vec3::Zero();    // m/s^2, body frame specific force
};

/// Joint readings of the leg holding the tracked contact point.
struct EncoderSample {
  double t = 0.0;
  JointVector q;
};

/// Measured world-frame velocity of the tracked contact point.
struct ContactVelocitySample {
  double t = 0.0;
  Vec3 v = Vec3::Zero();
};

/// Reported surface orientation.
struct DrsOrientationSample {
  double t = 0.0;
  Mat3 R = Mat3::Identity();
};

/// Support switch: the tracked contact moves from the old foot to the new one.
/// Both joint vectors are read at the landing instant.
struct ContactSwitchEvent {
  double t = 0.0;
  JointVector q_old;
  JointVector q_new;
};

struct TruthSample {
  double t = 0.0;
  GroupElement X;
  BiasState theta;
};

struct DatasetHeader {
  std::string scenario = "custom";
  std::string truth_profile;
  std::string filter_profile;
  std::string motion;  // "RM1" stepping or "RM2" standing
  std::string kinematics = "virtual_leg";
  double duration = 0.0;
  double imu_rate = 200.0;
  double meas_rate = 15.0;
  double step_period = 0.8;
  double stance_width = 0.2;
  double pivot_distance = 0.8;
  std::uint64_t seed = 0;
  NoiseConfig noise;
};

struct ScenarioDataset {
  DatasetHeader header;
  std::vector<TruthSample> truth;
  std::vector<ImuSample> imu;
  std::vector<EncoderSample> encoder;
  std::vector<ContactVelocitySample> contact_velocity;  // sampled with the IMU
  std::vector<DrsOrientationSample> drs_orientation;    // sampled with the encoders
  std::vector<ContactSwitchEvent> contact_switch;
};

}  // namespace inekf_drs
