#include "inekf_drs/sim.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "inekf_drs/errors.hpp"
#include "inekf_drs/filter.hpp"

namespace inekf_drs {

namespace {

constexpr double kDeg = M_PI / 180.0;

struct Wave {
  double amp = 0.0;
  double freq = 0.0;  // rad/s
  double phase = 0.0;

  double x(double t) const { return amp * std::sin(freq * t + phase); }
  double dx(double t) const { return amp * freq * std::cos(freq * t + phase); }
  double ddx(double t) const { return -amp * freq * freq * std::sin(freq * t + phase); }
};

struct Sway {
  Wave x, y, z;
  Wave roll, pitch, yaw;
};

Sway sway_for(const ScenarioConfig& c) {
  Sway s;
  if (c.motion == RobotMotion::kStepping) {
    const double f1 = M_PI / c.step_period;  // one lateral cycle per two steps
    const double f2 = 2.0 * f1;
    s.x = {0.01, f1, 0.5};
    s.y = {0.04, f1, 0.0};
    s.z = {0.01, f2, 0.0};
    s.roll = {2.0 * kDeg, f1, 0.0};
    s.pitch = {1.0 * kDeg, f2, 0.3};
    s.yaw = {1.5 * kDeg, f1, 1.0};
  } else {
    s.x = {0.005, 1.3, 0.0};
    s.y = {0.005, 0.9, 1.0};
    s.z = {0.003, 1.7, 2.0};
    s.roll = {0.3 * kDeg, 1.1, 0.0};
    s.pitch = {0.3 * kDeg, 0.7, 0.5};
    s.yaw = {0.3 * kDeg, 0.5, 1.0};
  }
  return s;
}

Mat3 rot_x(double a) {
  Mat3 R;
  R << 1.0, 0.0, 0.0, 0.0, std::cos(a), -std::sin(a), 0.0, std::sin(a), std::cos(a);
  return R;
}

Mat3 rot_z(double a) {
  Mat3 R;
  R << std::cos(a), -std::sin(a), 0.0, std::sin(a), std::cos(a), 0.0, 0.0, 0.0, 1.0;
  return R;
}

// Independent generator per noise channel so that changing one SD does not
// reshuffle the others.
std::mt19937_64 channel_rng(std::uint64_t seed, std::uint32_t channel) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), channel};
  return std::mt19937_64(seq);
}

Vec3 gaussian3(std::mt19937_64& rng, double sd) {
  if (sd == 0.0) return Vec3::Zero();
  std::normal_distribution<double> n(0.0, sd);
  const double a = n(rng);
  const double b = n(rng);
  const double c = n(rng);
  return Vec3(a, b, c);
}

JointVector gaussian_joints(std::mt19937_64& rng, int m, double sd) {
  JointVector q = JointVector::Zero(m);
  if (sd == 0.0) return q;
  std::normal_distribution<double> n(0.0, sd);
  for (int i = 0; i < m; ++i) q[i] = n(rng);
  return q;
}

void validate(const ScenarioConfig& c) {
  auto positive = [](double x, const char* key) {
    if (!std::isfinite(x) || x <= 0.0) throw InputError(std::string("scenario: '") + key + "' must be positive");
  };
  positive(c.duration, "duration");
  positive(c.imu_rate, "imu_rate");
  positive(c.meas_rate, "meas_rate");
  positive(c.step_period, "step_period");
  positive(c.base_height, "base_height");
  if (c.meas_rate > c.imu_rate) throw InputError("scenario: 'meas_rate' exceeds 'imu_rate'");
  if (!std::isfinite(c.pivot_distance) || !std::isfinite(c.stance_width) || !std::isfinite(c.heading)) {
    throw InputError("scenario: geometry values must be finite");
  }
}

PitchProfile profile_from(const std::string& value) {
  if (value.rfind("csv:", 0) == 0) return PitchProfile::FromCsv(value.substr(4));
  return PitchProfile::Named(value);
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::string motion_name(RobotMotion motion) { return motion == RobotMotion::kStepping ? "RM1" : "RM2"; }

ScenarioConfig scenario_preset(const std::string& name) {
  ScenarioConfig c;
  c.name = name;
  if (name == "A") {
    c.truth_profile = c.filter_profile = PitchProfile::Named("TM1");
  } else if (name == "B") {
    c.truth_profile = c.filter_profile = PitchProfile::Named("TM2");
  } else if (name == "C") {
    c.motion = RobotMotion::kStanding;
    c.truth_profile = c.filter_profile = PitchProfile::Named("TM1-late");
  } else if (name == "D") {
    c.truth_profile = PitchProfile::Named("TM1");
    c.filter_profile = PitchProfile::Named("TM3");
  } else {
    throw InputError("scenario: unknown case '" + name + "' (expected A, B, C or D)");
  }
  return c;
}

ScenarioConfig parse_scenario_config(const std::string& text) {
  ScenarioConfig c = scenario_preset("A");
  c.name = "custom";
  std::ostringstream noise_lines;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool seen_other = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InputError("scenario: line " + std::to_string(line_no) + " is not key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    auto number = [&]() {
      try {
        std::size_t used = 0;
        const double x = std::stod(value, &used);
        if (used != value.size() || !std::isfinite(x)) throw std::invalid_argument(value);
        return x;
      } catch (const std::exception&) {
        throw InputError("scenario: key '" + key + "' has unparsable value '" + value + "'");
      }
    };
    if (key == "case") {
      if (seen_other) throw InputError("scenario: key 'case' must precede other keys");
      c = scenario_preset(value);
      continue;
    }
    seen_other = true;
    if (key.rfind("sd_", 0) == 0 || key == "noise_sample_rate_hz") {
      noise_lines << key << " = " << value << "\n";
    } else if (key == "name") {
      c.name = value;
    } else if (key == "truth_profile") {
      c.truth_profile = profile_from(value);
    } else if (key == "filter_profile") {
      c.filter_profile = profile_from(value);
    } else if (key == "profile") {
      c.truth_profile = c.filter_profile = profile_from(value);
    } else if (key == "motion") {
      if (value == "RM1" || value == "stepping") {
        c.motion = RobotMotion::kStepping;
      } else if (value == "RM2" || value == "standing") {
        c.motion = RobotMotion::kStanding;
      } else {
        throw InputError("scenario: key 'motion' must be RM1 or RM2");
      }
    } else if (key == "duration") {
      c.duration = number();
    } else if (key == "imu_rate") {
      c.imu_rate = number();
    } else if (key == "meas_rate") {
      c.meas_rate = number();
    } else if (key == "step_period") {
      c.step_period = number();
    } else if (key == "stance_width") {
      c.stance_width = number();
    } else if (key == "pivot_distance") {
      c.pivot_distance = number();
    } else if (key == "base_height") {
      c.base_height = number();
    } else if (key == "heading_deg") {
      c.heading = number() * kDeg;
    } else if (key == "seed") {
      try {
        std::size_t used = 0;
        c.seed = std::stoull(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
      } catch (const std::exception&) {
        throw InputError("scenario: key 'seed' has unparsable value '" + value + "'");
      }
    } else if (key == "zero_bias") {
      if (value != "true" && value != "false" && value != "1" && value != "0") {
        throw InputError("scenario: key 'zero_bias' must be true or false");
      }
      c.zero_bias = value == "true" || value == "1";
    } else {
      throw InputError("scenario: unknown key '" + key + "'");
    }
  }
  const std::string noise_text = noise_lines.str();
  if (!noise_text.empty()) c.noise = parse_noise_config(noise_text, c.noise);
  validate(c);
  return c;
}

ScenarioConfig load_scenario_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open scenario config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario_config(ss.str());
}

Scenario::Scenario(const ScenarioConfig& config) : config_(config) {
  validate(config_);
  if (config_.motion != RobotMotion::kStepping) return;
  // Landings sit halfway between IMU samples and away from measurement instants.
  const double half = 0.5 / config_.imu_rate;
  for (int n = 1;; ++n) {
    double t = n * config_.step_period + half;
    for (int tries = 0; tries < 8; ++tries) {
      const double m = std::round(t * config_.meas_rate) / config_.meas_rate;
      if (std::abs(t - m) >= 0.5 * half) break;
      t += 1.0 / config_.imu_rate;
    }
    if (t >= config_.duration) break;
    switch_times_.push_back(t);
  }
}

int Scenario::phase_at(double t) const {
  return static_cast<int>(std::upper_bound(switch_times_.begin(), switch_times_.end(), t) -
                          switch_times_.begin());
}

double Scenario::switch_time(int n) const { return switch_times_.at(static_cast<std::size_t>(n - 1)); }

int Scenario::switch_count() const { return static_cast<int>(switch_times_.size()); }

Vec3 Scenario::foothold(int phase) const {
  const double side = (phase % 2 == 0) ? 0.5 : -0.5;
  return Vec3(config_.pivot_distance, side * config_.stance_width, 0.0);
}

Mat3 Scenario::foot_rotation_world(double t) const {
  return pitch_rotation(config_.truth_profile.angle(t)) * rot_z(config_.heading);
}

BaseKinematics Scenario::base_at(double t, int phase) const {
  const Sway s = sway_for(config_);
  const PitchSample th = config_.truth_profile.sample(t);
  const Mat3 Rd = pitch_rotation(th.angle);
  const Vec3 w(0.0, th.rate, 0.0);
  const Vec3 wd(0.0, th.accel, 0.0);

  const Vec3 y(config_.pivot_distance + s.x.x(t), s.y.x(t), config_.base_height + s.z.x(t));
  const Vec3 yd(s.x.dx(t), s.y.dx(t), s.z.dx(t));
  const Vec3 ydd(s.x.ddx(t), s.y.ddx(t), s.z.ddx(t));
  const Vec3 Ry = Rd * y;
  const Vec3 Ryd = Rd * yd;

  BaseKinematics k;
  k.X.p = Ry;
  k.X.v = w.cross(Ry) + Ryd;
  k.acc_world = wd.cross(Ry) + w.cross(w.cross(Ry)) + 2.0 * w.cross(Ryd) + Rd * ydd;

  const double psi = config_.heading + s.yaw.x(t);
  const double alpha = s.roll.x(t);
  const double beta = s.pitch.x(t);
  const Mat3 Rx = rot_x(alpha);
  const Mat3 Ryb = pitch_rotation(beta);
  k.X.R = rot_z(psi) * Rx * Ryb;
  k.omega_body = (Rx * Ryb).transpose() * Vec3::UnitZ() * s.yaw.dx(t) +
                 Ryb.transpose() * Vec3::UnitX() * s.roll.dx(t) + Vec3::UnitY() * s.pitch.dx(t);

  k.X.pc = Rd * foothold(phase);
  return k;
}

JointVector Scenario::leg_joints(double t, int phase) const {
  const BaseKinematics k = base_at(t, phase);
  const Vec3 hp = k.X.R.transpose() * (k.X.pc - k.X.p);
  const Mat3 hR = k.X.R.transpose() * foot_rotation_world(t);
  return VirtualLeg::inverse(hp, hR);
}

Vec3 Scenario::contact_velocity(double t, int phase, const PitchProfile& profile) const {
  const DrsState drs = drs_pose_at(profile, t, geometry_);
  return inekf_drs::contact_point_velocity(drs, foothold(phase));
}

ImuSample imu_from_kinematics(const BaseKinematics& k, double t) {
  ImuSample s;
  s.t = t;
  s.omega = k.omega_body;
  s.acc = k.X.R.transpose() * (k.acc_world - kGravity);
  return s;
}

ScenarioDataset generate(const ScenarioConfig& config) {
  const Scenario scenario(config);
  const NoiseConfig& noise = config.noise;

  ScenarioDataset data;
  DatasetHeader& h = data.header;
  h.scenario = config.name;
  h.truth_profile = config.truth_profile.name();
  h.filter_profile = config.filter_profile.name();
  h.motion = motion_name(config.motion);
  h.duration = config.duration;
  h.imu_rate = config.imu_rate;
  h.meas_rate = config.meas_rate;
  h.step_period = config.step_period;
  h.stance_width = config.stance_width;
  h.pivot_distance = config.pivot_distance;
  h.seed = config.seed;
  h.noise = noise;

  auto bias_rng = channel_rng(config.seed, 1);
  auto gyro_rng = channel_rng(config.seed, 2);
  auto acc_rng = channel_rng(config.seed, 3);
  auto vc_rng = channel_rng(config.seed, 4);
  auto enc_rng = channel_rng(config.seed, 5);
  auto drs_rng = channel_rng(config.seed, 6);

  BiasState bias;
  if (!config.zero_bias) {
    bias.gyro = gaussian3(bias_rng, noise.gyro_bias);
    bias.accel = gaussian3(bias_rng, noise.accel_bias);
  }

  const double dt = 1.0 / config.imu_rate;
  const double sd_gyro = std::sqrt(noise.psd(noise.gyro) / dt);
  const double sd_acc = std::sqrt(noise.psd(noise.accel) / dt);
  const double sd_vc = std::sqrt(noise.psd(noise.contact_velocity) / dt);

  const auto n_imu = static_cast<long>(std::floor(config.duration * config.imu_rate + 1e-9));
  data.truth.reserve(n_imu + 1);
  data.imu.reserve(n_imu + 1);
  data.contact_velocity.reserve(n_imu + 1);
  for (long i = 0; i <= n_imu; ++i) {
    const double t = static_cast<double>(i) / config.imu_rate;
    const int phase = scenario.phase_at(t);
    const BaseKinematics k = scenario.base_at(t, phase);
    data.truth.push_back({t, k.X, bias});

    ImuSample imu = imu_from_kinematics(k, t);
    imu.omega += bias.gyro + gaussian3(gyro_rng, sd_gyro);
    imu.acc += bias.accel + gaussian3(acc_rng, sd_acc);
    data.imu.push_back(imu);

    const Vec3 vc = scenario.contact_velocity(t, phase, config.filter_profile) +
                    k.X.R * gaussian3(vc_rng, sd_vc);
    data.contact_velocity.push_back({t, vc});
  }

  const auto n_meas = static_cast<long>(std::floor(config.duration * config.meas_rate + 1e-9));
  for (long i = 0; i <= n_meas; ++i) {
    const double t = static_cast<double>(i) / config.meas_rate;
    const int phase = scenario.phase_at(t);
    JointVector q = scenario.leg_joints(t, phase) + gaussian_joints(enc_rng, 6, noise.encoder);
    data.encoder.push_back({t, q});
    const Mat3 Rd = pitch_rotation(config.filter_profile.angle(t));
    data.drs_orientation.push_back({t, corrupt_drs_orientation(Rd, gaussian3(drs_rng, noise.drs_orientation))});
  }

  for (int n = 1; n <= scenario.switch_count(); ++n) {
    const double t = scenario.switch_time(n);
    ContactSwitchEvent ev;
    ev.t = t;
    ev.q_old = scenario.leg_joints(t, n - 1) + gaussian_joints(enc_rng, 6, noise.encoder);
    ev.q_new = scenario.leg_joints(t, n) + gaussian_joints(enc_rng, 6, noise.encoder);
    data.contact_switch.push_back(ev);
  }
  return data;
}

InitialError initial_error_draw(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> vel(-1.5, 1.5);
  std::uniform_real_distribution<double> rot(-1.0, 1.0);
  InitialError e;
  for (int i = 0; i < 3; ++i) e.velocity[i] = vel(rng);
  for (int i = 0; i < 3; ++i) e.orientation[i] = rot(rng);
  return e;
}

FilterState initial_filter_state(const ScenarioDataset& data, const InitialError& error,
                                 const KinematicModel& model) {
  if (data.truth.empty() || data.encoder.empty()) {
    throw InputError("dataset needs truth and encoder samples to initialize the filter");
  }
  const TruthSample& truth = data.truth.front();
  FilterState s;
  s.t = truth.t;
  s.X.R = so3_exp(error.orientation) * truth.X.R;
  s.X.v = truth.X.v + error.velocity;
  s.X.p = truth.X.p;
  s.X.pc = s.X.p + s.X.R * model.foot_position(data.encoder.front().q);
  s.P = initial_covariance();
  return s;
}

}  // namespace inekf_drs
