#include "inekf_drs/dataset_io.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "inekf_drs/errors.hpp"

namespace inekf_drs {

namespace {

using nlohmann::json;

constexpr double kRadToDeg = 180.0 / M_PI;

json vec(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Eigen::VectorXd read_vec(const json& j, const char* key, int line, Eigen::Index expected = -1) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    throw InputError("line " + std::to_string(line) + ": missing array field '" + key + "'");
  }
  const json& a = j.at(key);
  if (expected >= 0 && static_cast<Eigen::Index>(a.size()) != expected) {
    throw InputError("line " + std::to_string(line) + ": field '" + key + "' has wrong length");
  }
  Eigen::VectorXd v(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i].is_number()) throw InputError("line " + std::to_string(line) + ": non-numeric '" + key + "'");
    v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
  }
  return v;
}

Vec3 read_vec3(const json& j, const char* key, int line) { return read_vec(j, key, line, 3); }

Mat3 read_rotation(const json& j, int line) { return wxyz_to_rotation(read_vec(j, "q", line, 4)); }

double read_time(const json& j, int line) {
  if (!j.contains("t") || !j.at("t").is_number()) {
    throw InputError("line " + std::to_string(line) + ": missing numeric field 't'");
  }
  return j.at("t").get<double>();
}

json header_json(const DatasetHeader& h) {
  json j;
  j["type"] = "header";
  j["scenario"] = h.scenario;
  j["truth_profile"] = h.truth_profile;
  j["filter_profile"] = h.filter_profile;
  j["motion"] = h.motion;
  j["kinematics"] = h.kinematics;
  j["duration"] = h.duration;
  j["imu_rate"] = h.imu_rate;
  j["meas_rate"] = h.meas_rate;
  j["step_period"] = h.step_period;
  j["stance_width"] = h.stance_width;
  j["pivot_distance"] = h.pivot_distance;
  j["seed"] = h.seed;
  j["noise"] = {{"sd_gyro", h.noise.gyro},
                {"sd_accel", h.noise.accel},
                {"sd_bias_gyro", h.noise.gyro_bias},
                {"sd_bias_accel", h.noise.accel_bias},
                {"sd_contact_vel", h.noise.contact_velocity},
                {"sd_encoder_deg", h.noise.encoder * kRadToDeg},
                {"sd_drs_orient_deg", h.noise.drs_orientation * kRadToDeg},
                {"noise_sample_rate_hz", h.noise.sample_rate_hz}};
  return j;
}

DatasetHeader read_header(const json& j) {
  DatasetHeader h;
  h.scenario = j.value("scenario", h.scenario);
  h.truth_profile = j.value("truth_profile", h.truth_profile);
  h.filter_profile = j.value("filter_profile", h.filter_profile);
  h.motion = j.value("motion", h.motion);
  h.kinematics = j.value("kinematics", h.kinematics);
  h.duration = j.value("duration", h.duration);
  h.imu_rate = j.value("imu_rate", h.imu_rate);
  h.meas_rate = j.value("meas_rate", h.meas_rate);
  h.step_period = j.value("step_period", h.step_period);
  h.stance_width = j.value("stance_width", h.stance_width);
  h.pivot_distance = j.value("pivot_distance", h.pivot_distance);
  h.seed = j.value("seed", h.seed);
  if (j.contains("noise")) {
    const json& n = j.at("noise");
    h.noise.gyro = n.value("sd_gyro", h.noise.gyro);
    h.noise.accel = n.value("sd_accel", h.noise.accel);
    h.noise.gyro_bias = n.value("sd_bias_gyro", h.noise.gyro_bias);
    h.noise.accel_bias = n.value("sd_bias_accel", h.noise.accel_bias);
    h.noise.contact_velocity = n.value("sd_contact_vel", h.noise.contact_velocity);
    h.noise.encoder = n.value("sd_encoder_deg", h.noise.encoder * kRadToDeg) / kRadToDeg;
    h.noise.drs_orientation = n.value("sd_drs_orient_deg", h.noise.drs_orientation * kRadToDeg) / kRadToDeg;
    h.noise.sample_rate_hz = n.value("noise_sample_rate_hz", h.noise.sample_rate_hz);
  }
  return h;
}

}  // namespace

Eigen::Vector4d rotation_to_wxyz(const Mat3& R) {
  Eigen::Quaterniond q(R);
  q.normalize();
  if (q.w() < 0.0) q.coeffs() = -q.coeffs();
  return Eigen::Vector4d(q.w(), q.x(), q.y(), q.z());
}

Mat3 wxyz_to_rotation(const Eigen::Vector4d& v) {
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw InputError("invalid quaternion");
  const Eigen::Quaterniond q(v[0] / n, v[1] / n, v[2] / n, v[3] / n);
  return q.toRotationMatrix();
}

void write_dataset(std::ostream& out, const ScenarioDataset& d) {
  out << header_json(d.header).dump() << '\n';

  // (time, type rank, index) so that records interleave by time deterministically.
  struct Ref {
    double t;
    int kind;
    std::size_t i;
  };
  std::vector<Ref> refs;
  refs.reserve(d.truth.size() + d.imu.size() + d.encoder.size() + d.contact_velocity.size() +
               d.drs_orientation.size() + d.contact_switch.size());
  for (std::size_t i = 0; i < d.truth.size(); ++i) refs.push_back({d.truth[i].t, 0, i});
  for (std::size_t i = 0; i < d.imu.size(); ++i) refs.push_back({d.imu[i].t, 1, i});
  for (std::size_t i = 0; i < d.contact_velocity.size(); ++i) refs.push_back({d.contact_velocity[i].t, 2, i});
  for (std::size_t i = 0; i < d.encoder.size(); ++i) refs.push_back({d.encoder[i].t, 3, i});
  for (std::size_t i = 0; i < d.drs_orientation.size(); ++i) refs.push_back({d.drs_orientation[i].t, 4, i});
  for (std::size_t i = 0; i < d.contact_switch.size(); ++i) refs.push_back({d.contact_switch[i].t, 5, i});
  std::stable_sort(refs.begin(), refs.end(), [](const Ref& a, const Ref& b) {
    return a.t < b.t || (a.t == b.t && a.kind < b.kind);
  });

  for (const Ref& r : refs) {
    json j;
    switch (r.kind) {
      case 0: {
        const TruthSample& s = d.truth[r.i];
        j = {{"type", "truth"}, {"t", s.t}, {"q", vec(rotation_to_wxyz(s.X.R))}, {"v", vec(s.X.v)},
             {"p", vec(s.X.p)}, {"pc", vec(s.X.pc)}, {"b_omega", vec(s.theta.gyro)}, {"b_acc", vec(s.theta.accel)}};
        break;
      }
      case 1: {
        const ImuSample& s = d.imu[r.i];
        j = {{"type", "imu"}, {"t", s.t}, {"omega", vec(s.omega)}, {"acc", vec(s.acc)}};
        break;
      }
      case 2: {
        const ContactVelocitySample& s = d.contact_velocity[r.i];
        j = {{"type", "contact_vel"}, {"t", s.t}, {"v", vec(s.v)}};
        break;
      }
      case 3: {
        const EncoderSample& s = d.encoder[r.i];
        j = {{"type", "encoder"}, {"t", s.t}, {"joints", vec(s.q)}};
        break;
      }
      case 4: {
        const DrsOrientationSample& s = d.drs_orientation[r.i];
        j = {{"type", "drs_pose"}, {"t", s.t}, {"q", vec(rotation_to_wxyz(s.R))}};
        break;
      }
      default: {
        const ContactSwitchEvent& s = d.contact_switch[r.i];
        j = {{"type", "contact_switch"}, {"t", s.t}, {"joints_old", vec(s.q_old)}, {"joints_new", vec(s.q_new)}};
        break;
      }
    }
    out << j.dump() << '\n';
  }
}

void save_dataset(const std::string& path, const ScenarioDataset& data) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write dataset '" + path + "'");
  write_dataset(out, data);
  if (!out) throw InputError("failed writing dataset '" + path + "'");
}

ScenarioDataset read_dataset(std::istream& in) {
  ScenarioDataset d;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw InputError("line " + std::to_string(line_no) + ": invalid JSON (" + e.what() + ")");
    }
    if (!j.contains("type") || !j.at("type").is_string()) {
      throw InputError("line " + std::to_string(line_no) + ": missing 'type'");
    }
    const std::string type = j.at("type").get<std::string>();
    if (type == "header") {
      d.header = read_header(j);
      continue;
    }
    const double t = read_time(j, line_no);
    if (type == "truth") {
      TruthSample s;
      s.t = t;
      s.X.R = read_rotation(j, line_no);
      s.X.v = read_vec3(j, "v", line_no);
      s.X.p = read_vec3(j, "p", line_no);
      s.X.pc = read_vec3(j, "pc", line_no);
      s.theta.gyro = read_vec3(j, "b_omega", line_no);
      s.theta.accel = read_vec3(j, "b_acc", line_no);
      d.truth.push_back(s);
    } else if (type == "imu") {
      d.imu.push_back({t, read_vec3(j, "omega", line_no), read_vec3(j, "acc", line_no)});
    } else if (type == "contact_vel") {
      d.contact_velocity.push_back({t, read_vec3(j, "v", line_no)});
    } else if (type == "encoder") {
      d.encoder.push_back({t, read_vec(j, "joints", line_no)});
    } else if (type == "drs_pose") {
      d.drs_orientation.push_back({t, read_rotation(j, line_no)});
    } else if (type == "contact_switch") {
      d.contact_switch.push_back({t, read_vec(j, "joints_old", line_no), read_vec(j, "joints_new", line_no)});
    } else {
      throw InputError("line " + std::to_string(line_no) + ": unknown record type '" + type + "'");
    }
  }
  return d;
}

ScenarioDataset load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open dataset '" + path + "'");
  return read_dataset(in);
}

EstimateRecord to_record(const FilterState& s) {
  return {s.t, s.X, s.theta, s.P.diagonal()};
}

void write_estimates(std::ostream& out, const std::vector<FilterState>& states) {
  for (const FilterState& s : states) {
    const json j = {{"t", s.t},
                    {"q", vec(rotation_to_wxyz(s.X.R))},
                    {"v", vec(s.X.v)},
                    {"p", vec(s.X.p)},
                    {"pc", vec(s.X.pc)},
                    {"b_omega", vec(s.theta.gyro)},
                    {"b_acc", vec(s.theta.accel)},
                    {"P_diag", vec(s.P.diagonal())}};
    out << j.dump() << '\n';
  }
}

void save_estimates(const std::string& path, const std::vector<FilterState>& states) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write estimates '" + path + "'");
  write_estimates(out, states);
}

std::vector<EstimateRecord> read_estimates(std::istream& in) {
  std::vector<EstimateRecord> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw InputError("line " + std::to_string(line_no) + ": invalid JSON (" + e.what() + ")");
    }
    EstimateRecord r;
    r.t = read_time(j, line_no);
    r.X.R = read_rotation(j, line_no);
    r.X.v = read_vec3(j, "v", line_no);
    r.X.p = read_vec3(j, "p", line_no);
    r.X.pc = read_vec3(j, "pc", line_no);
    r.theta.gyro = read_vec3(j, "b_omega", line_no);
    r.theta.accel = read_vec3(j, "b_acc", line_no);
    if (j.contains("P_diag")) r.P_diag = read_vec(j, "P_diag", line_no, kStateDim);
    out.push_back(r);
  }
  return out;
}

std::vector<EstimateRecord> load_estimates(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open estimates '" + path + "'");
  return read_estimates(in);
}

}  // namespace inekf_drs
