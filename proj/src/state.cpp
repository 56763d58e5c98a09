#include "inekf_drs/state.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "inekf_drs/errors.hpp"

namespace inekf_drs {

namespace {

constexpr double kDegToRad = M_PI / 180.0;

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_nonnegative(const std::string& key, const std::string& value) {
  double out = 0.0;
  const char* begin = value.data();
  const char* end = begin + value.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc() || ptr != end || !std::isfinite(out)) {
    throw InputError("noise config: key '" + key + "' has unparsable value '" + value + "'");
  }
  if (out < 0.0) throw InputError("noise config: key '" + key + "' must be nonnegative");
  return out;
}

}  // namespace

NoiseConfig default_noise_config() { return NoiseConfig{}; }

NoiseConfig zero_noise_config() {
  NoiseConfig n;
  n.gyro = n.accel = n.gyro_bias = n.accel_bias = n.contact_velocity = 0.0;
  n.encoder = n.drs_orientation = 0.0;
  return n;
}

NoiseConfig parse_noise_config(const std::string& text, const NoiseConfig& base) {
  NoiseConfig noise = base;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InputError("noise config: line " + std::to_string(line_no) + " is not key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const double x = parse_nonnegative(key, value);
    if (key == "sd_gyro") {
      noise.gyro = x;
    } else if (key == "sd_accel") {
      noise.accel = x;
    } else if (key == "sd_bias_gyro") {
      noise.gyro_bias = x;
    } else if (key == "sd_bias_accel") {
      noise.accel_bias = x;
    } else if (key == "sd_contact_vel") {
      noise.contact_velocity = x;
    } else if (key == "sd_encoder_deg") {
      noise.encoder = x * kDegToRad;
    } else if (key == "sd_drs_orient_deg") {
      noise.drs_orientation = x * kDegToRad;
    } else if (key == "noise_sample_rate_hz") {
      noise.sample_rate_hz = x;
    } else {
      throw InputError("noise config: unknown key '" + key + "'");
    }
  }
  return noise;
}

NoiseConfig load_noise_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open noise config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_noise_config(ss.str());
}

std::string format_noise_config(const NoiseConfig& noise) {
  std::ostringstream out;
  out.precision(17);
  out << "sd_gyro = " << noise.gyro << "\n"
      << "sd_accel = " << noise.accel << "\n"
      << "sd_bias_gyro = " << noise.gyro_bias << "\n"
      << "sd_bias_accel = " << noise.accel_bias << "\n"
      << "sd_contact_vel = " << noise.contact_velocity << "\n"
      << "sd_encoder_deg = " << noise.encoder / kDegToRad << "\n"
      << "sd_drs_orient_deg = " << noise.drs_orientation / kDegToRad << "\n"
      << "noise_sample_rate_hz = " << noise.sample_rate_hz << "\n";
  return out.str();
}

Mat18 initial_covariance() { return Mat18::Identity(); }

TangentVector right_invariant_error(const GroupElement& X_est, const GroupElement& X_true) {
  return sek3_log(compose(X_est, inverse(X_true)));
}

ErrorState error_state(const FilterState& estimate, const GroupElement& X_true,
                       const BiasState& theta_true) {
  ErrorState e;
  e.xi = right_invariant_error(estimate.X, X_true);
  e.zeta = estimate.theta.stacked() - theta_true.stacked();
  return e;
}

void symmetrize(Mat18& P) { P = 0.5 * (P + P.transpose()).eval(); }

bool is_finite(const FilterState& s) {
  return s.X.R.allFinite() && s.X.v.allFinite() && s.X.p.allFinite() && s.X.pc.allFinite() &&
         s.theta.gyro.allFinite() && s.theta.accel.allFinite() && s.P.allFinite() &&
         std::isfinite(s.t);
}

}  // namespace inekf_drs
