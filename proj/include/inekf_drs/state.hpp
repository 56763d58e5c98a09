#pragma once

#include <string>

#include "inekf_drs/liegroup.hpp"

namespace inekf_drs {

inline constexpr int kStateDim = 18;
inline constexpr int kGroupDim = 12;

using Vec18 = Eigen::Matrix<double, kStateDim, 1>;
using Mat18 = Eigen::Matrix<double, kStateDim, kStateDim>;

/// Offsets of each 3-block inside the 18-dim error state / covariance.
namespace block {
inline constexpr int kRot = 0;
inline constexpr int kVel = 3;
inline constexpr int kPos = 6;
inline constexpr int kContact = 9;
inline constexpr int kGyroBias = 12;
inline constexpr int kAccelBias = 15;
}  // namespace block

struct BiasState {
  Vec3 gyro = Vec3::Zero();   // rad/s
  Vec3 accel = Vec3::Zero();  // m/s^2

  Vec6 stacked() const {
    Vec6 out;
    out << gyro, accel;
    return out;
  }
};

struct FilterState {
  GroupElement X;
  BiasState theta;
  Mat18 P = Mat18::Identity();
  double t = 0.0;
};

struct ErrorState {
  TangentVector xi = TangentVector::Zero();
  Vec6 zeta = Vec6::Zero();
};

/// Noise standard deviations.
///
/// The white-noise channels (gyro, accel, both bias walks, contact velocity) are
/// converted to continuous-time spectral densities by psd(). When
/// `sample_rate_hz` is positive the SDs are read as per-sample values at that
/// rate (psd = sd^2 / rate); when it is zero they are already densities
/// (psd = sd^2). Encoder and surface-orientation SDs are always per sample.
struct NoiseConfig {
  double gyro = 0.01;               // rad/s
  double accel = 0.4;               // m/s^2
  double gyro_bias = 1e-4;          // rad/s^2
  double accel_bias = 1e-3;         // m/s^3
  double contact_velocity = 0.01;   // m/s
  double encoder = 0.0174532925199432957;          // rad (1 deg)
  double drs_orientation = 0.0174532925199432957;  // rad (1 deg)
  double sample_rate_hz = 200.0;

  double psd(double sd) const { return sample_rate_hz > 0.0 ? sd * sd / sample_rate_hz : sd * sd; }
};

NoiseConfig default_noise_config();
NoiseConfig zero_noise_config();

/// Parses `key = value` lines. Recognized keys: sd_gyro, sd_accel, sd_bias_gyro,
/// sd_bias_accel, sd_contact_vel, sd_encoder_deg, sd_drs_orient_deg and
/// noise_sample_rate_hz. Unset keys keep their values from `base`. Throws
/// InputError naming the offending key on unknown keys, unparsable or negative values.
NoiseConfig parse_noise_config(const std::string& text, const NoiseConfig& base = NoiseConfig{});
NoiseConfig load_noise_config(const std::string& path);
std::string format_noise_config(const NoiseConfig& noise);

Mat18 initial_covariance();

TangentVector right_invariant_error(const GroupElement& X_est, const GroupElement& X_true);
ErrorState error_state(const FilterState& estimate, const GroupElement& X_true, const BiasState& theta_true);

void symmetrize(Mat18& P);
bool is_finite(const FilterState& state);

}  // namespace inekf_drs
