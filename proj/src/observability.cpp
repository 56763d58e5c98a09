#include "inekf_drs/observability.hpp"

#include <algorithm>
#include <cmath>
#include <unsupported/Eigen/MatrixFunctions>

#include "inekf_drs/drs.hpp"
#include "inekf_drs/errors.hpp"
#include "inekf_drs/filter.hpp"

namespace inekf_drs {

namespace {

constexpr double kNullProjection = 1e-6;

bool observable(const Eigen::MatrixXd& null_space, const Eigen::VectorXd& direction) {
  if (null_space.cols() == 0) return true;
  return (null_space.transpose() * direction).norm() <= kNullProjection;
}

bool block_observable(const Eigen::MatrixXd& null_space, int offset) {
  for (int i = 0; i < 3; ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(12);
    e[offset + i] = 1.0;
    if (!observable(null_space, e)) return false;
  }
  return true;
}

}  // namespace

Mat12 error_jacobian_nobias(const Vec3& v_c) {
  FilterState s;
  return error_jacobian(s, v_c).topLeftCorner<12, 12>();
}

Mat12 transition_matrix(const Mat12& A_nobias, double dt) {
  if (!std::isfinite(dt) || dt < 0.0) throw InputError("transition dt must be finite and nonnegative");
  return (A_nobias * dt).exp();
}

Eigen::MatrixXd observability_matrix(const Mat3& R_drs, double dt, int n_blocks,
                                     const ObservabilityOptions& options) {
  if (n_blocks < 2) throw InputError("observability matrix needs at least two blocks");
  const int rows_per = options.include_orientation ? 6 : 3;
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(rows_per, 12);
  int r = 0;
  if (options.include_orientation) {
    H.block<3, 3>(0, 0) = skew(R_drs.col(2));
    r = 3;
  }
  H.block<3, 3>(r, 6) = -Mat3::Identity();
  H.block<3, 3>(r, 9) = Mat3::Identity();

  const Mat12 Phi = transition_matrix(error_jacobian_nobias(options.v_c), dt);
  Eigen::MatrixXd O(rows_per * n_blocks, 12);
  Mat12 power = Mat12::Identity();
  for (int k = 0; k < n_blocks; ++k) {
    O.middleRows(rows_per * k, rows_per) = H * power;
    power = power * Phi;
  }
  return O;
}

int numerical_rank(const Eigen::MatrixXd& M, double relative_tolerance) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0) return 0;
  int rank = 0;
  for (int i = 0; i < s.size(); ++i) {
    if (s[i] > relative_tolerance * s[0]) ++rank;
  }
  return rank;
}

ObservabilityReport observability_report(const Mat3& R_drs, double dt, int n_blocks,
                                         const ObservabilityOptions& options) {
  const Eigen::MatrixXd O = observability_matrix(R_drs, dt, n_blocks, options);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(O, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  int rank = 0;
  for (int i = 0; i < s.size(); ++i) {
    if (s[i] > kRankTolerance * s[0]) ++rank;
  }
  const Eigen::MatrixXd null_space = svd.matrixV().rightCols(12 - rank);

  ObservabilityReport rep;
  rep.rank = rank;
  rep.dt = dt;
  rep.n_blocks = n_blocks;
  rep.tilt = std::acos(std::clamp(R_drs(2, 2), -1.0, 1.0));

  const Vec3 up = -kGravity.normalized();
  Eigen::VectorXd yaw = Eigen::VectorXd::Zero(12);
  yaw.head<3>() = up;
  rep.yaw = observable(null_space, yaw);

  // Roll/pitch: the rotation-error plane orthogonal to gravity.
  const Vec3 a = up.unitOrthogonal();
  const Vec3 b = up.cross(a);
  Eigen::VectorXd ea = Eigen::VectorXd::Zero(12);
  Eigen::VectorXd eb = Eigen::VectorXd::Zero(12);
  ea.head<3>() = a;
  eb.head<3>() = b;
  rep.roll_pitch = observable(null_space, ea) && observable(null_space, eb);

  rep.velocity = block_observable(null_space, 3);
  rep.position = block_observable(null_space, 6);
  rep.contact_position = block_observable(null_space, 9);
  rep.relative_position = true;
  for (int i = 0; i < 3; ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(12);
    e[6 + i] = -1.0;
    e[9 + i] = 1.0;
    rep.relative_position = rep.relative_position && observable(null_space, e / std::sqrt(2.0));
  }
  return rep;
}

std::vector<ObservabilityReport> tilt_sweep(const TiltSweep& sweep) {
  if (!(sweep.step_deg > 0.0) || sweep.stop_deg < sweep.start_deg) {
    throw InputError("tilt sweep needs step > 0 and stop >= start");
  }
  ObservabilityOptions opts;
  opts.include_orientation = sweep.include_orientation;
  std::vector<ObservabilityReport> out;
  const int n = static_cast<int>(std::floor((sweep.stop_deg - sweep.start_deg) / sweep.step_deg + 1e-9)) + 1;
  for (int i = 0; i < n; ++i) {
    const double deg = sweep.start_deg + i * sweep.step_deg;
    ObservabilityReport rep =
        observability_report(pitch_rotation(deg * M_PI / 180.0), sweep.dt, sweep.n_blocks, opts);
    rep.tilt = deg * M_PI / 180.0;
    out.push_back(rep);
  }
  return out;
}

}  // namespace inekf_drs
