#pragma once

#include <string>
#include <vector>

#include "inekf_drs/liegroup.hpp"

namespace inekf_drs {

/// Singular values below this fraction of the largest count as zero.
inline constexpr double kRankTolerance = 1e-8;

/// Bias-free error dynamics (12 x 12) at the given estimate and contact velocity.
Mat12 error_jacobian_nobias(const Vec3& v_c = Vec3::Zero());

/// exp(A dt).
Mat12 transition_matrix(const Mat12& A_nobias, double dt);

struct ObservabilityOptions {
  bool include_orientation = true;
  Vec3 v_c = Vec3::Zero();
};

/// Stacks [H; H Phi; H Phi^2; ...] with n_blocks powers, where H holds the
/// orientation rows (if enabled) followed by the position rows.
Eigen::MatrixXd observability_matrix(const Mat3& R_drs, double dt, int n_blocks,
                                     const ObservabilityOptions& options = {});

int numerical_rank(const Eigen::MatrixXd& M, double relative_tolerance = kRankTolerance);

struct ObservabilityReport {
  int rank = 0;
  bool roll_pitch = false;
  bool yaw = false;
  bool velocity = false;
  bool position = false;
  bool contact_position = false;
  bool relative_position = false;  // p^c - p
  double dt = 0.0;
  int n_blocks = 0;
  double tilt = 0.0;  // rad
};

/// A direction e is observable when it is orthogonal to the null space of the
/// observability matrix. Yaw is the component of the rotation error along gravity.
ObservabilityReport observability_report(const Mat3& R_drs, double dt, int n_blocks,
                                         const ObservabilityOptions& options = {});

struct TiltSweep {
  double start_deg = 0.0;
  double stop_deg = 10.0;
  double step_deg = 1.0;
  double dt = 0.01;
  int n_blocks = 4;
  bool include_orientation = true;
};

std::vector<ObservabilityReport> tilt_sweep(const TiltSweep& sweep);

}  // namespace inekf_drs
