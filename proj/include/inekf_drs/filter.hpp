#pragma once

#include <optional>
#include <string>
#include <vector>

#include "inekf_drs/kinematics.hpp"
#include "inekf_drs/state.hpp"
#include "inekf_drs/streams.hpp"

namespace inekf_drs {

inline const Vec3 kGravity(0.0, 0.0, -9.81);

/// Inputs over one propagation interval of length dt. When the *_end fields are
/// set the inputs are interpolated linearly across the interval; otherwise they
/// are held constant.
struct ProcessInput {
  ImuSample imu;
  Vec3 v_c_tilde = Vec3::Zero();
  double dt = 0.0;
  std::optional<ImuSample> imu_end;
  std::optional<Vec3> v_c_tilde_end;
};

struct ProcessDerivative {
  Mat3 R_dot = Mat3::Zero();
  Vec3 v_dot = Vec3::Zero();
  Vec3 p_dot = Vec3::Zero();
  Vec3 pc_dot = Vec3::Zero();
};

/// Deterministic process at (X, theta) for constant inputs. Biases are constant.
ProcessDerivative process_derivative(const GroupElement& X, const BiasState& theta,
                                     const Vec3& omega_tilde, const Vec3& a_tilde, const Vec3& v_c_tilde);
ProcessDerivative process_derivative(const FilterState& state, const ProcessInput& input);

/// Same vector field in 6x6 matrix form (the tangent vector at X).
Mat6 process_vector_field(const GroupElement& X, const Vec3& omega, const Vec3& acc, const Vec3& v_c);

/// Linearized right-invariant error dynamics, 18 x 18.
Mat18 error_jacobian(const FilterState& state, const Vec3& v_c_tilde);

/// Diagonal spectral densities of (w_omega, w_a, 0, w_c, w_bomega, w_ba).
Vec18 process_noise_density(const NoiseConfig& noise);

/// exp(A dt) for the error Jacobian. A is nilpotent (A^4 = 0), so the series is exact.
Mat18 error_transition(const Mat18& A, double dt);

/// One step: RK4 for the state; P <- Phi P Phi^T + Qbar dt with Phi = exp(A dt),
/// A and Qbar taken at the start of the step.
FilterState propagate(const FilterState& state, const ProcessInput& input, const NoiseConfig& noise);

enum class ObservationKind { kOrientation, kPosition };

/// Right-invariant observation Y = X^{-1} d + noise with 3 effective rows.
struct Observation {
  ObservationKind kind = ObservationKind::kPosition;
  Vec6 Y = Vec6::Zero();
  Vec6 d = Vec6::Zero();
  Eigen::Matrix<double, 3, kStateDim> H = Eigen::Matrix<double, 3, kStateDim>::Zero();
  Mat3 N = Mat3::Zero();

  /// Top three rows of (X Y - d).
  Vec3 innovation(const GroupElement& X) const;
};

/// Foot normal aligned with the surface normal. N combines the surface
/// orientation noise and the encoder noise rotated by the current estimate.
Observation orientation_observation(const FilterState& state, const JointVector& q_tilde,
                                   const Mat3& R_drs_tilde, const KinematicModel& model,
                                   const NoiseConfig& noise);

/// Leg odometry: base-to-foot position.
Observation position_observation(const FilterState& state, const JointVector& q_tilde,
                                 const KinematicModel& model, const NoiseConfig& noise);

enum class UpdateStatus { kApplied, kSkippedIllConditioned };

struct UpdateResult {
  FilterState state;
  UpdateStatus status = UpdateStatus::kApplied;
  double condition = 1.0;
};

inline constexpr double kMaxInnovationCondition = 1e12;

/// Joint update with all observations stacked. Orientation observations
/// contribute only the two rows orthogonal to the surface normal.
UpdateResult update(const FilterState& state, const std::vector<Observation>& observations);

/// Landing jump: the tracked contact moves to the new foot.
FilterState jump_propagate(const FilterState& state, const JointVector& q_old, const JointVector& q_new,
                           const KinematicModel& model, const NoiseConfig& noise);

enum class FilterVariant { kDrs, kSrs };

const char* variant_name(FilterVariant variant);
FilterVariant parse_variant(const std::string& name);

struct RunLog {
  std::vector<FilterState> estimates;  // after each measurement update
  int updates_applied = 0;
  int updates_skipped = 0;
  int jumps = 0;
  std::vector<std::string> warnings;
};

/// Runs the filter over a dataset from `initial`. The SRS variant ignores the
/// contact-velocity stream and the surface-orientation observation.
RunLog run_variant(const FilterState& initial, const ScenarioDataset& data, FilterVariant variant,
                   const NoiseConfig& noise, const KinematicModel& model);

}  // namespace inekf_drs
