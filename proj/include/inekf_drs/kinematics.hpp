#pragma once

#include <Eigen/Dense>

#include "inekf_drs/liegroup.hpp"

namespace inekf_drs {

using JointVector = Eigen::VectorXd;
using Jacobian3 = Eigen::Matrix<double, 3, Eigen::Dynamic>;

/// Base-to-foot forward kinematics of one leg.
class KinematicModel {
 public:
  virtual ~KinematicModel() = default;

  virtual int joint_count() const = 0;
  /// Foot position in the base frame, h_p(q).
  virtual Vec3 foot_position(const JointVector& q) const = 0;
  /// Foot orientation relative to the base, h_R(q).
  virtual Mat3 foot_rotation(const JointVector& q) const = 0;
  /// d h_p / dq, 3 x m.
  virtual Jacobian3 position_jacobian(const JointVector& q) const = 0;
  /// d (h_R(q) e3) / dq, 3 x m.
  virtual Jacobian3 normal_jacobian(const JointVector& q) const = 0;

  Vec3 foot_normal(const JointVector& q) const { return foot_rotation(q).col(2); }

 protected:
  void check_size(const JointVector& q) const;
};

/// Six joints holding the exponential coordinates of the base-to-foot transform:
/// q = (position, so3 log of rotation). Invertible by construction.
class VirtualLeg final : public KinematicModel {
 public:
  int joint_count() const override { return 6; }
  Vec3 foot_position(const JointVector& q) const override;
  Mat3 foot_rotation(const JointVector& q) const override;
  Jacobian3 position_jacobian(const JointVector& q) const override;
  Jacobian3 normal_jacobian(const JointVector& q) const override;

  static JointVector inverse(const Vec3& position, const Mat3& rotation);
};

/// Three revolute joints: yaw about z, then two pitch joints about y, with links
/// along the local x axis.
class SerialChain final : public KinematicModel {
 public:
  explicit SerialChain(const Vec3& link_lengths);

  int joint_count() const override { return 3; }
  Vec3 foot_position(const JointVector& q) const override;
  Mat3 foot_rotation(const JointVector& q) const override;
  Jacobian3 position_jacobian(const JointVector& q) const override;
  Jacobian3 normal_jacobian(const JointVector& q) const override;

  const Vec3& link_lengths() const { return lengths_; }

 private:
  struct Frames {
    Vec3 axis[3];
    Vec3 origin[3];
    Vec3 end;
    Mat3 R;
  };
  Frames frames(const JointVector& q) const;

  Vec3 lengths_;
};

/// Displacement from the previous support foot to the new one in the base frame:
/// h_c = h_p(q_new) - h_p(q_old).
Vec3 contact_jump(const KinematicModel& model, const JointVector& q_old, const JointVector& q_new);

/// Jacobian of contact_jump w.r.t. the stacked joints (q_old, q_new), 3 x 2m.
Jacobian3 contact_jump_jacobian(const KinematicModel& model, const JointVector& q_old,
                                const JointVector& q_new);

}  // namespace inekf_drs
