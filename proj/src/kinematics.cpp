#include "inekf_drs/kinematics.hpp"

#include <string>

#include "inekf_drs/errors.hpp"

namespace inekf_drs {

namespace {

Mat3 rot_y(double a) {
  Mat3 R;
  const double c = std::cos(a);
  const double s = std::sin(a);
  R << c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c;
  return R;
}

Mat3 rot_z(double a) {
  Mat3 R;
  const double c = std::cos(a);
  const double s = std::sin(a);
  R << c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0;
  return R;
}

}  // namespace

void KinematicModel::check_size(const JointVector& q) const {
  if (q.size() != joint_count()) {
    throw InputError("joint vector has " + std::to_string(q.size()) + " entries, expected " +
                     std::to_string(joint_count()));
  }
}

Vec3 VirtualLeg::foot_position(const JointVector& q) const {
  check_size(q);
  return q.head<3>();
}

Mat3 VirtualLeg::foot_rotation(const JointVector& q) const {
  check_size(q);
  return so3_exp(q.tail<3>());
}

Jacobian3 VirtualLeg::position_jacobian(const JointVector& q) const {
  check_size(q);
  Jacobian3 J = Jacobian3::Zero(3, 6);
  J.leftCols<3>().setIdentity();
  return J;
}

Jacobian3 VirtualLeg::normal_jacobian(const JointVector& q) const {
  check_size(q);
  const Vec3 phi = q.tail<3>();
  // exp(phi + d) ~ exp(J_l(phi) d) exp(phi)
  Jacobian3 J = Jacobian3::Zero(3, 6);
  J.rightCols<3>() = -skew(so3_exp(phi).col(2)) * so3_left_jacobian(phi);
  return J;
}

JointVector VirtualLeg::inverse(const Vec3& position, const Mat3& rotation) {
  JointVector q(6);
  q << position, so3_log(rotation);
  return q;
}

SerialChain::SerialChain(const Vec3& link_lengths) : lengths_(link_lengths) {
  if (!lengths_.allFinite() || (lengths_.array() <= 0.0).any()) {
    throw InputError("serial chain link lengths must be positive");
  }
}

SerialChain::Frames SerialChain::frames(const JointVector& q) const {
  check_size(q);
  Frames f;
  const Mat3 R1 = rot_z(q[0]);
  const Mat3 R2 = R1 * rot_y(q[1]);
  const Mat3 R3 = R2 * rot_y(q[2]);
  f.axis[0] = Vec3::UnitZ();
  f.axis[1] = R1 * Vec3::UnitY();
  f.axis[2] = R2 * Vec3::UnitY();
  f.origin[0] = Vec3::Zero();
  f.origin[1] = R1 * Vec3(lengths_[0], 0.0, 0.0);
  f.origin[2] = f.origin[1] + R2 * Vec3(lengths_[1], 0.0, 0.0);
  f.end = f.origin[2] + R3 * Vec3(lengths_[2], 0.0, 0.0);
  f.R = R3;
  return f;
}

Vec3 SerialChain::foot_position(const JointVector& q) const { return frames(q).end; }

Mat3 SerialChain::foot_rotation(const JointVector& q) const { return frames(q).R; }

Jacobian3 SerialChain::position_jacobian(const JointVector& q) const {
  const Frames f = frames(q);
  Jacobian3 J(3, 3);
  for (int i = 0; i < 3; ++i) J.col(i) = f.axis[i].cross(f.end - f.origin[i]);
  return J;
}

Jacobian3 SerialChain::normal_jacobian(const JointVector& q) const {
  const Frames f = frames(q);
  const Vec3 n = f.R.col(2);
  Jacobian3 J(3, 3);
  for (int i = 0; i < 3; ++i) J.col(i) = f.axis[i].cross(n);
  return J;
}

Vec3 contact_jump(const KinematicModel& model, const JointVector& q_old, const JointVector& q_new) {
  return model.foot_position(q_new) - model.foot_position(q_old);
}

Jacobian3 contact_jump_jacobian(const KinematicModel& model, const JointVector& q_old,
                                const JointVector& q_new) {
  const int m = model.joint_count();
  Jacobian3 J(3, 2 * m);
  J.leftCols(m) = -model.position_jacobian(q_old);
  J.rightCols(m) = model.position_jacobian(q_new);
  return J;
}

}  // namespace inekf_drs
