#pragma once

#include <Eigen/Dense>

namespace inekf_drs {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Vec12 = Eigen::Matrix<double, 12, 1>;
using Mat12 = Eigen::Matrix<double, 12, 12>;

/// Tangent vector of SE_3(3), ordered (rotation, velocity, position, contact position).
using TangentVector = Vec12;

inline constexpr double kSmallAngle = 1e-6;
inline constexpr double kOrthonormalityTolerance = 1e-8;

Mat3 skew(const Vec3& v);
Vec3 vee_so3(const Mat3& m);

Mat3 so3_exp(const Vec3& phi);

/// Principal logarithm; the returned angle is in [0, pi]. At exactly pi the axis
/// sign is chosen so that its first nonzero component is positive.
Vec3 so3_log(const Mat3& R);

Mat3 so3_left_jacobian(const Vec3& phi);
Mat3 so3_left_jacobian_inverse(const Vec3& phi);

/// Nearest rotation in the Frobenius sense (polar factor).
Mat3 orthonormalize(const Mat3& R);
double orthonormality_error(const Mat3& R);

/// Element of SE_3(3):
///
///   [ R  | v  p  pc ]
///   [ 0  |    I3    ]
struct GroupElement {
  Mat3 R = Mat3::Identity();
  Vec3 v = Vec3::Zero();
  Vec3 p = Vec3::Zero();
  Vec3 pc = Vec3::Zero();

  static GroupElement Identity() { return {}; }
  static GroupElement FromMatrix(const Mat6& m);
  Mat6 matrix() const;

  /// Re-orthonormalizes R when it has drifted past kOrthonormalityTolerance.
  void renormalize();
};

Mat6 hat(const TangentVector& xi);
TangentVector vee(const Mat6& m);

GroupElement sek3_exp(const TangentVector& xi);
TangentVector sek3_log(const GroupElement& X);

GroupElement compose(const GroupElement& a, const GroupElement& b);
GroupElement inverse(const GroupElement& a);
inline GroupElement operator*(const GroupElement& a, const GroupElement& b) { return compose(a, b); }

Mat12 adjoint(const GroupElement& X);

}  // namespace inekf_drs
