#include "inekf_drs/liegroup.hpp"

#include <algorithm>
#include <cmath>

namespace inekf_drs {

namespace {

// Above this angle the axis is recovered from the symmetric part of R, where
// the antisymmetric part (proportional to sin(angle)) carries no precision.
constexpr double kNearPiBand = 1e-4;

}  // namespace

Mat3 skew(const Vec3& v) {
  Mat3 m;
  m << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return m;
}

Vec3 vee_so3(const Mat3& m) { return Vec3(m(2, 1), m(0, 2), m(1, 0)); }

Mat3 so3_exp(const Vec3& phi) {
  const double theta2 = phi.squaredNorm();
  const double theta = std::sqrt(theta2);
  const Mat3 K = skew(phi);
  double a;
  double b;
  if (theta < kSmallAngle) {
    a = 1.0 - theta2 / 6.0;
    b = 0.5 - theta2 / 24.0;
  } else {
    a = std::sin(theta) / theta;
    b = (1.0 - std::cos(theta)) / theta2;
  }
  return Mat3::Identity() + a * K + b * K * K;
}

Vec3 so3_log(const Mat3& R) {
  const Vec3 axis_sin = 0.5 * vee_so3(R - R.transpose());  // sin(theta) * axis
  const double s = axis_sin.norm();
  const double c = std::clamp(0.5 * (R.trace() - 1.0), -1.0, 1.0);
  const double theta = std::atan2(s, c);

  if (theta < kSmallAngle) {
    return (1.0 + theta * theta / 6.0) * axis_sin;
  }
  if (M_PI - theta > kNearPiBand) {
    return (theta / s) * axis_sin;
  }

  // Near pi: axis * axis^T = (sym(R) - cos I) / (1 - cos).
  const Mat3 outer = (0.5 * (R + R.transpose()) - c * Mat3::Identity()) / (1.0 - c);
  Eigen::Index k = 0;
  outer.diagonal().maxCoeff(&k);
  Vec3 axis = outer.col(k) / std::sqrt(std::max(outer(k, k), 0.0));
  axis.normalize();
  if (s > 1e-12) {
    if (axis.dot(axis_sin) < 0.0) axis = -axis;
  } else {
    for (int i = 0; i < 3; ++i) {
      if (std::abs(axis[i]) > 1e-12) {
        if (axis[i] < 0.0) axis = -axis;
        break;
      }
    }
  }
  return theta * axis;
}

Mat3 so3_left_jacobian(const Vec3& phi) {
  const double theta2 = phi.squaredNorm();
  const double theta = std::sqrt(theta2);
  const Mat3 K = skew(phi);
  if (theta < kSmallAngle) {
    return Mat3::Identity() + 0.5 * K + K * K / 6.0;
  }
  return Mat3::Identity() + ((1.0 - std::cos(theta)) / theta2) * K +
         ((theta - std::sin(theta)) / (theta2 * theta)) * K * K;
}

Mat3 so3_left_jacobian_inverse(const Vec3& phi) {
  const double theta2 = phi.squaredNorm();
  const double theta = std::sqrt(theta2);
  const Mat3 K = skew(phi);
  if (theta < kSmallAngle) {
    return Mat3::Identity() - 0.5 * K + K * K / 12.0;
  }
  const double half = 0.5 * theta;
  const double coeff = 1.0 / theta2 - std::cos(half) / (2.0 * theta * std::sin(half));
  return Mat3::Identity() - 0.5 * K + coeff * K * K;
}

Mat3 orthonormalize(const Mat3& R) {
  Eigen::JacobiSVD<Mat3> svd(R, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 out = svd.matrixU() * svd.matrixV().transpose();
  if (out.determinant() < 0.0) {
    Mat3 U = svd.matrixU();
    U.col(2) = -U.col(2);
    out = U * svd.matrixV().transpose();
  }
  return out;
}

double orthonormality_error(const Mat3& R) {
  return (R * R.transpose() - Mat3::Identity()).norm();
}

GroupElement GroupElement::FromMatrix(const Mat6& m) {
  GroupElement X;
  X.R = m.topLeftCorner<3, 3>();
  X.v = m.block<3, 1>(0, 3);
  X.p = m.block<3, 1>(0, 4);
  X.pc = m.block<3, 1>(0, 5);
  return X;
}

Mat6 GroupElement::matrix() const {
  Mat6 m = Mat6::Identity();
  m.topLeftCorner<3, 3>() = R;
  m.block<3, 1>(0, 3) = v;
  m.block<3, 1>(0, 4) = p;
  m.block<3, 1>(0, 5) = pc;
  return m;
}

void GroupElement::renormalize() {
  if (orthonormality_error(R) > kOrthonormalityTolerance) R = orthonormalize(R);
}

Mat6 hat(const TangentVector& xi) {
  Mat6 m = Mat6::Zero();
  m.topLeftCorner<3, 3>() = skew(xi.segment<3>(0));
  m.block<3, 1>(0, 3) = xi.segment<3>(3);
  m.block<3, 1>(0, 4) = xi.segment<3>(6);
  m.block<3, 1>(0, 5) = xi.segment<3>(9);
  return m;
}

TangentVector vee(const Mat6& m) {
  TangentVector xi;
  xi << vee_so3(m.topLeftCorner<3, 3>()), m.block<3, 1>(0, 3), m.block<3, 1>(0, 4),
      m.block<3, 1>(0, 5);
  return xi;
}

GroupElement sek3_exp(const TangentVector& xi) {
  const Vec3 phi = xi.segment<3>(0);
  const Mat3 J = so3_left_jacobian(phi);
  GroupElement X;
  X.R = so3_exp(phi);
  X.v = J * xi.segment<3>(3);
  X.p = J * xi.segment<3>(6);
  X.pc = J * xi.segment<3>(9);
  return X;
}

TangentVector sek3_log(const GroupElement& X) {
  const Vec3 phi = so3_log(X.R);
  const Mat3 Jinv = so3_left_jacobian_inverse(phi);
  TangentVector xi;
  xi << phi, Jinv * X.v, Jinv * X.p, Jinv * X.pc;
  return xi;
}

GroupElement compose(const GroupElement& a, const GroupElement& b) {
  GroupElement out;
  out.R = a.R * b.R;
  out.v = a.R * b.v + a.v;
  out.p = a.R * b.p + a.p;
  out.pc = a.R * b.pc + a.pc;
  return out;
}

GroupElement inverse(const GroupElement& a) {
  GroupElement out;
  out.R = a.R.transpose();
  out.v = -out.R * a.v;
  out.p = -out.R * a.p;
  out.pc = -out.R * a.pc;
  return out;
}

Mat12 adjoint(const GroupElement& X) {
  Mat12 ad = Mat12::Zero();
  for (int i = 0; i < 4; ++i) ad.block<3, 3>(3 * i, 3 * i) = X.R;
  ad.block<3, 3>(3, 0) = skew(X.v) * X.R;
  ad.block<3, 3>(6, 0) = skew(X.p) * X.R;
  ad.block<3, 3>(9, 0) = skew(X.pc) * X.R;
  return ad;
}

}  // namespace inekf_drs
