#include <gtest/gtest.h>

#include <memory>

#include "inekf_drs/errors.hpp"
#include "inekf_drs/kinematics.hpp"
#include "test_util.hpp"

namespace inekf_drs {
namespace {

Jacobian3 numeric_jacobian(const std::function<Vec3(const JointVector&)>& f, const JointVector& q,
                           double h = 1e-6) {
  Jacobian3 J(3, q.size());
  for (int i = 0; i < q.size(); ++i) {
    JointVector qp = q;
    JointVector qm = q;
    qp[i] += h;
    qm[i] -= h;
    J.col(i) = (f(qp) - f(qm)) / (2.0 * h);
  }
  return J;
}

std::vector<std::unique_ptr<KinematicModel>> models() {
  std::vector<std::unique_ptr<KinematicModel>> out;
  out.push_back(std::make_unique<VirtualLeg>());
  out.push_back(std::make_unique<SerialChain>(Vec3(0.1, 0.45, 0.5)));
  return out;
}

TEST(VirtualLeg, ZeroJoints) {
  VirtualLeg leg;
  const JointVector q = JointVector::Zero(6);
  EXPECT_EQ(leg.foot_position(q), Vec3::Zero());
  EXPECT_EQ(leg.foot_rotation(q), Mat3::Identity());
}

TEST(VirtualLeg, PositionIsFirstThreeJoints) {
  VirtualLeg leg;
  JointVector q(6);
  q << 0.1, 0.2, -0.8, 0.0, 0.0, 0.0;
  EXPECT_EQ(leg.foot_position(q), Vec3(0.1, 0.2, -0.8));
  EXPECT_EQ(leg.foot_rotation(q), Mat3::Identity());
  Jacobian3 expected = Jacobian3::Zero(3, 6);
  expected.leftCols<3>() = Mat3::Identity();
  EXPECT_EQ(leg.position_jacobian(q), expected);
}

TEST(VirtualLeg, InverseRoundtrip) {
  std::mt19937_64 rng(1);
  VirtualLeg leg;
  for (int i = 0; i < 100; ++i) {
    const Vec3 p = testing::random_vec3(rng, 1.0);
    const Mat3 R = testing::random_rotation(rng);
    const JointVector q = VirtualLeg::inverse(p, R);
    EXPECT_LT((leg.foot_position(q) - p).norm(), 1e-12);
    EXPECT_LT((leg.foot_rotation(q) - R).norm(), 1e-9);
  }
}

TEST(VirtualLeg, RejectsWrongSize) {
  VirtualLeg leg;
  EXPECT_THROW(leg.foot_position(JointVector::Zero(3)), InputError);
}

TEST(SerialChain, StraightChainLength) {
  SerialChain chain(Vec3(1.0, 1.0, 1.0));
  const Vec3 foot = chain.foot_position(JointVector::Zero(3));
  EXPECT_NEAR(foot.norm(), 3.0, 1e-12);
  EXPECT_LT((foot - Vec3(3.0, 0.0, 0.0)).norm(), 1e-12);
}

TEST(SerialChain, RotationIsProductOfJointRotations) {
  SerialChain chain(Vec3(0.2, 0.3, 0.4));
  JointVector q(3);
  q << 0.3, -0.4, 0.7;
  const Mat3 expected = testing::rodrigues(Vec3::UnitZ(), q[0]) * testing::rodrigues(Vec3::UnitY(), q[1]) *
                        testing::rodrigues(Vec3::UnitY(), q[2]);
  EXPECT_LT((chain.foot_rotation(q) - expected).norm(), 1e-12);
}

TEST(KinematicModel, JacobiansMatchFiniteDifferences) {
  std::mt19937_64 rng(2);
  for (const auto& model : models()) {
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const JointVector q = testing::random_vector(rng, model->joint_count(), 1.2);
      const auto hp = [&](const JointVector& x) { return model->foot_position(x); };
      const auto hn = [&](const JointVector& x) { return model->foot_normal(x); };
      worst = std::max(worst, (model->position_jacobian(q) - numeric_jacobian(hp, q)).cwiseAbs().maxCoeff());
      worst = std::max(worst, (model->normal_jacobian(q) - numeric_jacobian(hn, q)).cwiseAbs().maxCoeff());

      const JointVector q2 = testing::random_vector(rng, model->joint_count(), 1.2);
      JointVector stacked(2 * model->joint_count());
      stacked << q, q2;
      const int m = model->joint_count();
      const auto hc = [&](const JointVector& x) { return contact_jump(*model, x.head(m), x.tail(m)); };
      worst = std::max(worst,
                       (contact_jump_jacobian(*model, q, q2) - numeric_jacobian(hc, stacked)).cwiseAbs().maxCoeff());
    }
    EXPECT_LE(worst, 1e-6);
  }
}

TEST(KinematicModel, RotationIsValid) {
  std::mt19937_64 rng(3);
  for (const auto& model : models()) {
    for (int i = 0; i < 100; ++i) {
      const Mat3 R = model->foot_rotation(testing::random_vector(rng, model->joint_count(), 3.0));
      EXPECT_LT(orthonormality_error(R), 1e-12);
      EXPECT_NEAR(R.determinant(), 1.0, 1e-12);
    }
  }
}

TEST(ContactJump, IdenticalLegsGiveZero) {
  VirtualLeg leg;
  JointVector q(6);
  q << 0.1, 0.2, -0.8, 0.1, 0.0, 0.2;
  EXPECT_EQ(contact_jump(leg, q, q), Vec3::Zero());
}

TEST(ContactJump, VirtualLegSubtraction) {
  VirtualLeg leg;
  JointVector q_old = JointVector::Zero(6);
  JointVector q_new = JointVector::Zero(6);
  q_old.head<3>() = Vec3(0.0, -0.1, -0.8);
  q_new.head<3>() = Vec3(0.3, 0.1, -0.8);
  EXPECT_LT((contact_jump(leg, q_old, q_new) - Vec3(0.3, 0.2, 0.0)).norm(), 1e-15);
}

}  // namespace
}  // namespace inekf_drs
