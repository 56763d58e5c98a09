#include <gtest/gtest.h>

#include <Eigen/SVD>

#include "inekf_drs/filter.hpp"
#include "inekf_drs/observability.hpp"
#include "test_util.hpp"

namespace inekf_drs {
namespace {

constexpr double kDeg = M_PI / 180.0;

Mat3 pitched(double deg) { return testing::rodrigues(Vec3::UnitY(), deg * kDeg); }

// Built from scratch: constant bias-free error dynamics and a dense exponential.
Eigen::MatrixXd oracle_matrix(const Mat3& R_drs, double dt, int n_blocks, bool orientation, const Vec3& vc) {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(12, 12);
  A.block<3, 3>(3, 0) = skew(kGravity);
  A.block<3, 3>(6, 3) = Mat3::Identity();
  A.block<3, 3>(9, 0) = skew(vc);
  const Eigen::MatrixXd Phi = testing::dense_expm(A * dt);

  const int rows = orientation ? 6 : 3;
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(rows, 12);
  int r = 0;
  if (orientation) {
    H.block<3, 3>(0, 0) = skew(R_drs.col(2));
    r = 3;
  }
  H.block<3, 3>(r, 6) = -Mat3::Identity();
  H.block<3, 3>(r, 9) = Mat3::Identity();

  Eigen::MatrixXd O(rows * n_blocks, 12);
  Eigen::MatrixXd M = H;
  for (int i = 0; i < n_blocks; ++i) {
    O.middleRows(rows * i, rows) = M;
    M = M * Phi;
  }
  return O;
}

int oracle_rank(const Eigen::MatrixXd& M) {
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(M).singularValues();
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i) rank += sv[i] > 1e-8 * sv[0] ? 1 : 0;
  return rank;
}

TEST(Observability, MatrixMatchesOracle) {
  for (const double deg : {0.0, 3.0, 8.0}) {
    for (const bool orientation : {true, false}) {
      ObservabilityOptions opt;
      opt.include_orientation = orientation;
      opt.v_c = Vec3(0.1, 0.0, -0.3);
      const Eigen::MatrixXd O = observability_matrix(pitched(deg), 0.01, 5, opt);
      const Eigen::MatrixXd ref = oracle_matrix(pitched(deg), 0.01, 5, orientation, opt.v_c);
      ASSERT_EQ(O.rows(), ref.rows());
      EXPECT_LT((O - ref).cwiseAbs().maxCoeff(), 1e-12) << deg;
    }
  }
}

TEST(Observability, TransitionIsExponential) {
  const Mat12 A = error_jacobian_nobias(Vec3(0.2, 0.1, 0.0));
  EXPECT_LT((transition_matrix(A, 0.05) - testing::dense_expm(A * 0.05)).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Observability, RankFlatIsEight) {
  for (const double dt : {1e-3, 1e-2}) {
    const Eigen::MatrixXd O = observability_matrix(Mat3::Identity(), dt, 4);
    EXPECT_EQ(numerical_rank(O), 8) << dt;
    EXPECT_EQ(oracle_rank(oracle_matrix(Mat3::Identity(), dt, 4, true, Vec3::Zero())), 8) << dt;
  }
}

TEST(Observability, RankTiltedIsNine) {
  for (int deg = 1; deg <= 10; ++deg) {
    for (const double dt : {1e-3, 1e-2}) {
      EXPECT_EQ(numerical_rank(observability_matrix(pitched(deg), dt, 4)), 9) << deg;
      EXPECT_EQ(oracle_rank(oracle_matrix(pitched(deg), dt, 4, true, Vec3::Zero())), 9) << deg;
    }
  }
}

TEST(Observability, RankStableInBlockCount) {
  for (const double deg : {0.0, 8.0}) {
    const int expected = deg == 0.0 ? 8 : 9;
    int previous = 0;
    for (int n = 2; n <= 8; ++n) {
      const int rank = numerical_rank(observability_matrix(pitched(deg), 0.01, n));
      EXPECT_GE(rank, previous);
      if (n >= 3) EXPECT_EQ(rank, expected) << n;
      previous = rank;
    }
  }
}

// Analytic null directions: a common translation of p and p^c, and a rotation
// about gravity when the surface normal is vertical.
TEST(Observability, AnalyticNullSpace) {
  const Eigen::MatrixXd flat = observability_matrix(Mat3::Identity(), 0.01, 6);
  for (int i = 0; i < 3; ++i) {
    Vec12 e = Vec12::Zero();
    e[6 + i] = 1.0;
    e[9 + i] = 1.0;
    EXPECT_LT((flat * e).norm(), 1e-12);
  }
  Vec12 yaw = Vec12::Zero();
  yaw[2] = 1.0;
  EXPECT_LT((flat * yaw).norm(), 1e-12);
  const Eigen::MatrixXd tilted = observability_matrix(pitched(8.0), 0.01, 6);
  EXPECT_GT((tilted * yaw).norm(), 1e-3);
}

TEST(Observability, NullSpaceAvoidsVelocityAndTilt) {
  for (const double deg : {0.0, 5.0}) {
    const Eigen::MatrixXd O = observability_matrix(pitched(deg), 0.01, 6);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(O, Eigen::ComputeFullV);
    const int rank = numerical_rank(O);
    const Eigen::MatrixXd null = svd.matrixV().rightCols(12 - rank);
    EXPECT_LT(null.middleRows(3, 3).norm(), 1e-9) << deg;
    EXPECT_LT(null.topRows(2).norm(), 1e-9) << deg;
  }
}

TEST(Observability, ContactVelocityDoesNotChangeRank) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 50; ++i) {
    ObservabilityOptions opt;
    opt.v_c = testing::random_vec3(rng, 1.0);
    EXPECT_EQ(numerical_rank(observability_matrix(Mat3::Identity(), 0.01, 5, opt)), 8);
    EXPECT_EQ(numerical_rank(observability_matrix(pitched(6.0), 0.01, 5, opt)), 9);
  }
}

TEST(ObservabilityReport, Flags) {
  const ObservabilityReport flat = observability_report(Mat3::Identity(), 0.01, 4);
  EXPECT_EQ(flat.rank, 8);
  EXPECT_TRUE(flat.roll_pitch);
  EXPECT_FALSE(flat.yaw);
  EXPECT_TRUE(flat.velocity);
  EXPECT_FALSE(flat.position);
  EXPECT_FALSE(flat.contact_position);
  EXPECT_TRUE(flat.relative_position);
  EXPECT_NEAR(flat.tilt, 0.0, 1e-15);

  const ObservabilityReport tilted = observability_report(pitched(8.0), 0.01, 4);
  EXPECT_EQ(tilted.rank, 9);
  EXPECT_TRUE(tilted.yaw);
  EXPECT_FALSE(tilted.position);
  EXPECT_FALSE(tilted.contact_position);
  EXPECT_NEAR(tilted.tilt, 8.0 * kDeg, 1e-12);
}

TEST(ObservabilityReport, NoOrientationRowsLosesYaw) {
  ObservabilityOptions opt;
  opt.include_orientation = false;
  for (int deg = 0; deg <= 10; ++deg) {
    const ObservabilityReport r = observability_report(pitched(deg), 0.01, 4, opt);
    EXPECT_FALSE(r.yaw) << deg;
    EXPECT_FALSE(r.position);
    EXPECT_FALSE(r.contact_position);
  }
}

TEST(ObservabilityReport, RankLimits) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 20; ++i) {
    const ObservabilityReport r = observability_report(testing::random_rotation(rng), 0.01, 4);
    EXPECT_LE(r.rank, 12);
    EXPECT_EQ(r.yaw, r.rank == 9);
  }
}

TEST(TiltSweep, MonotoneRows) {
  TiltSweep sweep;
  const std::vector<ObservabilityReport> rows = tilt_sweep(sweep);
  ASSERT_EQ(rows.size(), 11u);
  EXPECT_EQ(rows.front().rank, 8);
  EXPECT_FALSE(rows.front().yaw);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].rank, 9);
    EXPECT_TRUE(rows[i].yaw);
    EXPECT_GE(rows[i].rank, rows[i - 1].rank);
  }
  EXPECT_NEAR(rows[8].tilt, 8.0 * kDeg, 1e-12);
}

TEST(NumericalRank, Basics) {
  EXPECT_EQ(numerical_rank(Eigen::MatrixXd::Zero(4, 4)), 0);
  EXPECT_EQ(numerical_rank(Eigen::MatrixXd::Identity(5, 5)), 5);
  Eigen::MatrixXd M = Eigen::MatrixXd::Identity(3, 3);
  M(2, 2) = 1e-10;
  EXPECT_EQ(numerical_rank(M), 2);
}

}  // namespace
}  // namespace inekf_drs
