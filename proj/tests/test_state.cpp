#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "inekf_drs/errors.hpp"
#include "inekf_drs/state.hpp"
#include "test_util.hpp"

namespace inekf_drs {
namespace {

constexpr double kDeg = M_PI / 180.0;

TEST(NoiseConfig, DefaultsMatchTable) {
  const NoiseConfig n = default_noise_config();
  EXPECT_EQ(n.accel, 0.4);
  EXPECT_EQ(n.gyro, 0.01);
  EXPECT_EQ(n.accel_bias, 0.001);
  EXPECT_EQ(n.gyro_bias, 0.0001);
  EXPECT_EQ(n.contact_velocity, 0.01);
  EXPECT_NEAR(n.encoder, 0.01745, 1e-5);
  EXPECT_NEAR(n.drs_orientation, 1.0 * kDeg, 1e-15);
}

TEST(NoiseConfig, DensityConversion) {
  NoiseConfig n;
  n.sample_rate_hz = 200.0;
  EXPECT_DOUBLE_EQ(n.psd(0.4), 0.16 / 200.0);
  n.sample_rate_hz = 0.0;
  EXPECT_DOUBLE_EQ(n.psd(0.4), 0.16);
}

TEST(NoiseConfig, ParseOverridesAndKeepsBase) {
  const NoiseConfig n = parse_noise_config("# comment\nsd_accel = 0.2\n\nsd_encoder_deg=2 # trailing\n");
  EXPECT_EQ(n.accel, 0.2);
  EXPECT_NEAR(n.encoder, 2.0 * kDeg, 1e-15);
  EXPECT_EQ(n.gyro, 0.01);

  NoiseConfig base = zero_noise_config();
  const NoiseConfig m = parse_noise_config("sd_gyro = 0.5", base);
  EXPECT_EQ(m.gyro, 0.5);
  EXPECT_EQ(m.accel, 0.0);
}

TEST(NoiseConfig, FormatRoundtrip) {
  NoiseConfig n;
  n.accel = 0.123;
  n.drs_orientation = 0.7 * kDeg;
  n.sample_rate_hz = 0.0;
  const NoiseConfig back = parse_noise_config(format_noise_config(n));
  EXPECT_DOUBLE_EQ(back.accel, n.accel);
  EXPECT_NEAR(back.drs_orientation, n.drs_orientation, 1e-16);
  EXPECT_EQ(back.sample_rate_hz, 0.0);
}

TEST(NoiseConfig, ErrorsNameTheKey) {
  try {
    parse_noise_config("sd_bogus = 1");
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("sd_bogus"), std::string::npos);
  }
  try {
    parse_noise_config("sd_accel = -1");
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("sd_accel"), std::string::npos);
  }
  EXPECT_THROW(parse_noise_config("sd_accel = abc"), InputError);
  EXPECT_THROW(parse_noise_config("sd_accel 1"), InputError);
  EXPECT_THROW(load_noise_config("/nonexistent/noise.cfg"), InputError);
}

TEST(InitialCovariance, IsIdentity) {
  const Mat18 P = initial_covariance();
  EXPECT_EQ(P, Mat18::Identity());
  EXPECT_EQ(P, P.transpose());
  EXPECT_GT(Eigen::SelfAdjointEigenSolver<Mat18>(P).eigenvalues().minCoeff(), 0.0);
}

TEST(RightInvariantError, ZeroForEqualStates) {
  std::mt19937_64 rng(1);
  const GroupElement X = testing::random_element(rng);
  EXPECT_LT(right_invariant_error(X, X).norm(), 1e-12);
}

TEST(RightInvariantError, RecoversLeftPerturbation) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 100; ++i) {
    const GroupElement X = testing::random_element(rng);
    const TangentVector xi = testing::random_tangent(rng, M_PI - 0.1, 1.0);
    EXPECT_LT((right_invariant_error(sek3_exp(xi) * X, X) - xi).norm(), 1e-9);
  }
}

TEST(RightInvariantError, InvariantUnderRightMultiplication) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 1000; ++i) {
    const GroupElement A = testing::random_element(rng);
    const TangentVector xi = testing::random_tangent(rng, 2.5, 1.0);
    const GroupElement B = sek3_exp(xi) * A;
    const GroupElement Z = testing::random_element(rng);
    EXPECT_LT((right_invariant_error(B * Z, A * Z) - right_invariant_error(B, A)).norm(), 1e-9);
  }
}

TEST(ErrorState, BiasErrorIsEstimateMinusTruth) {
  FilterState s;
  s.theta.gyro = Vec3(0.1, 0.2, 0.3);
  BiasState truth;
  truth.accel = Vec3(1.0, 0.0, 0.0);
  const ErrorState e = error_state(s, s.X, truth);
  EXPECT_EQ(e.zeta.head<3>(), Vec3(0.1, 0.2, 0.3));
  EXPECT_EQ(e.zeta.tail<3>(), Vec3(-1.0, 0.0, 0.0));
}

TEST(FilterState, SymmetrizeAndFinite) {
  FilterState s;
  s.P(0, 1) = 1.0;
  symmetrize(s.P);
  EXPECT_EQ(s.P(0, 1), 0.5);
  EXPECT_EQ(s.P(1, 0), 0.5);
  EXPECT_TRUE(is_finite(s));
  s.X.v.x() = std::nan("");
  EXPECT_FALSE(is_finite(s));
}

}  // namespace
}  // namespace inekf_drs
