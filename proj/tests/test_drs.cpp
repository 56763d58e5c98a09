#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>

#include "inekf_drs/drs.hpp"
#include "inekf_drs/errors.hpp"
#include "test_util.hpp"

namespace inekf_drs {
namespace {

constexpr double kDeg = M_PI / 180.0;

TEST(PitchProfile, Tm2AtZero) {
  const PitchSample s = PitchProfile::Named("TM2").sample(0.0);
  EXPECT_NEAR(s.angle, 0.0, 1e-15);
  EXPECT_NEAR(s.rate, 2.5 * kDeg * M_PI, 1e-15);
}

TEST(PitchProfile, Tm1Hold) {
  const PitchProfile tm1 = PitchProfile::Named("TM1");
  for (const double t : {0.0, 1.0, 2.79}) {
    const PitchSample s = tm1.sample(t);
    EXPECT_NEAR(s.angle, -8.0 * kDeg, 1e-15) << t;
    EXPECT_EQ(s.rate, 0.0) << t;
  }
}

TEST(PitchProfile, Tm1RampReachesOppositeHold) {
  const PitchProfile tm1 = PitchProfile::Named("TM1");
  EXPECT_NEAR(tm1.angle(2.8 + 0.6), 8.0 * kDeg, 1e-12);
  EXPECT_NEAR(tm1.angle(4.0), 8.0 * kDeg, 1e-12);
  // Peak rate covers the full swing in the nominal ramp time.
  EXPECT_NEAR(tm1.rate(2.8 + 0.3), 16.0 * kDeg / 0.5, 1e-12);
  // Mirrored half cycle.
  EXPECT_NEAR(tm1.angle(3.4 + 2.8 + 0.6), -8.0 * kDeg, 1e-12);
  EXPECT_NEAR(tm1.angle(6.8 + 1.0), -8.0 * kDeg, 1e-12);
}

TEST(PitchProfile, Tm3IsTm1PlusOffsetAndSine) {
  const PitchProfile tm1 = PitchProfile::Named("TM1");
  const PitchProfile tm3 = PitchProfile::Named("TM3");
  for (double t = 0.0; t < 10.0; t += 0.37) {
    EXPECT_NEAR(tm3.angle(t), tm1.angle(t) + 5.1 * kDeg + 1.7 * kDeg * std::sin(M_PI * t), 1e-12);
  }
}

TEST(PitchProfile, LateVariantStartsFlat) {
  const PitchProfile late = PitchProfile::Named("TM1-late");
  EXPECT_EQ(late.angle(5.0), 0.0);
  EXPECT_EQ(late.angle(9.99), 0.0);
  EXPECT_NEAR(late.angle(10.6), -8.0 * kDeg, 1e-12);
  EXPECT_NEAR(late.angle(12.0), -8.0 * kDeg, 1e-12);
}

TEST(PitchProfile, RateMatchesAngleDerivative) {
  for (const char* name : {"TM1", "TM2", "TM3", "TM1-late"}) {
    const PitchProfile p = PitchProfile::Named(name);
    for (double t = 0.01; t < 20.0; t += 0.0137) {
      const double h = 1e-6;
      const double fd = (p.angle(t + h) - p.angle(t - h)) / (2.0 * h);
      EXPECT_NEAR(p.rate(t), fd, 1e-5) << name << " t=" << t;
      const double fd2 = (p.rate(t + h) - p.rate(t - h)) / (2.0 * h);
      EXPECT_NEAR(p.sample(t).accel, fd2, 1e-3) << name << " t=" << t;
    }
  }
}

TEST(PitchProfile, ContinuousAndRateLimited) {
  for (const char* name : {"TM1", "TM2", "TM3"}) {
    const PitchProfile p = PitchProfile::Named(name);
    const double bound = p.max_rate();
    const double eps = 1e-4;
    for (double t = 0.0; t < 30.0; t += 1e-3) {
      EXPECT_LE(std::abs(p.angle(t + eps) - p.angle(t)), bound * eps + 1e-15) << name << " t=" << t;
      EXPECT_LE(std::abs(p.angle(t)), 20.0 * kDeg);
    }
  }
}

TEST(PitchProfile, TableInterpolation) {
  const PitchProfile p = PitchProfile::Table({{0.0, 0.0}, {1.0, 0.2}, {2.0, 0.0}});
  EXPECT_NEAR(p.angle(0.5), 0.1, 1e-15);
  EXPECT_NEAR(p.rate(0.5), 0.2, 1e-15);
  EXPECT_NEAR(p.rate(1.5), -0.2, 1e-15);
  EXPECT_EQ(p.angle(5.0), 0.0);
  EXPECT_THROW(PitchProfile::Table({{0.0, 0.0}, {0.0, 1.0}}), InputError);
  EXPECT_THROW(PitchProfile::Table({}), InputError);
}

TEST(PitchProfile, CsvInDegrees) {
  const std::string path = ::testing::TempDir() + "profile.csv";
  {
    std::ofstream out(path);
    out << "t,deg\n0,0\n1,10 # peak\n2,0\n";
  }
  const PitchProfile p = PitchProfile::FromCsv(path);
  EXPECT_NEAR(p.angle(1.0), 10.0 * kDeg, 1e-15);
  EXPECT_NEAR(p.rate(0.5), 10.0 * kDeg, 1e-15);
  std::remove(path.c_str());
  EXPECT_THROW(PitchProfile::FromCsv(path), InputError);
  EXPECT_THROW(PitchProfile::Named("TM9"), InputError);
}

TEST(DrsPose, ConstantProfileIsStatic) {
  const DrsState s = drs_pose_at(PitchProfile::Constant(0.1), 3.0, DrsGeometry{Vec3(0.5, 0.0, 0.0)});
  EXPECT_EQ(s.omega, Vec3::Zero());
  EXPECT_EQ(s.v, Vec3::Zero());
  EXPECT_LT((s.R - testing::rodrigues(Vec3::UnitY(), 0.1)).norm(), 1e-15);
}

TEST(DrsPose, RejectsNegativeTime) {
  EXPECT_THROW(drs_pose_at(PitchProfile::Named("TM1"), -1.0), InputError);
}

TEST(ContactPointVelocity, PureTranslation) {
  DrsState s;
  s.v = Vec3(0.1, -0.2, 0.3);
  EXPECT_EQ(contact_point_velocity(s, Vec3(1.0, 2.0, 3.0)), s.v);
}

TEST(ContactPointVelocity, PitchingAboutY) {
  DrsState s;
  s.omega = Vec3(0.0, 0.5, 0.0);
  const Vec3 v = contact_point_velocity(s, Vec3(0.8, 0.0, 0.0));
  EXPECT_LT((v - Vec3(0.0, 0.0, -0.4)).norm(), 1e-15);
}

TEST(ContactPointVelocity, MatchesFiniteDifference) {
  const DrsGeometry geometry{Vec3(0.1, 0.0, 0.05)};
  const Vec3 point(0.7, 0.1, 0.0);
  for (const char* name : {"TM1", "TM2", "TM3"}) {
    const PitchProfile p = PitchProfile::Named(name);
    for (double t = 0.001; t < 10.0; t += 0.0231) {
      const double h = 1e-4;
      const Vec3 fd = (drs_point_world(drs_pose_at(p, t + h, geometry), geometry, point) -
                       drs_point_world(drs_pose_at(p, t - h, geometry), geometry, point)) /
                      (2.0 * h);
      const Vec3 v = contact_point_velocity(drs_pose_at(p, t, geometry), point);
      EXPECT_LT((v - fd).norm(), 1e-4) << name << " t=" << t;
    }
  }
}

TEST(ContactPointVelocity, Tm1PeakSpeedNearReportedValue) {
  // The reported peak (0.41 m/s) and a full 16 deg swing in 0.5 s at 0.8 m are
  // not exactly compatible; the reconstruction lands about 10% above.
  const PitchProfile tm1 = PitchProfile::Named("TM1");
  double peak = 0.0;
  for (double t = 0.0; t < 7.0; t += 1e-3) {
    peak = std::max(peak, contact_point_velocity(drs_pose_at(tm1, t), Vec3(0.8, 0.1, 0.0)).norm());
  }
  EXPECT_GT(peak, 0.41);
  EXPECT_LT(peak, 0.41 * 1.15);
}

TEST(CorruptDrsOrientation, Properties) {
  std::mt19937_64 rng(1);
  const Mat3 R = testing::random_rotation(rng);
  EXPECT_EQ(corrupt_drs_orientation(R, Vec3::Zero()), R);
  const Vec3 w = testing::random_vec3(rng, 0.5);
  EXPECT_LT((so3_exp(-w) * corrupt_drs_orientation(R, w) - R).norm(), 1e-12);
  const Vec3 small = 1e-4 * Vec3(1.0, -2.0, 0.5);
  EXPECT_LT((so3_log(corrupt_drs_orientation(R, small) * R.transpose()) - small).norm(), 1e-8);
}

}  // namespace
}  // namespace inekf_drs
