#pragma once

#include <string>
#include <vector>

#include "inekf_drs/liegroup.hpp"

namespace inekf_drs {

struct DrsState {
  Mat3 R = Mat3::Identity();
  Vec3 v = Vec3::Zero();      // velocity of the surface-frame origin, world frame
  Vec3 omega = Vec3::Zero();  // world frame
  double t = 0.0;
};

/// Pitch angle, rate and acceleration of the surface at one instant (rad, rad/s, rad/s^2).
struct PitchSample {
  double angle = 0.0;
  double rate = 0.0;
  double accel = 0.0;
};

enum class ProfileKind { kTrapezoid, kSine, kCorruptedTrapezoid, kConstant, kTable };

struct TrapezoidParams {
  double hold_angle = -8.0 * M_PI / 180.0;  // first hold; the cycle mirrors it
  double hold_duration = 2.8;
  double ramp_duration = 0.5;  // time at peak rate that covers the full swing
  double blend_duration = 0.1; // raised-cosine rate blend at each ramp end
  double start_flat = 0.0;     // horizontal lead-in before ramping to hold_angle
};

struct SineParams {
  double offset = 0.0;
  double amplitude = 2.5 * M_PI / 180.0;
  double frequency = M_PI;  // rad/s
};

class PitchProfile {
 public:
  static PitchProfile Trapezoid(const TrapezoidParams& params = {});
  static PitchProfile Sine(const SineParams& params = {});
  /// Trapezoid plus an offset and a sinusoid: the "inaccurate surface data" profile.
  static PitchProfile CorruptedTrapezoid(const TrapezoidParams& params = {},
                                         const SineParams& extra = {5.1 * M_PI / 180.0,
                                                                    1.7 * M_PI / 180.0, M_PI});
  static PitchProfile Constant(double angle);
  /// Table of (t seconds, angle radians), strictly increasing in t; held flat outside.
  static PitchProfile Table(std::vector<std::pair<double, double>> knots);
  /// Two-column CSV (t_seconds, theta_degrees); '#' comments and a header row are allowed.
  static PitchProfile FromCsv(const std::string& path);

  /// Named presets: "TM1", "TM2", "TM3", "flat", and "TM1-late" (10 s flat lead-in).
  static PitchProfile Named(const std::string& name);

  PitchSample sample(double t) const;
  double angle(double t) const { return sample(t).angle; }
  double rate(double t) const { return sample(t).rate; }
  /// Upper bound of |rate| over all t.
  double max_rate() const;

  ProfileKind kind() const { return kind_; }
  const std::string& name() const { return name_; }

 private:
  PitchSample trapezoid(double t) const;
  PitchSample table(double t) const;

  ProfileKind kind_ = ProfileKind::kConstant;
  std::string name_;
  TrapezoidParams trap_;
  SineParams sine_;
  double constant_ = 0.0;
  std::vector<std::pair<double, double>> knots_;
};

/// Rigid placement of the surface frame relative to the pivot. The surface
/// pitches about the world y axis through the pivot at the world origin.
struct DrsGeometry {
  Vec3 origin_offset = Vec3::Zero();  // surface-frame origin in pivot coordinates at zero pitch
};

Mat3 pitch_rotation(double angle);

DrsState drs_pose_at(const PitchProfile& profile, double t, const DrsGeometry& geometry = {});

/// World position of a point fixed in the surface frame.
Vec3 drs_point_world(const DrsState& drs, const DrsGeometry& geometry, const Vec3& point_in_drs);

/// v_c = v_drs + omega x (R p): velocity of a surface-fixed point whose
/// surface-frame coordinates are p.
Vec3 contact_point_velocity(const DrsState& drs, const Vec3& p_c_in_drs);

/// Reported orientation exp(w) R for true orientation R.
Mat3 corrupt_drs_orientation(const Mat3& R_drs, const Vec3& w_drs);

}  // namespace inekf_drs
