#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "inekf_drs/dataset_io.hpp"
#include "inekf_drs/drs.hpp"
#include "inekf_drs/streams.hpp"

namespace inekf_drs {

/// Reported error channels, in this order.
enum Channel { kVx = 0, kVy, kVz, kYaw, kPitch, kRoll, kChannelCount };
const char* channel_name(int channel);

using ChannelArray = std::array<double, kChannelCount>;

struct ErrorSample {
  double t = 0.0;
  ChannelArray e{};  // velocity error (world frame, m/s) and ZYX angles of R_est R_true^T (rad)
};

/// Yaw, pitch, roll (ZYX) of a rotation.
Vec3 yaw_pitch_roll(const Mat3& R);

/// Truth interpolated at t: geodesic for the rotation, linear for the rest.
/// Throws InputError when t lies more than half a sample outside the truth span.
TruthSample interpolate_truth(const std::vector<TruthSample>& truth, double t);

std::vector<ErrorSample> compute_errors(const std::vector<TruthSample>& truth,
                                        const std::vector<EstimateRecord>& estimates);

/// Default thresholds: velocity 0.1 m/s, yaw 0.1 rad, pitch and roll 0.05 rad.
ChannelArray default_thresholds();

/// First sample time after which |error| stays below the threshold; empty if
/// the last sample is still above it.
std::optional<double> convergence_time(const std::vector<ErrorSample>& errors, int channel,
                                       double threshold, double from = -1e300);

struct RunReport {
  ChannelArray rms_full{};
  ChannelArray rms_after{};  // samples with t >= rms_after_start
  double rms_after_start = 5.0;
  std::array<std::optional<double>, kChannelCount> convergence{};
  ChannelArray initial_abs{};
  ChannelArray final_abs{};
  std::size_t samples = 0;
  bool failed = false;
  std::string failure;
};

RunReport make_report(const std::vector<ErrorSample>& errors, const ChannelArray& thresholds,
                      double rms_after_start = 5.0);

/// Min/max per time step over runs sharing a time grid.
struct Envelope {
  std::vector<double> t;
  std::vector<ChannelArray> lo;
  std::vector<ChannelArray> hi;
};

Envelope error_envelope(const std::vector<std::vector<ErrorSample>>& runs);
void write_envelope_csv(std::ostream& out, const Envelope& envelope);

/// Normalized estimation error squared over the selected error-state indices.
double nees(const FilterState& estimate, const GroupElement& X_true, const BiasState& theta_true,
            const std::vector<int>& indices);

/// Error-state indices of roll/pitch (the rotation error orthogonal to gravity) and velocity.
std::vector<int> roll_pitch_velocity_indices();

/// Earliest time at which |pitch| exceeds `tolerance`, scanning in steps of `dt`.
std::optional<double> first_tilted_time(const PitchProfile& profile, double duration, double dt = 1e-3,
                                        double tolerance = 1e-6);

}  // namespace inekf_drs
