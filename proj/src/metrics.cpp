#include "inekf_drs/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "inekf_drs/errors.hpp"

namespace inekf_drs {

const char* channel_name(int channel) {
  static const char* names[kChannelCount] = {"v_x", "v_y", "v_z", "yaw", "pitch", "roll"};
  return (channel >= 0 && channel < kChannelCount) ? names[channel] : "?";
}

Vec3 yaw_pitch_roll(const Mat3& R) {
  const double pitch = std::asin(std::clamp(-R(2, 0), -1.0, 1.0));
  const double yaw = std::atan2(R(1, 0), R(0, 0));
  const double roll = std::atan2(R(2, 1), R(2, 2));
  return Vec3(yaw, pitch, roll);
}

namespace {
constexpr double kMaxContactSpeed = 2.0;  // m/s
}  // namespace

TruthSample interpolate_truth(const std::vector<TruthSample>& truth, double t) {
  if (truth.empty()) throw InputError("no truth samples");
  const double half = truth.size() > 1 ? 0.5 * (truth[1].t - truth[0].t) : 0.0;
  if (t < truth.front().t - half || t > truth.back().t + half) {
    throw InputError("time " + std::to_string(t) + " outside the truth span");
  }
  if (t <= truth.front().t) return truth.front();
  if (t >= truth.back().t) return truth.back();
  const auto it = std::upper_bound(truth.begin(), truth.end(), t,
                                   [](double x, const TruthSample& s) { return x < s.t; });
  const TruthSample& b = *it;
  const TruthSample& a = *(it - 1);
  const double s = (t - a.t) / (b.t - a.t);
  TruthSample out;
  out.t = t;
  out.X.R = a.X.R * so3_exp(s * so3_log(a.X.R.transpose() * b.X.R));
  out.X.v = a.X.v + s * (b.X.v - a.X.v);
  out.X.p = a.X.p + s * (b.X.p - a.X.p);
  // The contact column jumps at landings. Surface points move well below
  // kMaxContactSpeed, so a faster apparent motion marks a jump and the earlier
  // value is held.
  const Vec3 dpc = b.X.pc - a.X.pc;
  out.X.pc = dpc.norm() <= kMaxContactSpeed * (b.t - a.t) ? Vec3(a.X.pc + s * dpc) : a.X.pc;
  out.theta.gyro = a.theta.gyro + s * (b.theta.gyro - a.theta.gyro);
  out.theta.accel = a.theta.accel + s * (b.theta.accel - a.theta.accel);
  return out;
}

std::vector<ErrorSample> compute_errors(const std::vector<TruthSample>& truth,
                                        const std::vector<EstimateRecord>& estimates) {
  if (truth.empty() || estimates.empty()) throw InputError("empty truth or estimate trajectory");
  const double half = truth.size() > 1 ? 0.5 * (truth[1].t - truth[0].t) : 0.0;
  std::vector<ErrorSample> out;
  out.reserve(estimates.size());
  for (const EstimateRecord& e : estimates) {
    if (e.t < truth.front().t - half || e.t > truth.back().t + half) continue;
    const TruthSample tr = interpolate_truth(truth, e.t);
    ErrorSample s;
    s.t = e.t;
    const Vec3 dv = e.X.v - tr.X.v;
    const Vec3 ypr = yaw_pitch_roll(e.X.R * tr.X.R.transpose());
    s.e = {dv.x(), dv.y(), dv.z(), ypr[0], ypr[1], ypr[2]};
    out.push_back(s);
  }
  if (out.empty()) throw InputError("estimate and truth time ranges are disjoint");
  return out;
}

ChannelArray default_thresholds() { return {0.1, 0.1, 0.1, 0.1, 0.05, 0.05}; }

std::optional<double> convergence_time(const std::vector<ErrorSample>& errors, int channel,
                                       double threshold, double from) {
  std::optional<double> since;
  for (const ErrorSample& s : errors) {
    if (s.t < from) continue;
    if (std::abs(s.e[channel]) < threshold) {
      if (!since) since = s.t;
    } else {
      since.reset();
    }
  }
  return since;
}

RunReport make_report(const std::vector<ErrorSample>& errors, const ChannelArray& thresholds,
                      double rms_after_start) {
  RunReport r;
  r.samples = errors.size();
  r.rms_after_start = rms_after_start;
  if (errors.empty()) return r;
  ChannelArray sum_full{};
  ChannelArray sum_after{};
  std::size_t n_after = 0;
  for (const ErrorSample& s : errors) {
    const bool after = s.t >= rms_after_start;
    if (after) ++n_after;
    for (int c = 0; c < kChannelCount; ++c) {
      sum_full[c] += s.e[c] * s.e[c];
      if (after) sum_after[c] += s.e[c] * s.e[c];
    }
  }
  for (int c = 0; c < kChannelCount; ++c) {
    r.rms_full[c] = std::sqrt(sum_full[c] / static_cast<double>(errors.size()));
    r.rms_after[c] = n_after > 0 ? std::sqrt(sum_after[c] / static_cast<double>(n_after)) : 0.0;
    r.convergence[c] = convergence_time(errors, c, thresholds[c]);
    r.initial_abs[c] = std::abs(errors.front().e[c]);
    r.final_abs[c] = std::abs(errors.back().e[c]);
  }
  return r;
}

Envelope error_envelope(const std::vector<std::vector<ErrorSample>>& runs) {
  Envelope env;
  if (runs.empty()) return env;
  std::size_t n = runs.front().size();
  for (const auto& r : runs) n = std::min(n, r.size());
  env.t.resize(n);
  env.lo.resize(n);
  env.hi.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    env.t[i] = runs.front()[i].t;
    env.lo[i] = runs.front()[i].e;
    env.hi[i] = runs.front()[i].e;
    for (const auto& r : runs) {
      if (std::abs(r[i].t - env.t[i]) > 1e-9) throw InputError("runs do not share a time grid");
      for (int c = 0; c < kChannelCount; ++c) {
        env.lo[i][c] = std::min(env.lo[i][c], r[i].e[c]);
        env.hi[i][c] = std::max(env.hi[i][c], r[i].e[c]);
      }
    }
  }
  return env;
}

void write_envelope_csv(std::ostream& out, const Envelope& env) {
  out << "t";
  for (int c = 0; c < kChannelCount; ++c) out << ',' << channel_name(c) << "_min," << channel_name(c) << "_max";
  out << '\n';
  out.precision(10);
  for (std::size_t i = 0; i < env.t.size(); ++i) {
    out << env.t[i];
    for (int c = 0; c < kChannelCount; ++c) out << ',' << env.lo[i][c] << ',' << env.hi[i][c];
    out << '\n';
  }
}

double nees(const FilterState& estimate, const GroupElement& X_true, const BiasState& theta_true,
            const std::vector<int>& indices) {
  const ErrorState err = error_state(estimate, X_true, theta_true);
  Vec18 full;
  full << err.xi, err.zeta;
  const int k = static_cast<int>(indices.size());
  Eigen::VectorXd e(k);
  Eigen::MatrixXd P(k, k);
  for (int i = 0; i < k; ++i) {
    e[i] = full[indices[i]];
    for (int j = 0; j < k; ++j) P(i, j) = estimate.P(indices[i], indices[j]);
  }
  return e.dot(P.ldlt().solve(e));
}

std::vector<int> roll_pitch_velocity_indices() {
  return {block::kRot + 0, block::kRot + 1, block::kVel + 0, block::kVel + 1, block::kVel + 2};
}

std::optional<double> first_tilted_time(const PitchProfile& profile, double duration, double dt,
                                        double tolerance) {
  for (double t = 0.0; t <= duration; t += dt) {
    if (std::abs(profile.angle(t)) > tolerance) return t;
  }
  return std::nullopt;
}

}  // namespace inekf_drs
