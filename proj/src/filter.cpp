#include "inekf_drs/filter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "inekf_drs/errors.hpp"
#include "inekf_drs/kernels.hpp"

namespace inekf_drs {

namespace {

constexpr double kMaxDt = 0.1;
constexpr double kTimeMatch = 1e-9;

struct Flow {
  Mat3 R;
  Vec3 v;
  Vec3 p;
  Vec3 pc;
};

Flow flow_at(const Flow& x, const BiasState& theta, const Vec3& omega, const Vec3& acc, const Vec3& vc) {
  Flow d;
  d.R = x.R * skew(omega - theta.gyro);
  d.v = x.R * (acc - theta.accel) + kGravity;
  d.p = x.v;
  d.pc = vc;
  return d;
}

Flow axpy(const Flow& x, double h, const Flow& d) {
  return {x.R + h * d.R, x.v + h * d.v, x.p + h * d.p, x.pc + h * d.pc};
}

void require_finite(const FilterState& s, const char* stage) {
  if (!is_finite(s)) throw NumericalError(std::string("non-finite filter state after ") + stage);
}

void check_increasing(const std::vector<double>& t, const char* stream) {
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (!(t[i] > t[i - 1])) {
      std::ostringstream msg;
      msg << stream << " stream is not time-ordered at index " << i << " (t = " << t[i] << ")";
      throw InputError(msg.str());
    }
  }
}

template <typename T>
std::vector<double> times_of(const std::vector<T>& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& s : v) out.push_back(s.t);
  return out;
}

void warn_gaps(const std::vector<double>& t, const char* stream, std::vector<std::string>& warnings) {
  if (t.size() < 3) return;
  std::vector<double> dts;
  dts.reserve(t.size() - 1);
  for (std::size_t i = 1; i < t.size(); ++i) dts.push_back(t[i] - t[i - 1]);
  std::vector<double> sorted = dts;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  const double nominal = sorted[sorted.size() / 2];
  for (std::size_t i = 0; i < dts.size(); ++i) {
    if (dts[i] > 5.0 * nominal) {
      std::ostringstream msg;
      msg << stream << " stream gap of " << dts[i] << " s at t = " << t[i];
      warnings.push_back(msg.str());
    }
  }
}

}  // namespace

ProcessDerivative process_derivative(const GroupElement& X, const BiasState& theta,
                                     const Vec3& omega_tilde, const Vec3& a_tilde, const Vec3& v_c_tilde) {
  const Flow d = flow_at({X.R, X.v, X.p, X.pc}, theta, omega_tilde, a_tilde, v_c_tilde);
  return {d.R, d.v, d.p, d.pc};
}

ProcessDerivative process_derivative(const FilterState& state, const ProcessInput& input) {
  return process_derivative(state.X, state.theta, input.imu.omega, input.imu.acc, input.v_c_tilde);
}

Mat6 process_vector_field(const GroupElement& X, const Vec3& omega, const Vec3& acc, const Vec3& v_c) {
  const ProcessDerivative d = process_derivative(X, BiasState{}, omega, acc, v_c);
  Mat6 m = Mat6::Zero();
  m.topLeftCorner<3, 3>() = d.R_dot;
  m.block<3, 1>(0, 3) = d.v_dot;
  m.block<3, 1>(0, 4) = d.p_dot;
  m.block<3, 1>(0, 5) = d.pc_dot;
  return m;
}

Mat18 error_jacobian(const FilterState& state, const Vec3& v_c_tilde) {
  using namespace block;
  const GroupElement& X = state.X;
  Mat18 A = Mat18::Zero();
  A.block<3, 3>(kVel, kRot) = skew(kGravity);
  A.block<3, 3>(kPos, kVel) = Mat3::Identity();
  A.block<3, 3>(kContact, kRot) = skew(v_c_tilde);

  A.block<3, 3>(kRot, kGyroBias) = -X.R;
  A.block<3, 3>(kVel, kGyroBias) = -skew(X.v) * X.R;
  A.block<3, 3>(kVel, kAccelBias) = -X.R;
  A.block<3, 3>(kPos, kGyroBias) = -skew(X.p) * X.R;
  A.block<3, 3>(kContact, kGyroBias) = -skew(X.pc) * X.R;
  return A;
}

Vec18 process_noise_density(const NoiseConfig& noise) {
  Vec18 q = Vec18::Zero();
  q.segment<3>(block::kRot).setConstant(noise.psd(noise.gyro));
  q.segment<3>(block::kVel).setConstant(noise.psd(noise.accel));
  q.segment<3>(block::kContact).setConstant(noise.psd(noise.contact_velocity));
  q.segment<3>(block::kGyroBias).setConstant(noise.psd(noise.gyro_bias));
  q.segment<3>(block::kAccelBias).setConstant(noise.psd(noise.accel_bias));
  return q;
}

Mat18 error_transition(const Mat18& A, double dt) {
  const Mat18 Ad = A * dt;
  const Mat18 I = Mat18::Identity();
  return I + Ad * (I + Ad * (0.5 * I + Ad / 6.0));
}

FilterState propagate(const FilterState& state, const ProcessInput& input, const NoiseConfig& noise) {
  const double dt = input.dt;
  if (!std::isfinite(dt) || dt <= 0.0 || dt > kMaxDt) {
    throw InputError("propagation step dt = " + std::to_string(dt) + " outside (0, 0.1]");
  }
  if (!input.imu.omega.allFinite() || !input.imu.acc.allFinite() || !input.v_c_tilde.allFinite() ||
      (input.imu_end && (!input.imu_end->omega.allFinite() || !input.imu_end->acc.allFinite())) ||
      (input.v_c_tilde_end && !input.v_c_tilde_end->allFinite())) {
    throw InputError("non-finite process input");
  }

  const Vec3 w0 = input.imu.omega;
  const Vec3 a0 = input.imu.acc;
  const Vec3 c0 = input.v_c_tilde;
  const Vec3 w1 = input.imu_end ? input.imu_end->omega : w0;
  const Vec3 a1 = input.imu_end ? input.imu_end->acc : a0;
  const Vec3 c1 = input.v_c_tilde_end ? *input.v_c_tilde_end : c0;
  auto eval = [&](const Flow& x, double s) {
    return flow_at(x, state.theta, w0 + s * (w1 - w0), a0 + s * (a1 - a0), c0 + s * (c1 - c0));
  };

  const Flow x0{state.X.R, state.X.v, state.X.p, state.X.pc};
  const Flow k1 = eval(x0, 0.0);
  const Flow k2 = eval(axpy(x0, 0.5 * dt, k1), 0.5);
  const Flow k3 = eval(axpy(x0, 0.5 * dt, k2), 0.5);
  const Flow k4 = eval(axpy(x0, dt, k3), 1.0);

  FilterState out = state;
  out.X.R = x0.R + (dt / 6.0) * (k1.R + 2.0 * k2.R + 2.0 * k3.R + k4.R);
  out.X.v = x0.v + (dt / 6.0) * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v);
  out.X.p = x0.p + (dt / 6.0) * (k1.p + 2.0 * k2.p + 2.0 * k3.p + k4.p);
  out.X.pc = x0.pc + (dt / 6.0) * (k1.pc + 2.0 * k2.pc + 2.0 * k3.pc + k4.pc);
  out.X.renormalize();
  out.t = state.t + dt;

  const Mat18 A = error_jacobian(state, c0);
  Mat18 B = Mat18::Identity();
  B.topLeftCorner<12, 12>() = adjoint(state.X);
  const Mat18 C = process_noise_density(noise).asDiagonal();
  Mat18 Q;
  kernels::congruence(B.data(), C.data(), kStateDim, Q.data());
  const Mat18 Phi = error_transition(A, dt);
  kernels::transition_step(Phi.data(), state.P.data(), Q.data(), dt, kStateDim, out.P.data());
  return out;
}

Vec3 Observation::innovation(const GroupElement& X) const {
  return (X.matrix() * Y - d).head<3>();
}

Observation orientation_observation(const FilterState& state, const JointVector& q_tilde,
                                   const Mat3& R_drs_tilde, const KinematicModel& model,
                                   const NoiseConfig& noise) {
  const Vec3 n = R_drs_tilde.col(2);
  Observation obs;
  obs.kind = ObservationKind::kOrientation;
  obs.Y.head<3>() = model.foot_normal(q_tilde);
  obs.d.head<3>() = n;
  obs.H.block<3, 3>(0, block::kRot) = skew(n);

  const Jacobian3 J = state.X.R * model.normal_jacobian(q_tilde);
  const double enc_var = noise.encoder * noise.encoder;
  const double drs_var = noise.drs_orientation * noise.drs_orientation;
  obs.N = drs_var * skew(n) * skew(n).transpose() + enc_var * J * J.transpose();
  return obs;
}

Observation position_observation(const FilterState& state, const JointVector& q_tilde,
                                 const KinematicModel& model, const NoiseConfig& noise) {
  Observation obs;
  obs.kind = ObservationKind::kPosition;
  obs.Y << model.foot_position(q_tilde), 0.0, 1.0, -1.0;
  obs.d << 0.0, 0.0, 0.0, 0.0, 1.0, -1.0;
  obs.H.block<3, 3>(0, block::kPos) = -Mat3::Identity();
  obs.H.block<3, 3>(0, block::kContact) = Mat3::Identity();

  const Jacobian3 J = state.X.R * model.position_jacobian(q_tilde);
  obs.N = noise.encoder * noise.encoder * J * J.transpose();
  return obs;
}

namespace {

// Rows of an orientation observation that carry information. Both H and the
// first-order innovation vanish along n, and N is nearly singular there, so
// only the plane orthogonal to n is kept.
Eigen::Matrix<double, 2, 3> normal_plane_rows(const Vec3& n) {
  const Vec3 u = n.unitOrthogonal();
  Eigen::Matrix<double, 2, 3> T;
  T.row(0) = u.transpose();
  T.row(1) = n.normalized().cross(u).transpose();
  return T;
}

}  // namespace

UpdateResult update(const FilterState& state, const std::vector<Observation>& observations) {
  if (observations.empty()) throw InputError("update called without observations");
  int k = 0;
  for (const Observation& obs : observations) k += obs.kind == ObservationKind::kOrientation ? 2 : 3;
  Eigen::MatrixXd H(k, kStateDim);
  Eigen::VectorXd z(k);
  Eigen::MatrixXd N = Eigen::MatrixXd::Zero(k, k);
  int row = 0;
  for (const Observation& obs : observations) {
    if (obs.kind == ObservationKind::kOrientation) {
      const Eigen::Matrix<double, 2, 3> T = normal_plane_rows(obs.d.head<3>());
      H.middleRows(row, 2) = T * obs.H;
      z.segment(row, 2) = T * obs.innovation(state.X);
      N.block(row, row, 2, 2) = T * obs.N * T.transpose();
      row += 2;
    } else {
      H.middleRows(row, 3) = obs.H;
      z.segment(row, 3) = obs.innovation(state.X);
      N.block(row, row, 3, 3) = obs.N;
      row += 3;
    }
  }

  Eigen::MatrixXd S = H * state.P * H.transpose() + N;
  S = 0.5 * (S + S.transpose()).eval();
  UpdateResult result;
  result.state = state;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(S, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  result.condition = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  if (!(lo > 0.0) || result.condition > kMaxInnovationCondition) {
    result.status = UpdateStatus::kSkippedIllConditioned;
    return result;
  }

  const Eigen::MatrixXd PHt = state.P * H.transpose();
  const Eigen::MatrixXd L = S.ldlt().solve(PHt.transpose()).transpose();
  const Vec18 delta = L * z;

  FilterState& out = result.state;
  out.X = sek3_exp(delta.head<12>()) * state.X;
  out.X.renormalize();
  out.theta.gyro += delta.segment<3>(block::kGyroBias);
  out.theta.accel += delta.segment<3>(block::kAccelBias);
  out.P = (Mat18::Identity() - L * H) * state.P;
  symmetrize(out.P);
  require_finite(out, "update");
  return result;
}

FilterState jump_propagate(const FilterState& state, const JointVector& q_old, const JointVector& q_new,
                           const KinematicModel& model, const NoiseConfig& noise) {
  FilterState out = state;
  GroupElement delta;
  delta.pc = contact_jump(model, q_old, q_new);
  out.X = state.X * delta;

  const Jacobian3 J = contact_jump_jacobian(model, q_old, q_new);
  Mat12 cov = Mat12::Zero();
  cov.block<3, 3>(block::kContact, block::kContact) = noise.encoder * noise.encoder * J * J.transpose();
  const Mat12 Ad = adjoint(state.X);
  out.P.topLeftCorner<12, 12>() += Ad * cov * Ad.transpose();
  symmetrize(out.P);
  return out;
}

const char* variant_name(FilterVariant variant) {
  return variant == FilterVariant::kDrs ? "drs" : "srs";
}

FilterVariant parse_variant(const std::string& name) {
  if (name == "drs" || name == "DRS") return FilterVariant::kDrs;
  if (name == "srs" || name == "SRS") return FilterVariant::kSrs;
  throw InputError("unknown filter variant '" + name + "' (expected drs or srs)");
}

RunLog run_variant(const FilterState& initial, const ScenarioDataset& data, FilterVariant variant,
                   const NoiseConfig& noise, const KinematicModel& model) {
  const auto& imu = data.imu;
  if (imu.size() < 2) throw InputError("dataset needs at least two IMU samples");
  const std::vector<double> imu_t = times_of(imu);
  const std::vector<double> enc_t = times_of(data.encoder);
  check_increasing(imu_t, "imu");
  check_increasing(enc_t, "encoder");
  check_increasing(times_of(data.drs_orientation), "drs_pose");
  check_increasing(times_of(data.contact_switch), "contact_switch");

  const bool use_vc = variant == FilterVariant::kDrs;
  if (use_vc && data.contact_velocity.size() != imu.size()) {
    throw InputError("contact_vel stream must be sampled at the IMU timestamps");
  }
  if (use_vc) {
    for (std::size_t i = 0; i < imu.size(); ++i) {
      if (std::abs(data.contact_velocity[i].t - imu[i].t) > kTimeMatch) {
        throw InputError("contact_vel stream must be sampled at the IMU timestamps");
      }
    }
  }
  if (!(initial.t >= imu.front().t - kTimeMatch) || initial.t >= imu.back().t) {
    throw InputError("initial filter time lies outside the IMU stream");
  }

  RunLog log;
  warn_gaps(imu_t, "imu", log.warnings);
  warn_gaps(enc_t, "encoder", log.warnings);

  FilterState state = initial;
  std::size_t k = static_cast<std::size_t>(
      std::upper_bound(imu_t.begin(), imu_t.end(), state.t + kTimeMatch) - imu_t.begin());
  k = k == 0 ? 0 : k - 1;

  auto input_at = [&](double t) {
    const std::size_t j = std::min(k, imu.size() - 2);
    const double s = std::clamp((t - imu[j].t) / (imu[j + 1].t - imu[j].t), 0.0, 1.0);
    ImuSample u;
    u.t = t;
    u.omega = imu[j].omega + s * (imu[j + 1].omega - imu[j].omega);
    u.acc = imu[j].acc + s * (imu[j + 1].acc - imu[j].acc);
    Vec3 vc = Vec3::Zero();
    if (use_vc) {
      vc = data.contact_velocity[j].v + s * (data.contact_velocity[j + 1].v - data.contact_velocity[j].v);
    }
    return std::make_pair(u, vc);
  };

  auto advance_to = [&](double target) {
    while (state.t < target - kTimeMatch) {
      while (k + 1 < imu.size() - 1 && imu[k + 1].t <= state.t + kTimeMatch) ++k;
      const double knot = imu[std::min(k + 1, imu.size() - 1)].t;
      const double next = std::min(target, knot);
      if (next - state.t <= kTimeMatch) break;
      const auto [u0, c0] = input_at(state.t);
      const auto [u1, c1] = input_at(next);
      ProcessInput in;
      in.imu = u0;
      in.v_c_tilde = c0;
      in.imu_end = u1;
      in.v_c_tilde_end = c1;
      in.dt = next - state.t;
      state = propagate(state, in, noise);
      state.t = next;
      require_finite(state, "propagation");
    }
  };

  // Merged timeline of measurement instants and landing events.
  struct Event {
    double t;
    bool is_switch;
    std::size_t index;
  };
  std::vector<Event> events;
  events.reserve(data.encoder.size() + data.contact_switch.size());
  for (std::size_t i = 0; i < data.encoder.size(); ++i) events.push_back({data.encoder[i].t, false, i});
  for (std::size_t i = 0; i < data.contact_switch.size(); ++i) {
    events.push_back({data.contact_switch[i].t, true, i});
  }
  std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.t < b.t; });

  std::size_t drs_cursor = 0;
  for (const Event& ev : events) {
    if (ev.t <= initial.t + kTimeMatch) continue;
    if (ev.t > imu.back().t) {
      log.warnings.push_back("events after the last IMU sample were ignored");
      break;
    }
    advance_to(ev.t);
    if (ev.is_switch) {
      const ContactSwitchEvent& sw = data.contact_switch[ev.index];
      state = jump_propagate(state, sw.q_old, sw.q_new, model, noise);
      require_finite(state, "jump");
      ++log.jumps;
      continue;
    }

    const EncoderSample& enc = data.encoder[ev.index];
    std::vector<Observation> obs;
    if (variant == FilterVariant::kDrs) {
      while (drs_cursor < data.drs_orientation.size() &&
             data.drs_orientation[drs_cursor].t < enc.t - kTimeMatch) {
        ++drs_cursor;
      }
      if (drs_cursor < data.drs_orientation.size() &&
          std::abs(data.drs_orientation[drs_cursor].t - enc.t) <= kTimeMatch) {
        obs.push_back(orientation_observation(state, enc.q, data.drs_orientation[drs_cursor].R, model, noise));
      }
    }
    obs.push_back(position_observation(state, enc.q, model, noise));
    UpdateResult res = update(state, obs);
    if (res.status == UpdateStatus::kApplied) {
      ++log.updates_applied;
    } else {
      ++log.updates_skipped;
      std::ostringstream msg;
      msg << "update skipped at t = " << enc.t << " (condition " << res.condition << ")";
      log.warnings.push_back(msg.str());
    }
    state = res.state;
    log.estimates.push_back(state);
  }
  return log;
}

}  // namespace inekf_drs
