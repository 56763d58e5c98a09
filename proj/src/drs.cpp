#include "inekf_drs/drs.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "inekf_drs/errors.hpp"

namespace inekf_drs {

namespace {

constexpr double kDeg = M_PI / 180.0;

// Transition of `delta` over `ramp + blend` seconds, with the rate blended in
// and out by half-cosines of length `blend`. Peak rate is delta / ramp.
PitchSample smooth_ramp(double s, double delta, double ramp, double blend) {
  const double total = ramp + blend;
  const double r = delta / ramp;
  PitchSample out;
  if (s <= 0.0) return out;
  if (s >= total) {
    out.angle = delta;
    return out;
  }
  if (blend <= 0.0) {
    out.angle = r * s;
    out.rate = r;
    return out;
  }
  const double w = M_PI / blend;
  auto rising = [&](double u) {
    return 0.5 * r * (u - std::sin(w * u) / w);
  };
  if (s < blend) {
    out.angle = rising(s);
    out.rate = 0.5 * r * (1.0 - std::cos(w * s));
    out.accel = 0.5 * r * w * std::sin(w * s);
  } else if (s <= total - blend) {
    out.angle = rising(blend) + r * (s - blend);
    out.rate = r;
  } else {
    const double u = total - s;
    out.angle = delta - rising(u);
    out.rate = 0.5 * r * (1.0 - std::cos(w * u));
    out.accel = -0.5 * r * w * std::sin(w * u);
  }
  return out;
}

PitchSample sine_sample(const SineParams& p, double t) {
  PitchSample out;
  const double ph = p.frequency * t;
  out.angle = p.offset + p.amplitude * std::sin(ph);
  out.rate = p.amplitude * p.frequency * std::cos(ph);
  out.accel = -p.amplitude * p.frequency * p.frequency * std::sin(ph);
  return out;
}

void validate_trapezoid(const TrapezoidParams& p) {
  if (!(p.hold_duration >= 0.0) || !(p.ramp_duration > 0.0) || !(p.blend_duration >= 0.0) ||
      !(p.start_flat >= 0.0) || !std::isfinite(p.hold_angle)) {
    throw InputError("invalid trapezoid profile parameters");
  }
}

}  // namespace

PitchProfile PitchProfile::Trapezoid(const TrapezoidParams& params) {
  validate_trapezoid(params);
  PitchProfile p;
  p.kind_ = ProfileKind::kTrapezoid;
  p.name_ = "TM1";
  p.trap_ = params;
  return p;
}

PitchProfile PitchProfile::Sine(const SineParams& params) {
  PitchProfile p;
  p.kind_ = ProfileKind::kSine;
  p.name_ = "TM2";
  p.sine_ = params;
  return p;
}

PitchProfile PitchProfile::CorruptedTrapezoid(const TrapezoidParams& params, const SineParams& extra) {
  validate_trapezoid(params);
  PitchProfile p;
  p.kind_ = ProfileKind::kCorruptedTrapezoid;
  p.name_ = "TM3";
  p.trap_ = params;
  p.sine_ = extra;
  return p;
}

PitchProfile PitchProfile::Constant(double angle) {
  PitchProfile p;
  p.kind_ = ProfileKind::kConstant;
  p.name_ = "constant";
  p.constant_ = angle;
  return p;
}

PitchProfile PitchProfile::Table(std::vector<std::pair<double, double>> knots) {
  if (knots.empty()) throw InputError("pitch table is empty");
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (!std::isfinite(knots[i].first) || !std::isfinite(knots[i].second)) {
      throw InputError("pitch table has a non-finite entry at row " + std::to_string(i));
    }
    if (i > 0 && knots[i].first <= knots[i - 1].first) {
      throw InputError("pitch table times must be strictly increasing (row " + std::to_string(i) + ")");
    }
  }
  PitchProfile p;
  p.kind_ = ProfileKind::kTable;
  p.name_ = "table";
  p.knots_ = std::move(knots);
  return p;
}

PitchProfile PitchProfile::FromCsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open pitch profile '" + path + "'");
  std::vector<std::pair<double, double>> knots;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double t = 0.0;
    double deg = 0.0;
    if (!(ss >> t >> deg)) {
      if (knots.empty() && line_no == 1) continue;  // header row
      throw InputError("pitch profile '" + path + "': bad row " + std::to_string(line_no));
    }
    knots.emplace_back(t, deg * kDeg);
  }
  PitchProfile p = Table(std::move(knots));
  p.name_ = "csv:" + path;
  return p;
}

PitchProfile PitchProfile::Named(const std::string& name) {
  if (name == "TM1") return Trapezoid();
  if (name == "TM2") return Sine();
  if (name == "TM3") return CorruptedTrapezoid();
  if (name == "flat") return Constant(0.0);
  if (name == "TM1-late" || name == "TM3-late") {
    TrapezoidParams params;
    params.start_flat = 10.0;
    PitchProfile p = name == "TM1-late" ? Trapezoid(params) : CorruptedTrapezoid(params);
    p.name_ = name;
    return p;
  }
  throw InputError("unknown pitch profile '" + name + "'");
}

PitchSample PitchProfile::trapezoid(double t) const {
  const TrapezoidParams& p = trap_;
  const double ramp_total = p.ramp_duration + p.blend_duration;
  double s = t;
  if (p.start_flat > 0.0) {
    if (s < p.start_flat) return {};
    s -= p.start_flat;
    if (s < ramp_total) {
      return smooth_ramp(s, p.hold_angle, p.ramp_duration, p.blend_duration);
    }
    s -= ramp_total;
  }
  const double period = 2.0 * (p.hold_duration + ramp_total);
  s = std::fmod(s, period);
  const double a = p.hold_angle;
  PitchSample out;
  if (s < p.hold_duration) {
    out.angle = a;
    return out;
  }
  s -= p.hold_duration;
  if (s < ramp_total) {
    out = smooth_ramp(s, -2.0 * a, p.ramp_duration, p.blend_duration);
    out.angle += a;
    return out;
  }
  s -= ramp_total;
  if (s < p.hold_duration) {
    out.angle = -a;
    return out;
  }
  s -= p.hold_duration;
  out = smooth_ramp(s, 2.0 * a, p.ramp_duration, p.blend_duration);
  out.angle -= a;
  return out;
}

PitchSample PitchProfile::table(double t) const {
  PitchSample out;
  if (t <= knots_.front().first) {
    out.angle = knots_.front().second;
    return out;
  }
  if (t >= knots_.back().first) {
    out.angle = knots_.back().second;
    return out;
  }
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), t,
                                   [](double x, const std::pair<double, double>& k) { return x < k.first; });
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  const double slope = (hi.second - lo.second) / (hi.first - lo.first);
  out.angle = lo.second + slope * (t - lo.first);
  out.rate = slope;
  return out;
}

PitchSample PitchProfile::sample(double t) const {
  switch (kind_) {
    case ProfileKind::kTrapezoid:
      return trapezoid(t);
    case ProfileKind::kSine:
      return sine_sample(sine_, t);
    case ProfileKind::kCorruptedTrapezoid: {
      PitchSample a = trapezoid(t);
      const PitchSample b = sine_sample(sine_, t);
      a.angle += b.angle;
      a.rate += b.rate;
      a.accel += b.accel;
      return a;
    }
    case ProfileKind::kConstant: {
      PitchSample out;
      out.angle = constant_;
      return out;
    }
    case ProfileKind::kTable:
      return table(t);
  }
  return {};
}

double PitchProfile::max_rate() const {
  const double trap_rate = 2.0 * std::abs(trap_.hold_angle) / trap_.ramp_duration;
  const double sine_rate = std::abs(sine_.amplitude * sine_.frequency);
  switch (kind_) {
    case ProfileKind::kTrapezoid:
      return trap_rate;
    case ProfileKind::kSine:
      return sine_rate;
    case ProfileKind::kCorruptedTrapezoid:
      return trap_rate + sine_rate;
    case ProfileKind::kConstant:
      return 0.0;
    case ProfileKind::kTable: {
      double m = 0.0;
      for (std::size_t i = 1; i < knots_.size(); ++i) {
        m = std::max(m, std::abs((knots_[i].second - knots_[i - 1].second) /
                                 (knots_[i].first - knots_[i - 1].first)));
      }
      return m;
    }
  }
  return 0.0;
}

Mat3 pitch_rotation(double angle) {
  Mat3 R;
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  R << c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c;
  return R;
}

DrsState drs_pose_at(const PitchProfile& profile, double t, const DrsGeometry& geometry) {
  if (!(t >= 0.0)) throw InputError("surface pose requested at negative time");
  const PitchSample s = profile.sample(t);
  DrsState out;
  out.t = t;
  out.R = pitch_rotation(s.angle);
  out.omega = Vec3(0.0, s.rate, 0.0);
  out.v = out.omega.cross(out.R * geometry.origin_offset);
  return out;
}

Vec3 drs_point_world(const DrsState& drs, const DrsGeometry& geometry, const Vec3& point_in_drs) {
  return drs.R * (geometry.origin_offset + point_in_drs);
}

Vec3 contact_point_velocity(const DrsState& drs, const Vec3& p_c_in_drs) {
  return drs.v + drs.omega.cross(drs.R * p_c_in_drs);
}

Mat3 corrupt_drs_orientation(const Mat3& R_drs, const Vec3& w_drs) { return so3_exp(w_drs) * R_drs; }

}  // namespace inekf_drs
