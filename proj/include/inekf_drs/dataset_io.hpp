#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "inekf_drs/state.hpp"
#include "inekf_drs/streams.hpp"

namespace inekf_drs {

/// Unit quaternion (w, x, y, z) with w >= 0.
Eigen::Vector4d rotation_to_wxyz(const Mat3& R);
Mat3 wxyz_to_rotation(const Eigen::Vector4d& q);

/// JSON Lines, one record per line with a "type" discriminator:
/// header, truth, imu, encoder, contact_vel, drs_pose, contact_switch.
/// Records after the header are ordered by time.
void write_dataset(std::ostream& out, const ScenarioDataset& data);
void save_dataset(const std::string& path, const ScenarioDataset& data);
ScenarioDataset read_dataset(std::istream& in);
ScenarioDataset load_dataset(const std::string& path);

/// Per-step estimate record: t, q (wxyz), v, p, pc, b_omega, b_acc, P_diag.
struct EstimateRecord {
  double t = 0.0;
  GroupElement X;
  BiasState theta;
  Vec18 P_diag = Vec18::Zero();
};

EstimateRecord to_record(const FilterState& state);
void write_estimates(std::ostream& out, const std::vector<FilterState>& states);
void save_estimates(const std::string& path, const std::vector<FilterState>& states);
std::vector<EstimateRecord> read_estimates(std::istream& in);
std::vector<EstimateRecord> load_estimates(const std::string& path);

}  // namespace inekf_drs
