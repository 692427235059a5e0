#pragma once

#include <string>

#include "se3sat/simulator.hpp"

namespace se3sat {

/// Parse failure with file/line/key context.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Full run configuration. Defaults reproduce the reference scenario:
/// circular sweep trajectory, downward-facing start, the stock gain set.
struct RunConfig {
  VehicleParams veh;
  OuterGains outer;
  InnerGains inner;
  TrajectoryConfig traj;

  double dt = 0.01;
  double t_final = 60.0;
  Vec3d position0{5.0, 5.0, 10.0};
  Vec3d velocity0 = Vec3d::Zero();
  Vec3d euler_zyx0_deg{-179.0, 0.0, 100.0};  // roll, pitch, yaw
  Vec3d omega0 = Vec3d::Zero();
  Vec3d u_f0 = Vec3d::Zero();
  Vec3d u_s0 = Vec3d::Zero();
  bool monitors = true;
  bool filter_init_zero = true;

  SimConfig sim_config() const;
};

/// key = value sections ([vehicle], [outer], [inner], [trajectory],
/// [sim], [audit]); '#' comments; vectors space-separated. Unknown keys
/// and malformed lines are rejected with line diagnostics.
RunConfig parse_config_text(const std::string& text, const std::string& filename = "<config>");
RunConfig load_config(const std::string& path);

/// Effective configuration, defaults resolved; re-parses to the same
/// values.
std::string serialize_config(const RunConfig& cfg);

}  // namespace se3sat
