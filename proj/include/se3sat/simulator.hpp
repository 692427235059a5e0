#pragma once

#include <optional>
#include <string>
#include <vector>

#include "se3sat/feasibility.hpp"
#include "se3sat/inner_loop.hpp"
#include "se3sat/lifting.hpp"
#include "se3sat/outer_loop.hpp"
#include "se3sat/trajectory.hpp"

namespace se3sat {

struct PlantState {
  Vec3d p = Vec3d::Zero();
  Vec3d v = Vec3d::Zero();
  UnitQuaterniond q = UnitQuaterniond::identity();
  Vec3d omega = Vec3d::Zero();
};

struct SimConfig {
  double dt = 0.01;
  double t_final = 60.0;
  PlantState x0;
  FilterState xf0;
  LiftState lift0;
  OuterGains outer;
  InnerGains inner;
  VehicleParams veh;
  TrajectoryConfig traj;
  bool monitors = true;
  /// Audited bounds; when present the run asserts input compliance and
  /// reference-rate dominance against them at every step.
  std::optional<BoundsReport> bounds;

  void validate() const;
};

/// Everything the control stack produces at one state; pure function of
/// (t, plant, filter, frozen lift memory).
struct StackEval {
  ReferenceSample ref;
  Vec3d p_tilde = Vec3d::Zero();
  Vec3d v_tilde = Vec3d::Zero();
  TransformedState z;
  OuterOutput outer;
  AttitudeReference att;
  Mat3d R = Mat3d::Identity();
  Mat3d R_tilde = Mat3d::Identity();
  Vec3d omega_tilde = Vec3d::Zero();
  Mrpd theta_tilde;
  TorqueCommand cmd;
};

StackEval eval_stack(double t, const PlantState& x, const FilterState& xf,
                     const LiftState& lift, const SimConfig& cfg);

struct StepRecord {
  double t = 0.0;
  int j = 0;
  Vec3d p, p_d, v;
  double yaw = 0.0, psi_d = 0.0;
  Vec3d z1, z2, u_p_bar, u_f, u_s, rho;
  double T = 0.0;
  Vec3d tau, tau_c;
  Vec3d theta_tilde, omega_tilde, omega_d, domega_d;
  double s_theta_norm = 0.0, s_omega_norm = 0.0;
  double V1 = 0.0, V2 = 0.0;
  double pos_err = 0.0, mrp_err = 0.0;
};

struct JumpEvent {
  double t = 0.0;
  int j_before = 0;
  bool flip = false;  // false: memory resync, true: chart flip
  double pre_norm = 0.0, post_norm = 0.0;
  double v2_pre = 0.0, v2_post = 0.0;
};

struct Summary {
  int steps = 0;
  double steady_pos_err = 0.0;
  double steady_mrp_err = 0.0;
  double steady_yaw_err = 0.0;
  double T_min_seen = 0.0, T_max_seen = 0.0;
  Vec3d tau_abs_max = Vec3d::Zero();
  double max_omega_d = 0.0, max_domega_d = 0.0;
  double max_theta_norm = 0.0;
  int jump_count = 0, resync_count = 0, flip_count = 0;
  int v1_literal_increases = 0;
};

struct Log {
  std::vector<StepRecord> steps;
  std::vector<JumpEvent> jumps;
  Summary summary;
};

/// Invariant breach, stamped with hybrid time.
class SimulationError : public std::runtime_error {
 public:
  SimulationError(const std::string& what, double t, int j)
      : std::runtime_error(what + " at (t=" + std::to_string(t) + ", j=" + std::to_string(j) + ")"),
        t_(t), j_(j) {}
  double t() const { return t_; }
  int j() const { return j_; }

 private:
  double t_;
  int j_;
};

/// Plant vector field under fixed thrust and torque.
void plant_rhs(const PlantState& x, double T, const Vec3d& tau, const VehicleParams& veh,
               Vec3d& dp, Vec3d& dv, double& dq0, Vec3d& dq1, Vec3d& domega);

/// Closed-loop hybrid executor. Jumps are serviced at step boundaries;
/// the flow between boundaries is integrated with RK4 re-evaluating the
/// full control stack at each stage (lift memory frozen within a step).
class Simulator {
 public:
  explicit Simulator(const SimConfig& cfg);

  /// Boundary work at the current time: settle jumps, run monitors, emit
  /// the record.
  StepRecord boundary();

  /// Integrate the flow dt forward (call after boundary()).
  void advance();

  /// boundary() + advance().
  StepRecord step();

  const SimConfig& config() const { return cfg_; }
  double t() const { return t_; }
  int jumps() const { return j_; }
  const PlantState& plant() const { return x_; }
  const FilterState& filter() const { return xf_; }
  const LiftState& lift() const { return lift_; }

 private:
  SimConfig cfg_;
  MonitorGains mon_;
  PlantState x_;
  FilterState xf_;
  LiftState lift_;
  double t_ = 0.0;
  int j_ = 0;
  int step_index_ = 0;
  bool have_prev_ = false;
  double prev_v1_ = 0.0, prev_v2_ = 0.0;
  double prev_flip_t_ = -1.0;

 public:
  std::vector<JumpEvent> jump_events;
  int v1_literal_increases = 0;
};

Log run(const SimConfig& cfg);

std::string format_summary(const Summary& s);

}  // namespace se3sat
