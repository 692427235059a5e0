#pragma once

#include "se3sat/attitude.hpp"

namespace se3sat {

/// Memory state of the path-lifting automaton: a quaternion q_hat that
/// shadows the attitude error on the covering space plus a chart sign.
struct LiftState {
  UnitQuaterniond q_hat = UnitQuaterniond::identity();
  int m_star = 1;
};

struct JumpFlags {
  bool in_dq = false;  // memory drifted: dist(q_hat, Q(R~)) >= alpha
  bool in_dm = false;  // chart exhausted: lifted MRP norm >= 1 + delta
  bool any() const { return in_dq || in_dm; }
};

/// Lifted MRP error phi(m* Phi(q_hat, R~)) without flow-set checking.
Mrpd lift_output_raw(const LiftState& x, const Mat3d& R_tilde);

/// Lifted output; throws if jump conditions are unserviced (the flow set
/// excludes such states).
Mrpd lift_output(const LiftState& x, const Mat3d& R_tilde, double alpha, double delta);

JumpFlags jump_conditions(const LiftState& x, const Mat3d& R_tilde, double alpha, double delta);

/// One application of the jump map. On the overlap D_q and D_m the
/// memory-resync branch is applied first (any selection solves the
/// automaton; a fixed order keeps runs reproducible).
LiftState jump(const LiftState& x, const Mat3d& R_tilde, double alpha, double delta);

/// Discrete-time driver: applies jumps until the state flows, then emits
/// the lifted error. At most two jumps are ever needed; the loop is
/// capped at four and errors beyond.
struct SettleResult {
  LiftState state;
  Mrpd theta_tilde;
  int jump_count = 0;
  int resync_count = 0;
  int flip_count = 0;
};
SettleResult settle(const LiftState& x, const Mat3d& R_tilde, double alpha, double delta);

}  // namespace se3sat
