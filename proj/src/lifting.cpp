#include "se3sat/lifting.hpp"

#include <stdexcept>

namespace se3sat {

Mrpd lift_output_raw(const LiftState& x, const Mat3d& R_tilde) {
  return mrp_from_quat(nearest_lift(x.q_hat, R_tilde).signed_by(x.m_star));
}

Mrpd lift_output(const LiftState& x, const Mat3d& R_tilde, double alpha, double delta) {
  const JumpFlags f = jump_conditions(x, R_tilde, alpha, delta);
  if (f.any()) throw std::domain_error("lift_output: state not in the flow set");
  return lift_output_raw(x, R_tilde);
}

JumpFlags jump_conditions(const LiftState& x, const Mat3d& R_tilde, double alpha, double delta) {
  JumpFlags f;
  f.in_dq = quat_dist(x.q_hat, R_tilde) >= alpha;
  f.in_dm = lift_output_raw(x, R_tilde).norm() >= 1.0 + delta;  // infinity counts
  return f;
}

LiftState jump(const LiftState& x, const Mat3d& R_tilde, double alpha, double delta) {
  const JumpFlags f = jump_conditions(x, R_tilde, alpha, delta);
  if (!f.any()) throw std::domain_error("jump: no jump condition active");
  LiftState next = x;
  if (f.in_dq) {
    next.q_hat = nearest_lift(x.q_hat, R_tilde);
  } else {
    next.m_star = -x.m_star;
  }
  return next;
}

SettleResult settle(const LiftState& x, const Mat3d& R_tilde, double alpha, double delta) {
  SettleResult res;
  res.state = x;
  for (int i = 0; i <= 4; ++i) {
    const JumpFlags f = jump_conditions(res.state, R_tilde, alpha, delta);
    if (!f.any()) {
      res.theta_tilde = lift_output_raw(res.state, R_tilde);
      return res;
    }
    if (i == 4) break;
    if (f.in_dq) {
      res.state.q_hat = nearest_lift(res.state.q_hat, R_tilde);
      ++res.resync_count;
    } else {
      res.state.m_star = -res.state.m_star;
      ++res.flip_count;
    }
    ++res.jump_count;
  }
  throw std::logic_error("settle: automaton failed to reach the flow set in 4 jumps");
}

}  // namespace se3sat
