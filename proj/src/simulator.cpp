#include "se3sat/simulator.hpp"

#include <cmath>
#include <sstream>

namespace se3sat {

void SimConfig::validate() const {
  if (!(dt > 0)) throw std::invalid_argument("sim: dt must be > 0");
  if (!(t_final >= 0)) throw std::invalid_argument("sim: t_final must be >= 0");
  if (std::abs(x0.q.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("sim: initial attitude quaternion is not unit");
  if (xf0.u_f.cwiseAbs().maxCoeff() > outer.M_p || xf0.u_s.cwiseAbs().maxCoeff() > outer.M_p)
    throw std::invalid_argument("sim: filter state must start inside the M_p box");
  outer.validate();
  inner.validate();
  veh.validate();
  traj.validate();
}

StackEval eval_stack(double t, const PlantState& x, const FilterState& xf,
                     const LiftState& lift, const SimConfig& cfg) {
  StackEval ev;
  ev.ref = eval_reference(t, cfg.traj);
  ev.p_tilde = x.p - ev.ref.p_d;
  ev.v_tilde = x.v - ev.ref.dp_d;
  ev.z = to_z(ev.p_tilde, ev.v_tilde, xf, cfg.outer);
  const Vec3d u_p_bar = primary_feedback(ev.z, cfg.outer);
  ev.outer = compose_control(xf, ev.ref, u_p_bar, cfg.outer, cfg.veh.g, cfg.veh.m);
  ev.att = attitude_reference(ev.outer.u, ev.outer.du, ev.outer.ddu, ev.ref);
  ev.R = rot_from_quat(x.q);
  attitude_error(ev.R, ev.att.R_d, x.omega, ev.att.omega_d, ev.R_tilde, ev.omega_tilde);
  ev.theta_tilde = lift_output_raw(lift, ev.R_tilde);
  const Vec3d tau_c = feedforward(ev.R_tilde, ev.att.omega_d, ev.att.domega_d,
                                  cfg.veh.inertia());
  ev.cmd = torque(ev.theta_tilde, ev.omega_tilde, tau_c, cfg.inner);
  return ev;
}

void plant_rhs(const PlantState& x, double T, const Vec3d& tau, const VehicleParams& veh,
               Vec3d& dp, Vec3d& dv, double& dq0, Vec3d& dq1, Vec3d& domega) {
  const Mat3d R = rot_from_quat(x.q.normalized());
  dp = x.v;
  dv = -veh.g * Vec3d::UnitZ() + R.col(2) * (T / veh.m);
  dq0 = -0.5 * x.q.q1.dot(x.omega);
  dq1 = 0.5 * (x.q.q0 * x.omega + x.q.q1.cross(x.omega));
  const Vec3d Jw = veh.J_diag.cwiseProduct(x.omega);
  domega = (Jw.cross(x.omega) + tau).cwiseQuotient(veh.J_diag);
}

Simulator::Simulator(const SimConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  mon_ = choose_monitor_gains(cfg_.inner, cfg_.veh.inertia());
  x_ = cfg_.x0;
  xf_ = cfg_.xf0;
  lift_ = cfg_.lift0;
}

StepRecord Simulator::boundary() {
  // Flow endpoint before jump servicing; the lift memory is frozen along
  // the flow, so this output is the continuous continuation of the
  // previous step.
  StackEval pre = eval_stack(t_, x_, xf_, lift_, cfg_);
  const Mat3d J = cfg_.veh.inertia();
  const bool pre_finite = !pre.theta_tilde.is_infinity();
  const double v2_pre_flow =
      pre_finite ? lyapunov_v2(pre.theta_tilde, pre.omega_tilde, J, cfg_.inner, mon_)
                 : std::numeric_limits<double>::infinity();

  // V2 flow monotonicity against the previous boundary value.
  if (cfg_.monitors && have_prev_ && pre_finite) {
    if (v2_pre_flow > prev_v2_ + 1e-6 * (1.0 + prev_v2_))
      throw SimulationError("monitor: V2 increased along flow", t_, j_);
  }

  // Jump servicing (at most 2 are ever needed).
  LiftState state = lift_;
  double v2_cur = v2_pre_flow;
  Mrpd theta_cur = pre.theta_tilde;
  for (int i = 0; i <= 4; ++i) {
    const JumpFlags f = jump_conditions(state, pre.R_tilde, cfg_.inner.alpha, cfg_.inner.delta);
    if (!f.any()) break;
    if (i == 4) throw SimulationError("lifting automaton failed to settle", t_, j_);
    JumpEvent ev;
    ev.t = t_;
    ev.j_before = j_;
    ev.pre_norm = theta_cur.norm();
    ev.v2_pre = v2_cur;
    if (f.in_dq) {
      state.q_hat = nearest_lift(state.q_hat, pre.R_tilde);
      ev.flip = false;
    } else {
      state.m_star = -state.m_star;
      ev.flip = true;
    }
    theta_cur = lift_output_raw(state, pre.R_tilde);
    v2_cur = theta_cur.is_infinity()
                 ? std::numeric_limits<double>::infinity()
                 : lyapunov_v2(theta_cur, pre.omega_tilde, J, cfg_.inner, mon_);
    ev.post_norm = theta_cur.norm();
    ev.v2_post = v2_cur;
    ++j_;
    if (cfg_.monitors && std::isfinite(ev.v2_pre) && std::isfinite(ev.v2_post)) {
      if (ev.flip) {
        if (!(ev.v2_post < ev.v2_pre))
          throw SimulationError("monitor: V2 did not decrease across chart flip", t_, j_);
        if (prev_flip_t_ >= 0.0 && t_ - prev_flip_t_ < 10.0 * cfg_.dt - 1e-12)
          throw SimulationError("monitor: chart flips closer than 10 steps", t_, j_);
      } else if (std::abs(ev.v2_post - ev.v2_pre) > 1e-12 * (1.0 + std::abs(ev.v2_pre))) {
        throw SimulationError("monitor: V2 changed across memory resync", t_, j_);
      }
    }
    if (ev.flip) prev_flip_t_ = t_;
    jump_events.push_back(ev);
  }
  lift_ = state;

  // Full evaluation at the settled state.
  const StackEval ev = eval_stack(t_, x_, xf_, lift_, cfg_);
  const double v1 = lyapunov_v1(ev.z, xf_, cfg_.outer);
  const double v2 = lyapunov_v2(ev.theta_tilde, ev.omega_tilde, J, cfg_.inner, mon_);

  if (cfg_.monitors) {
    // Lift correctness, disk confinement, memory coherence.
    if ((rot_from_mrp(ev.theta_tilde) - ev.R_tilde).norm() > 1e-8)
      throw SimulationError("monitor: lifted MRP does not reproduce the attitude error", t_, j_);
    if (!(ev.theta_tilde.norm() <= 1.0 + cfg_.inner.delta + 1e-12))
      throw SimulationError("monitor: MRP error left the hysteresis disk", t_, j_);
    if (!(quat_dist(lift_.q_hat, ev.R_tilde) < cfg_.inner.alpha))
      throw SimulationError("monitor: lift memory incoherent after settle", t_, j_);

    // V1 nonincrease along the nominal transformed flow from this state.
    TransformedState zn = ev.z;
    FilterState xfn = xf_;
    nominal_z_flow_step(zn, xfn, cfg_.outer, cfg_.dt);
    if (lyapunov_v1(zn, xfn, cfg_.outer) > v1 + 1e-6 * (1.0 + v1))
      throw SimulationError("monitor: V1 increased along the nominal transformed flow", t_, j_);
    if (have_prev_ && v1 > prev_v1_ + 1e-6 * (1.0 + prev_v1_)) ++v1_literal_increases;
  }

  if (cfg_.bounds) {
    const BoundsReport& b = *cfg_.bounds;
    if (ev.outer.T < b.T_min - 1e-9 || ev.outer.T > b.T_max + 1e-9)
      throw SimulationError("thrust left the audited interval", t_, j_);
    for (int i = 0; i < 3; ++i)
      if (std::abs(ev.cmd.tau(i)) > b.tau_required(i) + 1e-9)
        throw SimulationError("torque exceeded the audited ceiling", t_, j_);
    if (ev.att.omega_d.norm() > b.U_omega_d + 1e-9 ||
        ev.att.domega_d.norm() > b.U_domega_d + 1e-9)
      throw SimulationError("attitude-reference rate exceeded its bound", t_, j_);
  }

  prev_v1_ = v1;
  prev_v2_ = v2;
  have_prev_ = true;

  StepRecord rec;
  rec.t = t_;
  rec.j = j_;
  rec.p = x_.p;
  rec.p_d = ev.ref.p_d;
  rec.v = x_.v;
  rec.yaw = yaw_zyx(ev.R);
  rec.psi_d = ev.ref.psi_d;
  rec.z1 = ev.z.z1;
  rec.z2 = ev.z.z2;
  rec.u_p_bar = ev.outer.u_p_bar;
  rec.u_f = xf_.u_f;
  rec.u_s = xf_.u_s;
  rec.rho = ev.outer.rho;
  rec.T = ev.outer.T;
  rec.tau = ev.cmd.tau;
  rec.tau_c = ev.cmd.tau_c;
  rec.theta_tilde = ev.theta_tilde.vec();
  rec.omega_tilde = ev.omega_tilde;
  rec.omega_d = ev.att.omega_d;
  rec.domega_d = ev.att.domega_d;
  rec.s_theta_norm = ev.cmd.s_theta.norm();
  rec.s_omega_norm = ev.cmd.s_omega.norm();
  rec.V1 = v1;
  rec.V2 = v2;
  rec.pos_err = ev.p_tilde.norm();
  rec.mrp_err = ev.theta_tilde.norm();
  return rec;
}

void Simulator::advance() {
  using State = Eigen::Matrix<double, 19, 1>;
  const auto pack = [](const PlantState& x, const FilterState& f) {
    State s;
    s << x.p, x.v, x.q.q0, x.q.q1, x.omega, f.u_f, f.u_s;
    return s;
  };
  const auto unpack = [](const State& s, PlantState& x, FilterState& f) {
    x.p = s.segment<3>(0);
    x.v = s.segment<3>(3);
    x.q.q0 = s(6);
    x.q.q1 = s.segment<3>(7);
    x.omega = s.segment<3>(10);
    f.u_f = s.segment<3>(13);
    f.u_s = s.segment<3>(16);
  };
  // Lift memory is frozen along the flow; the control stack itself is
  // re-evaluated at every stage.
  const LiftState frozen = lift_;
  const auto rhs = [&](double tt, const State& s) {
    PlantState x;
    FilterState f;
    unpack(s, x, f);
    PlantState xn = x;
    xn.q = x.q.normalized();
    const StackEval ev = eval_stack(tt, xn, f, frozen, cfg_);
    Vec3d dp, dv, dq1, domega;
    double dq0;
    plant_rhs(x, ev.outer.T, ev.cmd.tau, cfg_.veh, dp, dv, dq0, dq1, domega);
    const FilterState df = filter_rhs(f, ev.outer.u_p_bar, cfg_.outer);
    State d;
    d << dp, dv, dq0, dq1, domega, df.u_f, df.u_s;
    return d;
  };
  const double dt = cfg_.dt;
  State s = pack(x_, xf_);
  const State k1 = rhs(t_, s);
  const State k2 = rhs(t_ + dt / 2, s + dt / 2 * k1);
  const State k3 = rhs(t_ + dt / 2, s + dt / 2 * k2);
  const State k4 = rhs(t_ + dt, s + dt * k3);
  s += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  unpack(s, x_, xf_);
  x_.q = x_.q.normalized();
  if (std::abs(x_.q.norm() - 1.0) > 1e-12)
    throw SimulationError("quaternion renormalization failed", t_, j_);
  ++step_index_;
  t_ = step_index_ * dt;
}

StepRecord Simulator::step() {
  StepRecord rec = boundary();
  advance();
  return rec;
}

Log run(const SimConfig& cfg) {
  Simulator sim(cfg);
  Log log;
  const int n = static_cast<int>(std::llround(cfg.t_final / cfg.dt));
  log.steps.reserve(n + 1);
  for (int i = 0; i < n; ++i) log.steps.push_back(sim.step());
  log.steps.push_back(sim.boundary());
  log.jumps = sim.jump_events;

  Summary& sum = log.summary;
  sum.steps = static_cast<int>(log.steps.size());
  const std::size_t tail_begin = log.steps.size() - log.steps.size() / 5;
  sum.T_min_seen = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < log.steps.size(); ++i) {
    const StepRecord& r = log.steps[i];
    sum.T_min_seen = std::min(sum.T_min_seen, r.T);
    sum.T_max_seen = std::max(sum.T_max_seen, r.T);
    sum.tau_abs_max = sum.tau_abs_max.cwiseMax(r.tau.cwiseAbs());
    sum.max_omega_d = std::max(sum.max_omega_d, r.omega_d.norm());
    sum.max_domega_d = std::max(sum.max_domega_d, r.domega_d.norm());
    sum.max_theta_norm = std::max(sum.max_theta_norm, r.mrp_err);
    if (i >= tail_begin) {
      sum.steady_pos_err = std::max(sum.steady_pos_err, r.pos_err);
      sum.steady_mrp_err = std::max(sum.steady_mrp_err, r.mrp_err);
      sum.steady_yaw_err =
          std::max(sum.steady_yaw_err, std::abs(wrap_angle(r.yaw - r.psi_d)));
    }
  }
  sum.jump_count = static_cast<int>(log.jumps.size());
  for (const JumpEvent& e : log.jumps) (e.flip ? sum.flip_count : sum.resync_count)++;
  sum.v1_literal_increases = sim.v1_literal_increases;
  return log;
}

std::string format_summary(const Summary& s) {
  std::ostringstream os;
  char b[160];
  auto kv = [&](const char* k, double v) {
    std::snprintf(b, sizeof(b), "%s = %.17g\n", k, v);
    os << b;
  };
  os << "steps = " << s.steps << "\n";
  kv("steady_pos_err", s.steady_pos_err);
  kv("steady_mrp_err", s.steady_mrp_err);
  kv("steady_yaw_err", s.steady_yaw_err);
  kv("T_min_seen", s.T_min_seen);
  kv("T_max_seen", s.T_max_seen);
  std::snprintf(b, sizeof(b), "tau_abs_max = %.17g %.17g %.17g\n", s.tau_abs_max.x(),
                s.tau_abs_max.y(), s.tau_abs_max.z());
  os << b;
  kv("max_omega_d", s.max_omega_d);
  kv("max_domega_d", s.max_domega_d);
  kv("max_theta_norm", s.max_theta_norm);
  os << "jump_count = " << s.jump_count << "\n";
  os << "resync_count = " << s.resync_count << "\n";
  os << "flip_count = " << s.flip_count << "\n";
  os << "v1_literal_increases = " << s.v1_literal_increases << "\n";
  return os.str();
}

}  // namespace se3sat
