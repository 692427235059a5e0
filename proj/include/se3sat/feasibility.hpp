#pragma once

#include "se3sat/inner_loop.hpp"
#include "se3sat/outer_loop.hpp"
#include "se3sat/trajectory.hpp"

namespace se3sat {

/// Reference-envelope constants: lateral/vertical acceleration, jerk,
/// snap, and heading-rate magnitudes covering the trajectory.
struct EnvelopeConstants {
  double K_a12 = 0.0;
  double K_a3 = 0.0;
  double K_j = 0.0;
  double K_s = 0.0;
  double K_dnu = 0.0;
  double K_ddnu = 0.0;

  void validate() const;
};

struct VehicleParams {
  double m = 0.46;       // kg
  double g = 9.81;       // m/s^2
  Vec3d J_diag{2.24e-3, 2.9e-3, 5.3e-3};  // kg m^2, principal axes
  double T_max_hw = 7.0;                  // N
  Vec3d tau_max_hw{0.5, 0.5, 0.5};        // N m, per axis

  Mat3d inertia() const { return J_diag.asDiagonal(); }
  void validate() const;
};

/// Everything the audit derives. Two torque chains are carried side by
/// side: `worst` uses the adversarial-input filter bounds (correct for
/// runtime dominance of the reference rates), while `tau_required` uses
/// the step-response filter peak and the ideal heading-projection floor,
/// which is the variant the published operating ceilings correspond to.
struct BoundsReport {
  // filter overshoot factor
  double U_l = 0.0;

  // worst-case chain (adversarial-input L1 bound 2 sqrt(3) U_l M_p)
  double U_du = 0.0;
  double U_ddu = 0.0;
  double U_drho = 0.0;
  double U_ddrho = 0.0;
  double U_dvarpi = 0.0;
  double U_ddvarpi = 0.0;
  double L_varpi = 0.0;
  double U_dupsilon = 0.0;
  double U_ddupsilon = 0.0;
  double U_omega_d = 0.0;
  double U_domega_d = 0.0;
  Vec3d tau_required_worst = Vec3d::Zero();

  // operating chain (step-response peak U_l M_p, floor L_star)
  double U_omega_d_op = 0.0;
  double U_domega_d_op = 0.0;
  Vec3d tau_required = Vec3d::Zero();

  // thrust interval
  double T_min = 0.0;
  double T_max = 0.0;

  // saturated-feedback torque ceiling
  double iota = 0.0;

  // ideal (filter-free) chain backing the trajectory-feasibility check
  double L_star = 0.0;
  double ideal_U_omega_d = 0.0;
  double ideal_U_domega_d = 0.0;
  Vec3d ideal_tau_required = Vec3d::Zero();  // no iota term

  bool assumption1_ok = false;
  bool theorem2_ok = false;

  bool feasible() const { return assumption1_ok && theorem2_ok; }
};

/// Overshoot factor of the filter-mismatch step response,
/// (k_f/k_s)^(k_f/(k_s-k_f)) with the limit value 1/e at k_f = k_s.
double filter_overshoot(double k_f, double k_s);

/// Impulse response of the u_f - u_s channel.
double filter_mismatch_impulse(double t, double k_f, double k_s);

/// The single zero crossing of that impulse response.
double filter_mismatch_zero_crossing(double k_f, double k_s);

/// Envelope constants of a trajectory preset by dense sampling of the
/// analytic derivative norms over one period (rounded up by 1e-9).
EnvelopeConstants envelope_from_trajectory(const TrajectoryConfig& cfg,
                                           int samples = 100000);

/// Worst-case bound chain on the attitude-reference rates. Throws if
/// M_p >= g - K_a3 (saturation level infeasible).
void lemma1_bounds(const EnvelopeConstants& env, const OuterGains& gains,
                   const VehicleParams& veh, bool filter_init_zero, BoundsReport& rep);

/// T_min = m (g - M_p - K_a3), T_max = m (sqrt(3) M_p + sqrt(K_a12^2 + (K_a3+g)^2)).
void thrust_bounds(const VehicleParams& veh, const EnvelopeConstants& env, double M_p,
                   double& T_min, double& T_max);

/// Per-axis requirement J_ii Udw + |J_jj - J_kk| Uw^2 / 2 + iota.
Vec3d torque_requirement(const VehicleParams& veh, double U_omega_d, double U_domega_d,
                         double iota);

struct Assumption1Report {
  bool g_exceeds_Ka3 = false;
  bool thrust_margin_ok = false;
  Vec3d torque_required = Vec3d::Zero();
  bool torque_margin_ok = false;
  double U_omega_d = 0.0;
  double U_domega_d = 0.0;
  double L_star = 0.0;
  bool ok() const { return g_exceeds_Ka3 && thrust_margin_ok && torque_margin_ok; }
};

/// Trajectory-feasibility conditions on the ideal (filter-free) constant
/// chain; returns structured pass/fail rather than throwing.
Assumption1Report check_assumption1(const EnvelopeConstants& env, const VehicleParams& veh);

/// Full audit. `filter_init_zero` selects the tight U_l overshoot factor
/// (filters start at rest) versus the arbitrary-initialization factor 1.
BoundsReport audit(const VehicleParams& veh, const EnvelopeConstants& env,
                   const OuterGains& outer, const InnerGains& inner,
                   bool filter_init_zero = true);

/// Aligned human-readable rendering and flat key=value rendering.
std::string format_report(const BoundsReport& rep, const Assumption1Report& a1);
std::string format_report_kv(const BoundsReport& rep, const Assumption1Report& a1);

}  // namespace se3sat
