#include "se3sat/feasibility.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace se3sat {

void EnvelopeConstants::validate() const {
  if (K_a12 < 0 || K_a3 < 0 || K_j < 0 || K_s < 0 || K_dnu < 0 || K_ddnu < 0)
    throw std::invalid_argument("envelope: constants must be nonnegative");
}

void VehicleParams::validate() const {
  if (!(m > 0)) throw std::invalid_argument("vehicle: mass must be > 0");
  if (!(g > 0)) throw std::invalid_argument("vehicle: gravity must be > 0");
  if (!(J_diag.minCoeff() > 0)) throw std::invalid_argument("vehicle: inertia must be > 0");
  if (!(T_max_hw > 0) || !(tau_max_hw.minCoeff() > 0))
    throw std::invalid_argument("vehicle: hardware limits must be > 0");
}

double filter_overshoot(double k_f, double k_s) {
  if (!(k_f > 0 && k_s > 0)) throw std::invalid_argument("filter_overshoot: gains must be > 0");
  if (k_f == k_s) return std::exp(-1.0);
  return std::pow(k_f / k_s, k_f / (k_s - k_f));
}

double filter_mismatch_impulse(double t, double k_f, double k_s) {
  if (k_f == k_s) return k_f * (1.0 - k_f * t) * std::exp(-k_f * t);
  return k_s / (k_s - k_f) * (k_s * std::exp(-k_s * t) - k_f * std::exp(-k_f * t));
}

double filter_mismatch_zero_crossing(double k_f, double k_s) {
  if (k_f == k_s) return 1.0 / k_f;
  return std::log(k_s / k_f) / (k_s - k_f);
}

EnvelopeConstants envelope_from_trajectory(const TrajectoryConfig& cfg, int samples) {
  cfg.validate();
  EnvelopeConstants env;
  const double period = 2.0 * EIGEN_PI / cfg.frequency;
  for (int i = 0; i < samples; ++i) {
    const double t = period * i / samples;
    const ReferenceSample r = eval_reference(t, cfg);
    env.K_a12 = std::max(env.K_a12, r.ddp_d.head<2>().norm());
    env.K_a3 = std::max(env.K_a3, std::abs(r.ddp_d.z()));
    env.K_j = std::max(env.K_j, r.d3p_d.norm());
    env.K_s = std::max(env.K_s, r.d4p_d.norm());
    env.K_dnu = std::max(env.K_dnu, r.dnu_d.norm());
    env.K_ddnu = std::max(env.K_ddnu, r.ddnu_d.norm());
  }
  env.K_a12 += 1e-9;
  env.K_a3 += 1e-9;
  env.K_j += 1e-9;
  env.K_s += 1e-9;
  env.K_dnu += 1e-9;
  env.K_ddnu += 1e-9;
  return env;
}

void thrust_bounds(const VehicleParams& veh, const EnvelopeConstants& env, double M_p,
                   double& T_min, double& T_max) {
  if (!(M_p < veh.g - env.K_a3))
    throw std::domain_error("thrust_bounds: M_p >= g - K_a3, saturation level infeasible");
  T_min = veh.m * (veh.g - M_p - env.K_a3);
  T_max = veh.m * (std::sqrt(3.0) * M_p + std::hypot(env.K_a12, env.K_a3 + veh.g));
}

namespace {

struct RateChain {
  double U_drho, U_ddrho, U_dvarpi, U_ddvarpi, U_dupsilon, U_ddupsilon;
  double U_omega_d, U_domega_d;
};

// U_du/U_ddu -> rho rates -> varpi rates -> upsilon rates -> omega_d rates.
RateChain rate_chain(double U_du, double U_ddu, double accel_floor, double L,
                     const EnvelopeConstants& env) {
  RateChain c;
  c.U_drho = U_du / accel_floor;
  c.U_ddrho = U_ddu / accel_floor + 3.0 * c.U_drho * c.U_drho;
  c.U_dvarpi = c.U_drho + env.K_dnu;
  c.U_ddvarpi = c.U_ddrho + 2.0 * c.U_drho * env.K_dnu + env.K_ddnu;
  c.U_dupsilon = c.U_dvarpi / L;
  c.U_ddupsilon = c.U_ddvarpi / L + 3.0 * c.U_dupsilon * c.U_dupsilon;
  c.U_omega_d = std::hypot(c.U_drho, c.U_dupsilon);
  c.U_domega_d = c.U_drho * c.U_dupsilon + std::hypot(c.U_ddrho, c.U_ddupsilon);
  return c;
}

}  // namespace

void lemma1_bounds(const EnvelopeConstants& env, const OuterGains& gains,
                   const VehicleParams& veh, bool filter_init_zero, BoundsReport& rep) {
  if (!(gains.M_p < veh.g - env.K_a3))
    throw std::domain_error("lemma1_bounds: M_p >= g - K_a3, saturation level infeasible");

  rep.U_l = filter_init_zero ? filter_overshoot(gains.k_f, gains.k_s) : 1.0;
  const double r3 = std::sqrt(3.0);
  const double accel_floor = veh.g - gains.M_p - env.K_a3;  // T_min / m

  // mismatch bound 2 sqrt(3) U_l M_p (L1 norm of the impulse response,
  // worst bounded input); lag bound 2 sqrt(3) M_p
  rep.U_du = 2.0 * r3 * gains.k_f * rep.U_l * gains.M_p + env.K_j;
  rep.U_ddu = 2.0 * r3 * gains.k_f * gains.M_p * (gains.k_f * rep.U_l + gains.k_s) + env.K_s;

  rep.L_varpi = accel_floor /
                std::sqrt(accel_floor * accel_floor + 2.0 * gains.M_p * gains.M_p +
                          env.K_a12 * env.K_a12 + 2.0 * std::sqrt(2.0) * gains.M_p * env.K_a12);

  const RateChain worst = rate_chain(rep.U_du, rep.U_ddu, accel_floor, rep.L_varpi, env);
  rep.U_drho = worst.U_drho;
  rep.U_ddrho = worst.U_ddrho;
  rep.U_dvarpi = worst.U_dvarpi;
  rep.U_ddvarpi = worst.U_ddvarpi;
  rep.U_dupsilon = worst.U_dupsilon;
  rep.U_ddupsilon = worst.U_ddupsilon;
  rep.U_omega_d = worst.U_omega_d;
  rep.U_domega_d = worst.U_domega_d;

  // operating chain: per-axis step-response peak U_l M_p for the
  // mismatch, ideal heading-projection floor L_star
  rep.L_star = (veh.g - env.K_a3) / std::hypot(env.K_a12, veh.g - env.K_a3);
  const double U_du_op = gains.k_f * rep.U_l * gains.M_p + env.K_j;
  const double U_ddu_op =
      gains.k_f * (gains.k_f * rep.U_l * gains.M_p + gains.k_s * 2.0 * r3 * gains.M_p) + env.K_s;
  const RateChain op = rate_chain(U_du_op, U_ddu_op, accel_floor, rep.L_star, env);
  rep.U_omega_d_op = op.U_omega_d;
  rep.U_domega_d_op = op.U_domega_d;
}

Vec3d torque_requirement(const VehicleParams& veh, double U_omega_d, double U_domega_d,
                         double iota) {
  Vec3d req;
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    req(i) = veh.J_diag(i) * U_domega_d +
             0.5 * std::abs(veh.J_diag(j) - veh.J_diag(k)) * U_omega_d * U_omega_d + iota;
  }
  return req;
}

Assumption1Report check_assumption1(const EnvelopeConstants& env, const VehicleParams& veh) {
  Assumption1Report rep;
  rep.g_exceeds_Ka3 = veh.g > env.K_a3;
  rep.thrust_margin_ok =
      veh.T_max_hw > veh.m * (veh.g + std::hypot(env.K_a12, env.K_a3));
  if (!rep.g_exceeds_Ka3) return rep;

  const double drop = veh.g - env.K_a3;
  rep.L_star = drop / std::hypot(env.K_a12, drop);
  const double U_drho = env.K_j / drop;
  const double U_ddrho = env.K_s / drop + 3.0 * U_drho * U_drho;
  const double U_dups = (U_drho + env.K_dnu) / rep.L_star;
  const double U_ddups =
      (U_ddrho + env.K_ddnu + 2.0 * U_drho * env.K_dnu) / rep.L_star + 3.0 * U_dups * U_dups;
  rep.U_omega_d = std::hypot(U_drho, U_dups);
  rep.U_domega_d = U_drho * U_dups + std::hypot(U_ddrho, U_ddups);
  rep.torque_required = torque_requirement(veh, rep.U_omega_d, rep.U_domega_d, 0.0);
  rep.torque_margin_ok = (rep.torque_required.array() < veh.tau_max_hw.array()).all();
  return rep;
}

BoundsReport audit(const VehicleParams& veh, const EnvelopeConstants& env,
                   const OuterGains& outer, const InnerGains& inner, bool filter_init_zero) {
  veh.validate();
  env.validate();
  outer.validate();
  inner.validate();

  BoundsReport rep;
  thrust_bounds(veh, env, outer.M_p, rep.T_min, rep.T_max);
  lemma1_bounds(env, outer, veh, filter_init_zero, rep);
  rep.iota = inner.iota();
  rep.tau_required_worst = torque_requirement(veh, rep.U_omega_d, rep.U_domega_d, rep.iota);
  rep.tau_required = torque_requirement(veh, rep.U_omega_d_op, rep.U_domega_d_op, rep.iota);

  const Assumption1Report a1 = check_assumption1(env, veh);
  rep.ideal_U_omega_d = a1.U_omega_d;
  rep.ideal_U_domega_d = a1.U_domega_d;
  rep.ideal_tau_required = a1.torque_required;
  rep.assumption1_ok = a1.ok();
  rep.theorem2_ok = (rep.tau_required.array() < veh.tau_max_hw.array()).all() &&
                    rep.T_max <= veh.T_max_hw;
  return rep;
}

namespace {
void kv(std::ostringstream& os, const char* key, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  os << key << " = " << buf << "\n";
}
void kv3(std::ostringstream& os, const char* key, const Vec3d& v) {
  char buf[200];
  std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g", v.x(), v.y(), v.z());
  os << key << " = " << buf << "\n";
}
}  // namespace

std::string format_report(const BoundsReport& rep, const Assumption1Report& a1) {
  std::ostringstream os;
  char line[256];
  os << "feasibility audit\n=================\n";
  auto row = [&](const char* name, double v, const char* unit) {
    std::snprintf(line, sizeof(line), "  %-22s %14.6f  %s\n", name, v, unit);
    os << line;
  };
  auto row3 = [&](const char* name, const Vec3d& v, const char* unit) {
    std::snprintf(line, sizeof(line), "  %-22s %14.6f %14.6f %14.6f  %s\n", name, v.x(), v.y(),
                  v.z(), unit);
    os << line;
  };
  os << "thrust interval\n";
  row("T_min", rep.T_min, "N");
  row("T_max", rep.T_max, "N");
  os << "filter bounds\n";
  row("U_l", rep.U_l, "-");
  row("U_du", rep.U_du, "m/s^3");
  row("U_ddu", rep.U_ddu, "m/s^4");
  os << "attitude-reference rates (worst-case chain)\n";
  row("U_drho", rep.U_drho, "1/s");
  row("U_ddrho", rep.U_ddrho, "1/s^2");
  row("L_varpi", rep.L_varpi, "-");
  row("U_dupsilon", rep.U_dupsilon, "1/s");
  row("U_ddupsilon", rep.U_ddupsilon, "1/s^2");
  row("U_omega_d", rep.U_omega_d, "rad/s");
  row("U_domega_d", rep.U_domega_d, "rad/s^2");
  os << "attitude-reference rates (operating chain)\n";
  row("U_omega_d_op", rep.U_omega_d_op, "rad/s");
  row("U_domega_d_op", rep.U_domega_d_op, "rad/s^2");
  os << "torque\n";
  row("iota", rep.iota, "N m");
  row3("tau_required", rep.tau_required, "N m");
  row3("tau_required_worst", rep.tau_required_worst, "N m");
  os << "trajectory feasibility (ideal chain)\n";
  row("L_star", a1.L_star, "-");
  row("U*_omega_d", a1.U_omega_d, "rad/s");
  row("U*_domega_d", a1.U_domega_d, "rad/s^2");
  row3("eq-torque required", a1.torque_required, "N m");
  os << "verdict\n";
  os << "  assumption1_ok         " << (rep.assumption1_ok ? "yes" : "no") << "\n";
  os << "  theorem2_ok            " << (rep.theorem2_ok ? "yes" : "no") << "\n";
  os << "note: filters are audited on the M_p-ball initialization (the\n"
        "tight stated set); the weaker unit-ball statement admits the\n"
        "same bounds with U_l = 1.\n";
  return os.str();
}

std::string format_report_kv(const BoundsReport& rep, const Assumption1Report& a1) {
  std::ostringstream os;
  kv(os, "T_min", rep.T_min);
  kv(os, "T_max", rep.T_max);
  kv(os, "U_l", rep.U_l);
  kv(os, "U_du", rep.U_du);
  kv(os, "U_ddu", rep.U_ddu);
  kv(os, "U_drho", rep.U_drho);
  kv(os, "U_ddrho", rep.U_ddrho);
  kv(os, "L_varpi", rep.L_varpi);
  kv(os, "U_dvarpi", rep.U_dvarpi);
  kv(os, "U_ddvarpi", rep.U_ddvarpi);
  kv(os, "U_dupsilon", rep.U_dupsilon);
  kv(os, "U_ddupsilon", rep.U_ddupsilon);
  kv(os, "U_omega_d", rep.U_omega_d);
  kv(os, "U_domega_d", rep.U_domega_d);
  kv(os, "U_omega_d_op", rep.U_omega_d_op);
  kv(os, "U_domega_d_op", rep.U_domega_d_op);
  kv(os, "iota", rep.iota);
  kv3(os, "tau_required", rep.tau_required);
  kv3(os, "tau_required_worst", rep.tau_required_worst);
  kv(os, "L_star", a1.L_star);
  kv(os, "ideal_U_omega_d", a1.U_omega_d);
  kv(os, "ideal_U_domega_d", a1.U_domega_d);
  kv3(os, "ideal_tau_required", a1.torque_required);
  os << "assumption1_ok = " << (rep.assumption1_ok ? 1 : 0) << "\n";
  os << "theorem2_ok = " << (rep.theorem2_ok ? 1 : 0) << "\n";
  return os.str();
}

}  // namespace se3sat
