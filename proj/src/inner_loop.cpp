#include "se3sat/inner_loop.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace se3sat {

void InnerGains::validate() const {
  if (!(k_theta > 0 && k_omega > 0 && M_theta > 0 && M_omega > 0))
    throw std::invalid_argument("inner gains: gains and saturation levels must be > 0");
  if (!(delta > 0)) throw std::invalid_argument("inner gains: delta must be > 0");
  if (!(alpha > 0 && alpha < 1)) throw std::invalid_argument("inner gains: alpha must be in (0,1)");
}

double InnerGains::iota() const {
  const double ad = 1.0 + delta;
  return (1.0 + ad * ad) * M_theta / 4.0 + M_omega;
}

Vec3d radial_sat(const Vec3d& y, double M) {
  return M * y / std::sqrt(M * M + y.squaredNorm());
}

void attitude_error(const Mat3d& R, const Mat3d& R_d, const Vec3d& omega, const Vec3d& omega_d,
                    Mat3d& R_tilde, Vec3d& omega_tilde) {
  R_tilde = R_d.transpose() * R;
  omega_tilde = omega - R_tilde.transpose() * omega_d;
}

Vec3d feedforward(const Mat3d& R_tilde, const Vec3d& omega_d, const Vec3d& domega_d,
                  const Mat3d& J) {
  const Vec3d w = R_tilde.transpose() * omega_d;
  return (J * w).cross(w) - J * (R_tilde.transpose() * domega_d);
}

TorqueCommand torque(const Mrpd& theta_tilde, const Vec3d& omega_tilde, const Vec3d& tau_c,
                     const InnerGains& g) {
  const double n = theta_tilde.norm();
  if (!(n <= 1.0 + g.delta + 1e-12))
    throw std::domain_error("torque: MRP error outside the (1+delta)-disk");
  const Vec3d& th = theta_tilde.vec();
  TorqueCommand cmd;
  cmd.tau_c = tau_c;
  cmd.s_theta = radial_sat(g.k_theta * th, g.M_theta);
  cmd.s_omega = radial_sat(g.k_omega * omega_tilde, g.M_omega);
  cmd.tau = -(1.0 + th.squaredNorm()) / 4.0 * cmd.s_theta - cmd.s_omega - tau_c;
  return cmd;
}

MonitorGains choose_monitor_gains(const InnerGains& g, const Mat3d& J) {
  if (g.delta < 1e-6)
    throw std::domain_error("choose_monitor_gains: delta too small, weight diverges");
  const double lmin = J.diagonal().minCoeff();
  const double lmax = J.diagonal().maxCoeff();
  const double alpha_t = 1.0 + g.delta;
  const double beta_t = (1.0 + alpha_t * alpha_t) / 4.0;
  const double gamma_t =
      g.k_theta * g.M_theta / std::sqrt(g.M_theta * g.M_theta +
                                        g.k_theta * alpha_t * g.k_theta * alpha_t);
  const double m_omega_star = g.M_omega * lmin;

  MonitorGains mon;
  mon.b = 1.0;
  const double lb1 = 2.0 * g.k_omega * g.k_omega / gamma_t * mon.b;
  const double lb2 = beta_t * lmax * mon.b;
  const double lb3 = 0.5 * mon.b * g.k_omega * lmax / std::sqrt(gamma_t * lmin);
  const double lb4 = alpha_t / g.delta * m_omega_star / (2.0 * g.k_theta) * mon.b +
                     1.0 / (2.0 * g.k_theta);
  mon.a = 1.01 * std::max({lb1, lb2, lb3, lb4});
  return mon;
}

double lyapunov_v2(const Mrpd& theta_tilde, const Vec3d& omega_tilde, const Mat3d& J,
                   const InnerGains& g, const MonitorGains& mon) {
  const Vec3d& th = theta_tilde.vec();
  const double m_omega_star = g.M_omega * J.diagonal().minCoeff();
  const double y2 = g.k_theta * g.k_theta * th.squaredNorm();
  const double integral =
      g.M_theta * (std::sqrt(g.M_theta * g.M_theta + y2) - g.M_theta);
  return mon.a * omega_tilde.dot(J * omega_tilde) + 2.0 * mon.a / g.k_theta * integral +
         mon.b * th.dot(radial_sat(g.k_omega * (J * omega_tilde), m_omega_star));
}

}  // namespace se3sat
