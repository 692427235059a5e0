#pragma once

#include "se3sat/attitude.hpp"

namespace se3sat {

struct InnerGains {
  double k_theta = 100.0;
  double k_omega = 0.1;
  double M_theta = 0.206;
  double M_omega = 0.045;
  double delta = 0.02;   // hysteresis margin of the lifting automaton
  double alpha = 0.25;   // memory-resync distance of the lifting automaton

  void validate() const;

  /// Componentwise torque ceiling of the saturated feedback terms:
  /// (1 + (1+delta)^2) M_theta / 4 + M_omega.
  double iota() const;
};

struct TorqueCommand {
  Vec3d tau = Vec3d::Zero();
  Vec3d tau_c = Vec3d::Zero();
  Vec3d s_theta = Vec3d::Zero();
  Vec3d s_omega = Vec3d::Zero();
};

/// Radial vector saturation M y / sqrt(M^2 + |y|^2): direction preserved,
/// norm strictly below M.
Vec3d radial_sat(const Vec3d& y, double M);

/// R_tilde = R_d^T R and omega_tilde = omega - R_tilde^T omega_d.
void attitude_error(const Mat3d& R, const Mat3d& R_d, const Vec3d& omega, const Vec3d& omega_d,
                    Mat3d& R_tilde, Vec3d& omega_tilde);

/// Feedforward cancellation [J R~^T w_d]x R~^T w_d - J R~^T dw_d.
Vec3d feedforward(const Mat3d& R_tilde, const Vec3d& omega_d, const Vec3d& domega_d,
                  const Mat3d& J);

/// tau = -(1+|theta|^2)/4 s_theta(k_theta theta) - s_omega(k_omega omega~) - tau_c.
/// The radial saturations are gain-free and applied to the pre-scaled
/// arguments; only this reading reproduces the iota ceiling. Throws if
/// the MRP error left the (1+delta)-disk, which the lifting automaton
/// precludes.
TorqueCommand torque(const Mrpd& theta_tilde, const Vec3d& omega_tilde, const Vec3d& tau_c,
                     const InnerGains& g);

/// Lyapunov-monitor weights (a, b): b = 1 and a at 1.01 times the largest
/// of the four admissibility lower bounds. Guards against delta -> 0
/// blowup of the hysteresis-dependent bound.
struct MonitorGains {
  double a = 1.0;
  double b = 1.0;
};
MonitorGains choose_monitor_gains(const InnerGains& g, const Mat3d& J);

/// Attitude Lyapunov monitor; the radial-saturation integral is in closed
/// form (2a/k_theta) M (sqrt(M^2 + |k_theta theta|^2) - M).
double lyapunov_v2(const Mrpd& theta_tilde, const Vec3d& omega_tilde, const Mat3d& J,
                   const InnerGains& g, const MonitorGains& mon);

}  // namespace se3sat
