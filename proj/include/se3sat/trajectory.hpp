#pragma once

#include <functional>
#include <string>

#include "se3sat/attitude.hpp"

namespace se3sat {

using Vec2d = Eigen::Vector2d;

/// One sample of the reference signal: position through the 4th
/// derivative plus the heading direction on the unit circle with two
/// derivatives.
struct ReferenceSample {
  Vec3d p_d = Vec3d::Zero();
  Vec3d dp_d = Vec3d::Zero();
  Vec3d ddp_d = Vec3d::Zero();
  Vec3d d3p_d = Vec3d::Zero();
  Vec3d d4p_d = Vec3d::Zero();
  Vec2d nu_d = Vec2d::UnitX();
  Vec2d dnu_d = Vec2d::Zero();
  Vec2d ddnu_d = Vec2d::Zero();
  double psi_d = 0.0;  // heading angle, kept for logging
};

/// Built-in presets: a circular sweep with synchronized vertical and yaw
/// oscillation (the default scenario), or a static hover. A user closure
/// overrides the preset entirely.
struct TrajectoryConfig {
  std::string preset = "circle";                      // "circle" | "hover"
  double frequency = 2.0 * EIGEN_PI / 15.0;           // rad/s
  Vec3d offset{-3.0, 1.0, 4.5};                       // m
  double yaw_amplitude = EIGEN_PI;                    // rad
  std::function<ReferenceSample(double)> custom;      // optional C^4 bundle

  void validate() const;
};

ReferenceSample eval_reference(double t, const TrajectoryConfig& cfg);

/// Chain rule on nu = (cos psi, sin psi).
void heading_derivatives(double psi, double dpsi, double ddpsi,
                         Vec2d& nu, Vec2d& dnu, Vec2d& ddnu);

/// Desired rotation R_d = [upsilon, rho x upsilon, rho] with angular
/// velocity/acceleration extracted from its kinematics.
struct AttitudeReference {
  Mat3d R_d = Mat3d::Identity();
  Vec3d omega_d = Vec3d::Zero();
  Vec3d domega_d = Vec3d::Zero();
  Vec3d rho = Vec3d::UnitZ();
  Vec3d drho = Vec3d::Zero();
  Vec3d ddrho = Vec3d::Zero();
  Vec3d varpi = Vec3d::UnitX();
  Vec3d upsilon = Vec3d::UnitX();
  Vec3d dupsilon = Vec3d::Zero();
  Vec3d ddupsilon = Vec3d::Zero();
};

/// Unit thrust direction and its two derivatives from the control vector
/// and its derivatives. Throws if the control vector degenerates (cannot
/// happen under a feasible configuration).
void thrust_direction(const Vec3d& u, const Vec3d& du, const Vec3d& ddu,
                      Vec3d& rho, Vec3d& drho, Vec3d& ddrho);

/// Projected heading axis: varpi = sgn(e3.rho) [ (e3.rho) nu ; -rho.nu* ],
/// upsilon = varpi/|varpi| and its two derivatives. The sign factor is
/// constant along feasible flows, so it is differentiated as a constant;
/// |e3.rho| below 1e-9 signals a configuration bug and throws.
void heading_projection(const Vec3d& rho, const Vec3d& drho, const Vec3d& ddrho,
                        const Vec2d& nu, const Vec2d& dnu, const Vec2d& ddnu,
                        Vec3d& varpi, Vec3d& upsilon, Vec3d& dupsilon, Vec3d& ddupsilon);

Mat3d desired_rotation(const Vec3d& rho, const Vec3d& upsilon);

Vec3d desired_omega(const AttitudeReference& att);

Vec3d desired_omega_dot(const AttitudeReference& att, const Vec3d& omega_d);

/// Full attitude-reference chain from the control vector derivatives and
/// the heading sample.
AttitudeReference attitude_reference(const Vec3d& u, const Vec3d& du, const Vec3d& ddu,
                                     const ReferenceSample& ref);

}  // namespace se3sat
