#include "se3sat/trajectory.hpp"

#include <cmath>
#include <stdexcept>

namespace se3sat {

void TrajectoryConfig::validate() const {
  if (!(frequency > 0.0)) throw std::invalid_argument("trajectory: frequency must be > 0");
  if (preset != "circle" && preset != "hover" && !custom)
    throw std::invalid_argument("trajectory: unknown preset '" + preset + "'");
}

void heading_derivatives(double psi, double dpsi, double ddpsi,
                         Vec2d& nu, Vec2d& dnu, Vec2d& ddnu) {
  const double c = std::cos(psi), s = std::sin(psi);
  nu = Vec2d(c, s);
  const Vec2d tangent(-s, c);
  dnu = dpsi * tangent;
  ddnu = ddpsi * tangent - dpsi * dpsi * nu;
}

ReferenceSample eval_reference(double t, const TrajectoryConfig& cfg) {
  if (cfg.custom) return cfg.custom(t);

  ReferenceSample r;
  if (cfg.preset == "hover") {
    r.p_d = cfg.offset;
    heading_derivatives(0.0, 0.0, 0.0, r.nu_d, r.dnu_d, r.ddnu_d);
    return r;
  }

  const double f = cfg.frequency;
  const double c = std::cos(f * t), s = std::sin(f * t);
  r.p_d = Vec3d(c, s, c) + cfg.offset;
  r.dp_d = f * Vec3d(-s, c, -s);
  r.ddp_d = f * f * Vec3d(-c, -s, -c);
  r.d3p_d = f * f * f * Vec3d(s, -c, s);
  r.d4p_d = f * f * f * f * Vec3d(c, s, c);

  const double a = cfg.yaw_amplitude;
  r.psi_d = a * s;
  const double dpsi = a * f * c;
  const double ddpsi = -a * f * f * s;
  heading_derivatives(r.psi_d, dpsi, ddpsi, r.nu_d, r.dnu_d, r.ddnu_d);
  return r;
}

void thrust_direction(const Vec3d& u, const Vec3d& du, const Vec3d& ddu,
                      Vec3d& rho, Vec3d& drho, Vec3d& ddrho) {
  const double n = u.norm();
  if (n < 1e-9) throw std::domain_error("thrust_direction: degenerate control vector");
  rho = u / n;
  const Mat3d proj = Mat3d::Identity() - rho * rho.transpose();
  drho = proj * du / n;
  ddrho = proj * ddu / n - 2.0 * rho.dot(du) * drho / n - drho.squaredNorm() * rho;
}

void heading_projection(const Vec3d& rho, const Vec3d& drho, const Vec3d& ddrho,
                        const Vec2d& nu, const Vec2d& dnu, const Vec2d& ddnu,
                        Vec3d& varpi, Vec3d& upsilon, Vec3d& dupsilon, Vec3d& ddupsilon) {
  if (std::abs(rho.z()) < 1e-9)
    throw std::domain_error("heading_projection: thrust direction is horizontal");
  const double sgn = rho.z() > 0.0 ? 1.0 : -1.0;

  const Vec3d nu3(nu.x(), nu.y(), 0.0);
  const Vec3d dnu3(dnu.x(), dnu.y(), 0.0);
  const Vec3d ddnu3(ddnu.x(), ddnu.y(), 0.0);

  varpi = sgn * Vec3d(rho.z() * nu.x(), rho.z() * nu.y(), -rho.dot(nu3));
  const Vec3d dvarpi =
      sgn * Vec3d(drho.z() * nu.x() + rho.z() * dnu.x(),
                  drho.z() * nu.y() + rho.z() * dnu.y(),
                  -drho.dot(nu3) - rho.dot(dnu3));
  const Vec3d ddvarpi =
      sgn * Vec3d(ddrho.z() * nu.x() + 2.0 * drho.z() * dnu.x() + rho.z() * ddnu.x(),
                  ddrho.z() * nu.y() + 2.0 * drho.z() * dnu.y() + rho.z() * ddnu.y(),
                  -ddrho.dot(nu3) - 2.0 * drho.dot(dnu3) - rho.dot(ddnu3));

  const double n = varpi.norm();
  upsilon = varpi / n;
  const Mat3d proj = Mat3d::Identity() - upsilon * upsilon.transpose();
  dupsilon = proj * dvarpi / n;
  ddupsilon = proj * ddvarpi / n - 2.0 * upsilon.dot(dvarpi) * dupsilon / n -
              dupsilon.squaredNorm() * upsilon;
}

Mat3d desired_rotation(const Vec3d& rho, const Vec3d& upsilon) {
  if (std::abs(rho.norm() - 1.0) > 1e-6 || std::abs(upsilon.norm() - 1.0) > 1e-6 ||
      std::abs(rho.dot(upsilon)) > 1e-6)
    throw std::invalid_argument("desired_rotation: axes not orthonormal");
  Mat3d R;
  R.col(0) = upsilon;
  R.col(1) = rho.cross(upsilon);
  R.col(2) = rho;
  return R;
}

Vec3d desired_omega(const AttitudeReference& att) {
  return Vec3d(att.upsilon.dot(att.rho.cross(att.drho)),
               att.upsilon.dot(att.drho),
               -att.upsilon.dot(att.rho.cross(att.dupsilon)));
}

Vec3d desired_omega_dot(const AttitudeReference& att, const Vec3d& w) {
  const Vec3d gyro(w.y() * w.z(), -w.x() * w.z(), -w.x() * w.y());
  const Vec3d second(att.upsilon.dot(att.rho.cross(att.ddrho)),
                     att.upsilon.dot(att.ddrho),
                     -att.upsilon.dot(att.rho.cross(att.ddupsilon)));
  return gyro + second;
}

AttitudeReference attitude_reference(const Vec3d& u, const Vec3d& du, const Vec3d& ddu,
                                     const ReferenceSample& ref) {
  AttitudeReference att;
  thrust_direction(u, du, ddu, att.rho, att.drho, att.ddrho);
  heading_projection(att.rho, att.drho, att.ddrho, ref.nu_d, ref.dnu_d, ref.ddnu_d,
                     att.varpi, att.upsilon, att.dupsilon, att.ddupsilon);
  att.R_d = desired_rotation(att.rho, att.upsilon);
  att.omega_d = desired_omega(att);
  att.domega_d = desired_omega_dot(att, att.omega_d);
  return att;
}

}  // namespace se3sat
