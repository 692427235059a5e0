#include <doctest.h>

#include <cmath>

#include "se3sat/trajectory.hpp"

using namespace se3sat;

namespace {

TrajectoryConfig reference_traj() { return TrajectoryConfig{}; }

// central finite difference of a vector-valued map
template <typename F>
Vec3d fd(F&& f, double t, double h = 1e-6) {
  return (f(t + h) - f(t - h)) / (2.0 * h);
}

// open-loop attitude reference along the trajectory (resting filters)
AttitudeReference open_loop_reference(double t, const TrajectoryConfig& cfg, double g = 9.81) {
  const ReferenceSample r = eval_reference(t, cfg);
  const Vec3d u = r.ddp_d + g * Vec3d::UnitZ();
  return attitude_reference(u, r.d3p_d, r.d4p_d, r);
}

}  // namespace

TEST_CASE("eval_reference values at t = 0") {
  const ReferenceSample r = eval_reference(0.0, reference_traj());
  CHECK((r.p_d - Vec3d(-2, 1, 5.5)).norm() <= 1e-12);
  CHECK((r.nu_d - Vec2d(1, 0)).norm() <= 1e-12);
  const double f = reference_traj().frequency;
  CHECK((r.ddp_d - Vec3d(-f * f, 0, -f * f)).norm() <= 1e-15);
}

TEST_CASE("eval_reference is periodic") {
  const ReferenceSample a = eval_reference(0.0, reference_traj());
  const ReferenceSample b = eval_reference(15.0, reference_traj());
  CHECK((a.p_d - b.p_d).norm() <= 1e-9);
  CHECK((a.d4p_d - b.d4p_d).norm() <= 1e-12);
  CHECK((a.nu_d - b.nu_d).norm() <= 1e-9);
}

TEST_CASE("reference derivatives match finite differences on a dense grid") {
  const TrajectoryConfig cfg = reference_traj();
  for (int i = 0; i <= 1500; ++i) {
    const double t = 0.01 * i;
    const ReferenceSample r = eval_reference(t, cfg);
    CHECK(std::abs(r.nu_d.norm() - 1.0) <= 1e-12);
    CHECK(std::abs(r.nu_d.dot(r.dnu_d)) <= 1e-9);
    const auto pos = [&](double s) { return eval_reference(s, cfg).p_d; };
    const auto vel = [&](double s) { return eval_reference(s, cfg).dp_d; };
    const auto acc = [&](double s) { return eval_reference(s, cfg).ddp_d; };
    const auto jrk = [&](double s) { return eval_reference(s, cfg).d3p_d; };
    CHECK((fd(pos, t) - r.dp_d).norm() <= 1e-4 * (1.0 + r.dp_d.norm()));
    CHECK((fd(vel, t) - r.ddp_d).norm() <= 1e-4 * (1.0 + r.ddp_d.norm()));
    CHECK((fd(acc, t) - r.d3p_d).norm() <= 1e-4 * (1.0 + r.d3p_d.norm()));
    CHECK((fd(jrk, t) - r.d4p_d).norm() <= 1e-4 * (1.0 + r.d4p_d.norm()));
  }
}

TEST_CASE("heading_derivatives") {
  Vec2d nu, dnu, ddnu;
  heading_derivatives(0, 0, 0, nu, dnu, ddnu);
  CHECK((nu - Vec2d(1, 0)).norm() == 0.0);
  CHECK(dnu.norm() == 0.0);
  CHECK(ddnu.norm() == 0.0);

  heading_derivatives(0, 1, 0, nu, dnu, ddnu);
  CHECK((dnu - Vec2d(0, 1)).norm() <= 1e-15);
  CHECK((ddnu - Vec2d(-1, 0)).norm() <= 1e-15);

  heading_derivatives(EIGEN_PI / 2, 2, 3, nu, dnu, ddnu);
  CHECK((dnu - Vec2d(-2, 0)).norm() <= 1e-12);
  CHECK((ddnu - Vec2d(-3, -4)).norm() <= 1e-12);
}

TEST_CASE("thrust_direction hover and projector cases") {
  Vec3d rho, drho, ddrho;
  const double g = 9.81;
  thrust_direction(g * Vec3d::UnitZ(), Vec3d::Zero(), Vec3d::Zero(), rho, drho, ddrho);
  CHECK((rho - Vec3d::UnitZ()).norm() == 0.0);
  CHECK(drho.norm() == 0.0);
  CHECK(ddrho.norm() == 0.0);

  thrust_direction(g * Vec3d::UnitZ(), Vec3d::UnitX(), Vec3d::Zero(), rho, drho, ddrho);
  CHECK((drho - Vec3d::UnitX() / g).norm() <= 1e-15);

  CHECK_THROWS_AS(
      thrust_direction(Vec3d::Zero(), Vec3d::Zero(), Vec3d::Zero(), rho, drho, ddrho),
      std::domain_error);
}

TEST_CASE("thrust_direction derivatives match finite differences") {
  // a smooth synthetic control vector
  const auto u_of = [](double t) {
    return Vec3d(std::sin(1.3 * t) + 0.4, std::cos(0.7 * t), 9.81 + 0.5 * std::sin(2.1 * t));
  };
  const auto du_of = [](double t) {
    return Vec3d(1.3 * std::cos(1.3 * t), -0.7 * std::sin(0.7 * t), 1.05 * std::cos(2.1 * t));
  };
  const auto ddu_of = [](double t) {
    return Vec3d(-1.69 * std::sin(1.3 * t), -0.49 * std::cos(0.7 * t),
                 -2.205 * std::sin(2.1 * t));
  };
  const auto rho_of = [&](double t) { return u_of(t).normalized(); };
  const auto drho_of = [&](double t) {
    Vec3d rho, drho, ddrho;
    thrust_direction(u_of(t), du_of(t), ddu_of(t), rho, drho, ddrho);
    return drho;
  };
  for (double t = 0.0; t < 5.0; t += 0.17) {
    Vec3d rho, drho, ddrho;
    thrust_direction(u_of(t), du_of(t), ddu_of(t), rho, drho, ddrho);
    CHECK(std::abs(rho.norm() - 1.0) <= 1e-12);
    CHECK(std::abs(rho.dot(drho)) <= 1e-12);
    CHECK((fd(rho_of, t) - drho).norm() <= 1e-5);
    CHECK((fd(drho_of, t) - ddrho).norm() <= 1e-5);
  }
}

TEST_CASE("heading_projection basic directions") {
  Vec3d varpi, ups, dups, ddups;
  const Vec3d z0 = Vec3d::Zero();
  const Vec2d n10(1, 0), n01(0, 1), z2 = Vec2d::Zero();

  heading_projection(Vec3d::UnitZ(), z0, z0, n10, z2, z2, varpi, ups, dups, ddups);
  CHECK((varpi - Vec3d(1, 0, 0)).norm() <= 1e-15);
  CHECK((ups - Vec3d(1, 0, 0)).norm() <= 1e-15);

  heading_projection(-Vec3d::UnitZ(), z0, z0, n10, z2, z2, varpi, ups, dups, ddups);
  CHECK((varpi - Vec3d(1, 0, 0)).norm() <= 1e-15);
  CHECK((ups - Vec3d(1, 0, 0)).norm() <= 1e-15);

  heading_projection(Vec3d::UnitZ(), z0, z0, n01, z2, z2, varpi, ups, dups, ddups);
  CHECK((ups - Vec3d(0, 1, 0)).norm() <= 1e-15);

  CHECK_THROWS_AS(heading_projection(Vec3d::UnitX(), z0, z0, n10, z2, z2, varpi, ups, dups, ddups),
                  std::domain_error);
}

TEST_CASE("desired_rotation columns") {
  CHECK((desired_rotation(Vec3d::UnitZ(), Vec3d::UnitX()) - Mat3d::Identity()).norm() <= 1e-15);

  const Mat3d R = desired_rotation(Vec3d::UnitZ(), Vec3d::UnitY());
  CHECK((R.col(0) - Vec3d(0, 1, 0)).norm() <= 1e-15);
  CHECK((R.col(1) - Vec3d(-1, 0, 0)).norm() <= 1e-15);
  CHECK((R.col(2) - Vec3d(0, 0, 1)).norm() <= 1e-15);

  const Mat3d Rd = desired_rotation(-Vec3d::UnitZ(), Vec3d::UnitX());
  CHECK((Rd.col(0) - Vec3d::UnitX()).norm() <= 1e-15);
  CHECK((Rd.col(1) - Vec3d(0, -1, 0)).norm() <= 1e-15);
  CHECK((Rd.col(2) + Vec3d::UnitZ()).norm() <= 1e-15);
  CHECK(Rd.determinant() == doctest::Approx(1.0));

  CHECK_THROWS_AS(desired_rotation(Vec3d::UnitZ(), Vec3d::UnitZ()), std::invalid_argument);
}

TEST_CASE("desired_omega planar tilt") {
  AttitudeReference att;
  att.rho = Vec3d::UnitZ();
  att.upsilon = Vec3d::UnitX();
  CHECK(desired_omega(att).norm() == 0.0);

  // great-circle tilt: drho along upsilon, dupsilon = -|drho| rho
  att.drho = 0.3 * Vec3d::UnitX();
  att.dupsilon = -0.3 * Vec3d::UnitZ();
  CHECK((desired_omega(att) - Vec3d(0, 0.3, 0)).norm() <= 1e-15);
}

TEST_CASE("attitude reference matches finite differences along the preset") {
  const TrajectoryConfig cfg = reference_traj();
  const auto Rd_of = [&](double t) { return open_loop_reference(t, cfg).R_d; };
  const auto om_of = [&](double t) { return open_loop_reference(t, cfg).omega_d; };

  for (double t = 0.05; t < 15.0; t += 0.37) {
    const AttitudeReference att = open_loop_reference(t, cfg);
    CHECK(is_rotation(att.R_d, 1e-9));
    CHECK(std::abs(att.upsilon.norm() - 1.0) <= 1e-9);
    CHECK(std::abs(att.rho.dot(att.upsilon)) <= 1e-9);
    CHECK(std::abs(att.rho.dot(att.drho)) <= 1e-9);

    // R_d^T dR_d ~ skew(omega_d)
    const double h = 1e-6;
    const Mat3d dRd = (Rd_of(t + h) - Rd_of(t - h)) / (2.0 * h);
    CHECK((att.R_d.transpose() * dRd - skew(att.omega_d)).norm() <= 1e-5);

    // domega_d matches the drift of omega_d
    CHECK((fd(om_of, t) - att.domega_d).norm() <= 1e-4);

    // horizontal projection of upsilon aligns with the heading
    const ReferenceSample r = eval_reference(t, cfg);
    const Vec2d hor = att.upsilon.head<2>().normalized();
    CHECK((hor - r.nu_d).norm() <= 1e-9);
  }
}

TEST_CASE("desired_omega_dot pure-spin component") {
  AttitudeReference att;
  att.rho = Vec3d::UnitZ();
  att.upsilon = Vec3d::UnitX();
  att.dupsilon = 0.4 * Vec3d::UnitY();
  att.ddupsilon = Vec3d(-0.16, 0.05, 0.0);
  const Vec3d w = desired_omega(att);
  CHECK(w.x() == doctest::Approx(0.0));
  CHECK(w.y() == doctest::Approx(0.0));
  const Vec3d dw = desired_omega_dot(att, w);
  CHECK(dw.z() == doctest::Approx(-att.upsilon.dot(att.rho.cross(att.ddupsilon))));
}

TEST_CASE("hover preset and custom closures") {
  TrajectoryConfig cfg;
  cfg.preset = "hover";
  cfg.offset = Vec3d(1, 2, 3);
  const ReferenceSample r = eval_reference(11.0, cfg);
  CHECK((r.p_d - Vec3d(1, 2, 3)).norm() == 0.0);
  CHECK(r.dp_d.norm() == 0.0);

  TrajectoryConfig custom;
  custom.custom = [](double t) {
    ReferenceSample s;
    s.p_d = Vec3d(t, 0, 0);
    s.dp_d = Vec3d(1, 0, 0);
    return s;
  };
  CHECK(eval_reference(2.0, custom).p_d.x() == doctest::Approx(2.0));

  TrajectoryConfig bad;
  bad.preset = "zigzag";
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
