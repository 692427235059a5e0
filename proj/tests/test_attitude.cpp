#include <doctest.h>

#include <random>

#include "se3sat/attitude.hpp"

using namespace se3sat;

namespace {

std::mt19937 rng(0x5e35a7u);

UnitQuaterniond random_unit_quat() {
  std::normal_distribution<double> n(0.0, 1.0);
  UnitQuaterniond q{n(rng), Vec3d(n(rng), n(rng), n(rng))};
  return q.normalized();
}

Vec3d random_vec(double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return Vec3d(u(rng), u(rng), u(rng));
}

}  // namespace

TEST_CASE("skew matches the cross product") {
  Mat3d s = skew(Vec3d::UnitX().eval());
  Mat3d expect;
  expect << 0, 0, 0, 0, 0, -1, 0, 1, 0;
  CHECK((s - expect).norm() == 0.0);
  CHECK(skew(Vec3d::Zero().eval()).norm() == 0.0);

  const Vec3d v(1, 2, 3), w(4, 5, 6);
  CHECK((skew(v) * w - Vec3d(-3, 6, -3)).norm() == 0.0);
  for (int i = 0; i < 100; ++i) {
    const Vec3d a = random_vec(5.0), b = random_vec(5.0);
    CHECK((skew(a) * b - a.cross(b)).norm() <= 1e-14);
    CHECK((skew(a) + skew(a).transpose()).norm() == 0.0);
  }
}

TEST_CASE("rot_from_quat basic values") {
  CHECK((rot_from_quat(UnitQuaterniond::identity()) - Mat3d::Identity()).norm() == 0.0);

  const UnitQuaterniond pi_x{0.0, Vec3d::UnitX()};
  CHECK((rot_from_quat(pi_x) - Vec3d(1, -1, -1).asDiagonal().toDenseMatrix()).norm() <= 1e-15);

  const double h = std::sqrt(0.5);
  const UnitQuaterniond q{h, Vec3d(h, 0, 0)};
  Mat3d expect;
  expect << 1, 0, 0, 0, 0, -1, 0, 1, 0;
  CHECK((rot_from_quat(q) - expect).norm() <= 1e-15);
}

TEST_CASE("rot_from_quat is sign-blind and orthonormal") {
  for (int i = 0; i < 1000; ++i) {
    const UnitQuaterniond q = random_unit_quat();
    const Mat3d R = rot_from_quat(q);
    CHECK((R - rot_from_quat(-q)).norm() == 0.0);
    CHECK((R.transpose() * R - Mat3d::Identity()).norm() <= 1e-9);
    CHECK(R.determinant() == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("quat_pair_from_rot round trip") {
  const auto at_identity = quat_pair_from_rot(Mat3d::Identity().eval());
  CHECK(at_identity[0].q0 == doctest::Approx(1.0));
  CHECK(at_identity[0].q1.norm() <= 1e-15);
  CHECK(at_identity[1].q0 == doctest::Approx(-1.0));

  const Mat3d pi_x = Vec3d(1, -1, -1).asDiagonal();
  const auto pair = quat_pair_from_rot(pi_x);
  CHECK(std::abs(pair[0].q0) <= 1e-12);
  CHECK(std::abs(std::abs(pair[0].q1.x()) - 1.0) <= 1e-12);

  for (int i = 0; i < 1000; ++i) {
    const UnitQuaterniond q = random_unit_quat();
    const Mat3d R = rot_from_quat(q);
    const auto p = quat_pair_from_rot(R);
    const double align = std::abs(q.dot(p[0]));
    CHECK(align == doctest::Approx(1.0).epsilon(1e-9));
    CHECK((rot_from_quat(p[0]) - R).norm() <= 1e-8);
    CHECK(std::abs(p[0].norm() - 1.0) <= 1e-9);
  }
}

TEST_CASE("quat_pair_from_rot stays accurate near pi rotations") {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    Vec3d axis = random_vec();
    if (axis.norm() < 1e-3) axis = Vec3d::UnitZ();
    axis.normalize();
    const double angle = EIGEN_PI - 1e-7 * std::abs(u(rng));
    const UnitQuaterniond q{std::cos(angle / 2), std::sin(angle / 2) * axis};
    const auto p = quat_pair_from_rot(rot_from_quat(q));
    CHECK(std::abs(q.dot(p[0])) == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("quat_pair_from_rot rejects non-orthonormal input") {
  Mat3d bad = Mat3d::Identity();
  bad(0, 0) = 1.01;
  CHECK_THROWS_AS(quat_pair_from_rot(bad), std::invalid_argument);
}

TEST_CASE("mrp_from_quat values and the antipode") {
  CHECK(mrp_from_quat(UnitQuaterniond::identity()).vec().norm() == 0.0);

  const UnitQuaterniond pi_x{0.0, Vec3d::UnitX()};
  CHECK((mrp_from_quat(pi_x).vec() - Vec3d::UnitX()).norm() == 0.0);

  const UnitQuaterniond antipode{-1.0, Vec3d::Zero()};
  CHECK(mrp_from_quat(antipode).is_infinity());
  const UnitQuaterniond nearly{-1.0 + 1e-13, Vec3d::Zero()};
  CHECK(mrp_from_quat(nearly).is_infinity());
}

TEST_CASE("shadow values, swap and involution") {
  CHECK((shadow(Mrpd(Vec3d::UnitX().eval())).vec() + Vec3d::UnitX()).norm() == 0.0);
  CHECK(shadow(Mrpd(Vec3d::Zero().eval())).is_infinity());
  CHECK(shadow(Mrpd::infinity()).vec().norm() == 0.0);
  CHECK((shadow(Mrpd(Vec3d(2, 0, 0))).vec() - Vec3d(-0.5, 0, 0)).norm() == 0.0);

  for (int i = 0; i < 300; ++i) {
    const Vec3d v = random_vec(3.0);
    if (v.norm() < 1e-6) continue;
    const Mrpd m(v);
    CHECK(shadow(m).norm() == doctest::Approx(1.0 / v.norm()).epsilon(1e-12));
    CHECK((shadow(shadow(m)).vec() - v).norm() <= 1e-12 * v.norm());
  }
}

TEST_CASE("mrp_rate_matrix values and row identity") {
  CHECK((mrp_rate_matrix(Mrpd(Vec3d::Zero().eval())) - Mat3d::Identity() / 4.0).norm() == 0.0);

  const Mat3d t1 = mrp_rate_matrix(Mrpd(Vec3d::UnitX().eval()));
  CHECK(t1(0, 0) == doctest::Approx(0.5));
  const Mat3d expect = (2.0 * Vec3d::UnitX() * Vec3d::UnitX().transpose() +
                        2.0 * skew(Vec3d::UnitX().eval())) / 4.0;
  CHECK((t1 - expect).norm() <= 1e-15);

  for (int i = 0; i < 300; ++i) {
    const Vec3d v = random_vec(2.0);
    const Mrpd m(v);
    const Eigen::RowVector3d lhs = v.transpose() * mrp_rate_matrix(m);
    const Eigen::RowVector3d rhs = 0.25 * (1.0 + v.squaredNorm()) * v.transpose();
    CHECK((lhs - rhs).norm() <= 1e-12);
  }
  CHECK_THROWS_AS(mrp_rate_matrix(Mrpd::infinity()), std::domain_error);
}

TEST_CASE("rot_from_mrp agrees with the quaternion route") {
  CHECK((rot_from_mrp(Mrpd(Vec3d::Zero().eval())) - Mat3d::Identity()).norm() == 0.0);
  CHECK((rot_from_mrp(Mrpd::infinity()) - Mat3d::Identity()).norm() == 0.0);

  for (int i = 0; i < 1000; ++i) {
    const UnitQuaterniond q = random_unit_quat();
    const Mat3d via_mrp = rot_from_mrp(mrp_from_quat(q));
    CHECK((via_mrp - rot_from_quat(q)).norm() <= 1e-9);
  }
}

TEST_CASE("rot_from_mrp is chart-blind") {
  for (int i = 0; i < 300; ++i) {
    const Vec3d v = random_vec(2.0);
    if (v.norm() < 1e-6) continue;
    const Mrpd m(v);
    CHECK((rot_from_mrp(m) - rot_from_mrp(shadow(m))).norm() <= 1e-12);
  }
}

TEST_CASE("quat_dist values") {
  CHECK(quat_dist(UnitQuaterniond::identity(), Mat3d::Identity().eval()) <= 1e-12);
  const UnitQuaterniond qx{0.0, Vec3d::UnitX()};
  CHECK(quat_dist(qx, Mat3d::Identity().eval()) == doctest::Approx(1.0));
  for (int i = 0; i < 200; ++i) {
    const UnitQuaterniond q = random_unit_quat();
    CHECK(quat_dist(q, rot_from_quat(q)) <= 1e-9);
  }
}

TEST_CASE("nearest_lift picks the aligned member") {
  const auto id = nearest_lift(UnitQuaterniond::identity(), Mat3d::Identity().eval());
  CHECK(id.q0 == doctest::Approx(1.0));

  UnitQuaterniond near_minus{-0.9, Vec3d(0.1, 0.1, 0.1)};
  near_minus = near_minus.normalized();
  const auto lifted = nearest_lift(near_minus, Mat3d::Identity().eval());
  CHECK(lifted.q0 == doctest::Approx(-1.0));

  for (int i = 0; i < 500; ++i) {
    const UnitQuaterniond q_hat = random_unit_quat();
    const Mat3d R = rot_from_quat(random_unit_quat());
    const auto best = nearest_lift(q_hat, R);
    CHECK(q_hat.dot(best) >= 0.0);
    const auto pair = quat_pair_from_rot(R);
    CHECK(q_hat.dot(best) >= std::max(q_hat.dot(pair[0]), q_hat.dot(pair[1])) - 1e-15);
  }
}

TEST_CASE("euler zyx rotations") {
  const Mat3d R = rotation_from_euler_zyx(0.1, -0.2, 0.7);
  CHECK(is_rotation(R, 1e-12));
  CHECK(yaw_zyx(R) == doctest::Approx(0.7).epsilon(1e-12));
  const Mat3d Rz = rotation_from_euler_zyx(0.0, 0.0, EIGEN_PI / 2);
  CHECK((Rz * Vec3d::UnitX() - Vec3d::UnitY()).norm() <= 1e-15);
  // roll pi flips the body z axis
  const Mat3d Rr = rotation_from_euler_zyx(EIGEN_PI, 0.0, 0.0);
  CHECK((Rr * Vec3d::UnitZ() + Vec3d::UnitZ()).norm() <= 1e-15);
}

TEST_CASE("wrap_angle") {
  CHECK(wrap_angle(0.0) == 0.0);
  CHECK(wrap_angle(3 * EIGEN_PI) == doctest::Approx(EIGEN_PI));
  CHECK(wrap_angle(-0.1) == doctest::Approx(-0.1));
  CHECK(wrap_angle(2 * EIGEN_PI + 0.3) == doctest::Approx(0.3));
}
