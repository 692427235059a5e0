#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace se3sat {

template <typename Scalar>
using Vec3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Mat3 = Eigen::Matrix<Scalar, 3, 3>;

using Vec3d = Vec3<double>;
using Mat3d = Mat3<double>;

/// Skew-symmetric matrix of v, satisfying skew(v) * s == v.cross(s).
template <typename Scalar>
Mat3<Scalar> skew(const Vec3<Scalar>& v) {
  Mat3<Scalar> s;
  s << Scalar(0), -v.z(), v.y(),
       v.z(), Scalar(0), -v.x(),
       -v.y(), v.x(), Scalar(0);
  return s;
}

/// Unit quaternion (q0, q1), scalar part first; double cover of SO(3).
template <typename Scalar>
struct UnitQuaternion {
  Scalar q0 = Scalar(1);
  Vec3<Scalar> q1 = Vec3<Scalar>::Zero();

  static UnitQuaternion identity() { return {}; }

  Scalar dot(const UnitQuaternion& o) const { return q0 * o.q0 + q1.dot(o.q1); }
  Scalar norm() const { return std::sqrt(q0 * q0 + q1.squaredNorm()); }

  UnitQuaternion normalized() const {
    const Scalar n = norm();
    return {q0 / n, q1 / n};
  }

  UnitQuaternion operator-() const { return {-q0, -q1}; }

  /// Sign selection used by the path-lifting output (s = +/-1).
  UnitQuaternion signed_by(int s) const { return s < 0 ? -*this : *this; }
};

using UnitQuaterniond = UnitQuaternion<double>;

/// MRP chart point: either a finite 3-vector or the point at infinity
/// (one-point compactification; hit only at the antipodal quaternion).
template <typename Scalar>
class Mrp {
 public:
  Mrp() = default;
  explicit Mrp(const Vec3<Scalar>& v) : v_(v) {
    if (!v.allFinite()) throw std::invalid_argument("Mrp: non-finite components");
  }

  static Mrp infinity() {
    Mrp m;
    m.at_infinity_ = true;
    return m;
  }

  bool is_infinity() const { return at_infinity_; }

  const Vec3<Scalar>& vec() const {
    if (at_infinity_) throw std::domain_error("Mrp: point at infinity has no coordinates");
    return v_;
  }

  /// Euclidean norm; the point at infinity reports +inf so that norm
  /// thresholds remain total.
  Scalar norm() const {
    return at_infinity_ ? std::numeric_limits<Scalar>::infinity() : v_.norm();
  }

 private:
  Vec3<Scalar> v_ = Vec3<Scalar>::Zero();
  bool at_infinity_ = false;
};

using Mrpd = Mrp<double>;

/// R(q) = I + 2 q0 [q1]x + 2 [q1]x^2, body-to-inertial.
template <typename Scalar>
Mat3<Scalar> rot_from_quat(const UnitQuaternion<Scalar>& q) {
  const Mat3<Scalar> s = skew(q.q1);
  return Mat3<Scalar>::Identity() + Scalar(2) * q.q0 * s + Scalar(2) * s * s;
}

template <typename Scalar>
bool is_rotation(const Mat3<Scalar>& R, Scalar tol) {
  return (R.transpose() * R - Mat3<Scalar>::Identity()).norm() <= tol &&
         std::abs(R.determinant() - Scalar(1)) <= tol;
}

/// Double-valued inverse of rot_from_quat: returns {q, -q}.
/// Uses the largest of trace/diagonal pivots so the extraction stays
/// well-conditioned for rotations near pi.
template <typename Scalar>
std::array<UnitQuaternion<Scalar>, 2> quat_pair_from_rot(const Mat3<Scalar>& R) {
  if (!is_rotation(R, Scalar(1e-6)))
    throw std::invalid_argument("quat_pair_from_rot: input is not orthonormal");

  UnitQuaternion<Scalar> q;
  const Scalar tr = R.trace();
  if (tr > R(0, 0) && tr > R(1, 1) && tr > R(2, 2)) {
    const Scalar s = std::sqrt(tr + Scalar(1)) * Scalar(2);
    q.q0 = Scalar(0.25) * s;
    q.q1.x() = (R(2, 1) - R(1, 2)) / s;
    q.q1.y() = (R(0, 2) - R(2, 0)) / s;
    q.q1.z() = (R(1, 0) - R(0, 1)) / s;
  } else {
    int i = 0;
    if (R(1, 1) > R(0, 0)) i = 1;
    if (R(2, 2) > R(i, i)) i = 2;
    const int j = (i + 1) % 3;
    const int k = (i + 2) % 3;
    const Scalar s = std::sqrt(Scalar(1) + R(i, i) - R(j, j) - R(k, k)) * Scalar(2);
    q.q0 = (R(k, j) - R(j, k)) / s;
    q.q1(i) = Scalar(0.25) * s;
    q.q1(j) = (R(j, i) + R(i, j)) / s;
    q.q1(k) = (R(k, i) + R(i, k)) / s;
  }
  q = q.normalized();
  return {q, -q};
}

/// Stereographic projection phi(q) = q1 / (1 + q0); the antipode maps to
/// the point at infinity. The branch threshold keeps the map total in
/// floating point.
template <typename Scalar>
Mrp<Scalar> mrp_from_quat(const UnitQuaternion<Scalar>& q) {
  if (q.q0 <= Scalar(-1) + Scalar(1e-12)) return Mrp<Scalar>::infinity();
  return Mrp<Scalar>(Vec3<Scalar>(q.q1 / (Scalar(1) + q.q0)));
}

/// Shadow chart: -v/|v|^2 for finite nonzero, with 0 <-> infinity swap.
template <typename Scalar>
Mrp<Scalar> shadow(const Mrp<Scalar>& m) {
  if (m.is_infinity()) return Mrp<Scalar>(Vec3<Scalar>::Zero());
  const Scalar n2 = m.vec().squaredNorm();
  if (n2 == Scalar(0)) return Mrp<Scalar>::infinity();
  return Mrp<Scalar>(Vec3<Scalar>(-m.vec() / n2));
}

/// Kinematic matrix T(v) = [(1-|v|^2) I + 2 [v]x + 2 v v^T] / 4.
template <typename Scalar>
Mat3<Scalar> mrp_rate_matrix(const Mrp<Scalar>& m) {
  if (m.is_infinity())
    throw std::domain_error("mrp_rate_matrix: undefined at the point at infinity");
  const Vec3<Scalar>& v = m.vec();
  const Scalar n2 = v.squaredNorm();
  return ((Scalar(1) - n2) * Mat3<Scalar>::Identity() + Scalar(2) * skew(v) +
          Scalar(2) * v * v.transpose()) /
         Scalar(4);
}

/// Rotation of an MRP point, in the same body-to-inertial convention as
/// rot_from_quat (so rot_from_mrp(mrp_from_quat(q)) == rot_from_quat(q)).
/// Both charts of the same rotation agree, and the point at infinity maps
/// to the identity.
template <typename Scalar>
Mat3<Scalar> rot_from_mrp(const Mrp<Scalar>& m) {
  if (m.is_infinity()) return Mat3<Scalar>::Identity();
  const Vec3<Scalar>& v = m.vec();
  const Scalar n2 = v.squaredNorm();
  const Mat3<Scalar> s = skew(v);
  const Scalar den = (Scalar(1) + n2) * (Scalar(1) + n2);
  return Mat3<Scalar>::Identity() + (Scalar(8) * s * s + Scalar(4) * (Scalar(1) - n2) * s) / den;
}

/// dist(qhat, Q(R)) = 1 - |qhat . q| over the lift pair of R; in [0, 2].
template <typename Scalar>
Scalar quat_dist(const UnitQuaternion<Scalar>& q_hat, const Mat3<Scalar>& R) {
  const auto pair = quat_pair_from_rot(R);
  return Scalar(1) - std::abs(q_hat.dot(pair[0]));
}

/// Member of Q(R) with the largest inner product with q_hat. At an exact
/// tie the member whose first nonzero component is positive is returned,
/// so the selection is deterministic.
template <typename Scalar>
UnitQuaternion<Scalar> nearest_lift(const UnitQuaternion<Scalar>& q_hat, const Mat3<Scalar>& R) {
  const auto pair = quat_pair_from_rot(R);
  const Scalar d = q_hat.dot(pair[0]);
  if (d > Scalar(0)) return pair[0];
  if (d < Scalar(0)) return pair[1];
  const auto positive_leading = [](const UnitQuaternion<Scalar>& q) {
    if (q.q0 != Scalar(0)) return q.q0 > Scalar(0);
    for (int i = 0; i < 3; ++i)
      if (q.q1(i) != Scalar(0)) return q.q1(i) > Scalar(0);
    return true;
  };
  return positive_leading(pair[0]) ? pair[0] : pair[1];
}

/// Rz(yaw) * Ry(pitch) * Rx(roll). Euler angles appear only at the CLI
/// boundary for initial-condition entry and yaw logging.
template <typename Scalar>
Mat3<Scalar> rotation_from_euler_zyx(Scalar roll, Scalar pitch, Scalar yaw) {
  const Scalar cr = std::cos(roll), sr = std::sin(roll);
  const Scalar cp = std::cos(pitch), sp = std::sin(pitch);
  const Scalar cy = std::cos(yaw), sy = std::sin(yaw);
  Mat3<Scalar> R;
  R << cy * cp, cy * sp * sr - sy * cr, cy * sp * cr + sy * sr,
       sy * cp, sy * sp * sr + cy * cr, sy * sp * cr - cy * sr,
       -sp, cp * sr, cp * cr;
  return R;
}

template <typename Scalar>
Scalar yaw_zyx(const Mat3<Scalar>& R) {
  return std::atan2(R(1, 0), R(0, 0));
}

/// Angle wrapped to (-pi, pi]; used for heading-error bookkeeping.
template <typename Scalar>
Scalar wrap_angle(Scalar a) {
  const Scalar two_pi = Scalar(2) * Scalar(EIGEN_PI);
  a = std::fmod(a + Scalar(EIGEN_PI), two_pi);
  if (a <= Scalar(0)) a += two_pi;
  return a - Scalar(EIGEN_PI);
}

}  // namespace se3sat
