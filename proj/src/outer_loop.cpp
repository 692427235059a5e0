#include "se3sat/outer_loop.hpp"

#include <cmath>
#include <stdexcept>

namespace se3sat {

void OuterGains::validate() const {
  if (!(k_p > 0 && k_v > 0 && k_f > 0 && k_s > 0 && M_p > 0))
    throw std::invalid_argument("outer gains: all gains and M_p must be > 0");
}

Vec3d sat_smooth(const Vec3d& y, double M) {
  return Vec3d(M * std::tanh(y.x() / M), M * std::tanh(y.y() / M), M * std::tanh(y.z() / M));
}

TransformedState to_z(const Vec3d& p_tilde, const Vec3d& v_tilde,
                      const FilterState& xf, const OuterGains& g) {
  TransformedState z;
  z.z1 = p_tilde + (1.0 / g.k_f + 1.0 / g.k_s) * v_tilde + xf.u_f / (g.k_s * g.k_f);
  z.z2 = v_tilde + xf.u_f / g.k_f + xf.u_s / g.k_s;
  return z;
}

void from_z(const TransformedState& z, const FilterState& xf, const OuterGains& g,
            Vec3d& p_tilde, Vec3d& v_tilde) {
  v_tilde = z.z2 - xf.u_f / g.k_f - xf.u_s / g.k_s;
  p_tilde = z.z1 - (1.0 / g.k_f + 1.0 / g.k_s) * v_tilde - xf.u_f / (g.k_s * g.k_f);
}

Vec3d primary_feedback(const TransformedState& z, const OuterGains& g) {
  return -sat_smooth(g.k_p * z.z1 + g.k_v * z.z2, g.M_p);
}

FilterState filter_rhs(const FilterState& xf, const Vec3d& u_p_bar, const OuterGains& g) {
  FilterState d;
  d.u_f = -g.k_f * (xf.u_f - xf.u_s);
  d.u_s = -g.k_s * (xf.u_s - u_p_bar);
  return d;
}

OuterOutput compose_control(const FilterState& xf, const ReferenceSample& ref,
                            const Vec3d& u_p_bar, const OuterGains& g,
                            double gravity, double mass) {
  OuterOutput out;
  out.u_p_bar = u_p_bar;
  out.u = xf.u_f + gravity * Vec3d::UnitZ() + ref.ddp_d;
  const FilterState dxf = filter_rhs(xf, u_p_bar, g);
  out.du = dxf.u_f + ref.d3p_d;
  out.ddu = -g.k_f * (dxf.u_f - dxf.u_s) + ref.d4p_d;
  const double n = out.u.norm();
  if (n < 1e-9) throw std::domain_error("compose_control: vanishing thrust");
  out.T = mass * n;
  out.rho = out.u / n;
  return out;
}

namespace {
double sat_integral(const Vec3d& y, double M) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i) s += M * M * std::log(std::cosh(y(i) / M));
  return s;
}
}  // namespace

double lyapunov_v1(const TransformedState& z, const FilterState& xf, const OuterGains& g) {
  const double vp = g.k_p * z.z2.squaredNorm() +
                    sat_integral(g.k_p * z.z1 + g.k_v * z.z2, g.M_p) +
                    sat_integral(g.k_p * z.z1, g.M_p);
  const double vf = xf.u_f.squaredNorm() / g.k_f + xf.u_s.squaredNorm() / g.k_s;
  return vp / g.k_v + vf / 2.0;
}

void nominal_z_flow_step(TransformedState& z, FilterState& xf, const OuterGains& g, double dt) {
  using State = Eigen::Matrix<double, 12, 1>;
  const auto pack = [](const TransformedState& zz, const FilterState& ff) {
    State s;
    s << zz.z1, zz.z2, ff.u_f, ff.u_s;
    return s;
  };
  const auto rhs = [&g](const State& s) {
    TransformedState zz;
    zz.z1 = s.segment<3>(0);
    zz.z2 = s.segment<3>(3);
    FilterState ff{s.segment<3>(6), s.segment<3>(9)};
    const Vec3d up = primary_feedback(zz, g);
    const FilterState df = filter_rhs(ff, up, g);
    State d;
    d << zz.z2, up, df.u_f, df.u_s;
    return d;
  };
  State s = pack(z, xf);
  const State k1 = rhs(s);
  const State k2 = rhs(s + 0.5 * dt * k1);
  const State k3 = rhs(s + 0.5 * dt * k2);
  const State k4 = rhs(s + dt * k3);
  s += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  z.z1 = s.segment<3>(0);
  z.z2 = s.segment<3>(3);
  xf.u_f = s.segment<3>(6);
  xf.u_s = s.segment<3>(9);
}

Eigen::Matrix<double, 12, 12> phi_p_matrix(const OuterGains& g) {
  using M12 = Eigen::Matrix<double, 12, 12>;
  const Mat3d I = Mat3d::Identity();
  M12 phi = M12::Zero();
  phi.block<3, 3>(0, 0) = I;
  phi.block<3, 3>(0, 3) = (1.0 / g.k_f + 1.0 / g.k_s) * I;
  phi.block<3, 3>(0, 6) = I / (g.k_s * g.k_f);
  phi.block<3, 3>(3, 3) = I;
  phi.block<3, 3>(3, 6) = I / g.k_f;
  phi.block<3, 3>(3, 9) = I / g.k_s;
  phi.block<3, 3>(6, 6) = I;
  phi.block<3, 3>(9, 9) = I;
  return phi;
}

}  // namespace se3sat
