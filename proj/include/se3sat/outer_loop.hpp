#pragma once

#include "se3sat/attitude.hpp"
#include "se3sat/trajectory.hpp"

namespace se3sat {

/// Dual first-order filter state in error coordinates.
struct FilterState {
  Vec3d u_f = Vec3d::Zero();
  Vec3d u_s = Vec3d::Zero();
};

struct OuterGains {
  double k_p = 9.0;
  double k_v = 6.0;
  double k_f = 2.0;
  double k_s = 20.0;
  double M_p = 2.0;

  /// Positivity only; the M_p < g - K_a3 feasibility check lives in the
  /// audit where the active envelope is known.
  void validate() const;
};

/// Forward-projected coordinates hiding the filter lag.
struct TransformedState {
  Vec3d z1 = Vec3d::Zero();
  Vec3d z2 = Vec3d::Zero();
};

struct OuterOutput {
  Vec3d u = Vec3d::Zero();
  Vec3d du = Vec3d::Zero();
  Vec3d ddu = Vec3d::Zero();
  double T = 0.0;
  Vec3d rho = Vec3d::UnitZ();
  Vec3d u_p_bar = Vec3d::Zero();
};

/// Componentwise M tanh(y_i / M); smooth, odd, strictly inside (-M, M).
Vec3d sat_smooth(const Vec3d& y, double M);

TransformedState to_z(const Vec3d& p_tilde, const Vec3d& v_tilde,
                      const FilterState& xf, const OuterGains& g);

/// Inverse of to_z given the filter state; exact by construction.
void from_z(const TransformedState& z, const FilterState& xf, const OuterGains& g,
            Vec3d& p_tilde, Vec3d& v_tilde);

/// u_p_bar = -sat(k_p z1 + k_v z2).
Vec3d primary_feedback(const TransformedState& z, const OuterGains& g);

FilterState filter_rhs(const FilterState& xf, const Vec3d& u_p_bar, const OuterGains& g);

/// Assembles u = u_f + g e3 + ddp_d with its two analytic derivatives,
/// the thrust magnitude T = m|u| and direction. u_p_bar is needed for
/// the second derivative through the internal filter rate.
OuterOutput compose_control(const FilterState& xf, const ReferenceSample& ref,
                            const Vec3d& u_p_bar, const OuterGains& g,
                            double gravity, double mass);

/// Lyapunov monitor of the transformed dynamics; the saturation integrals
/// are in closed form M^2 sum ln cosh(y_i / M).
double lyapunov_v1(const TransformedState& z, const FilterState& xf, const OuterGains& g);

/// One explicit RK4 step of the NOMINAL transformed flow
/// (z1' = z2, z2' = u_p_bar(z), filter flow) started at the given state;
/// the monitor checks V1 nonincrease along this flow.
void nominal_z_flow_step(TransformedState& z, FilterState& xf, const OuterGains& g, double dt);

/// The 12x12 transform matrix (for the unit-determinant property).
Eigen::Matrix<double, 12, 12> phi_p_matrix(const OuterGains& g);

}  // namespace se3sat
