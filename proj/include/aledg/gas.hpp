#pragma once

#include <cmath>

#include "aledg/types.hpp"

namespace aledg {

/// Perfect-gas model, optionally viscous (compressible Navier-Stokes with
/// Stokes-hypothesis stress and Prandtl-linked heat conduction).
struct GasModel {
  double gamma = 1.4;    // adiabatic index
  double mu = 0.0;       // dynamic viscosity (0 -> inviscid Euler)
  double prandtl = 0.75; // Prandtl number
  double r_gas = 1.0;    // gas constant

  // admissibility floors
  double rho_floor = 1e-12;
  double p_floor = 1e-12;

  double cv() const { return r_gas / (gamma - 1.0); }
  double heat_conductivity() const { return mu * gamma * cv() / prandtl; }
  bool viscous() const { return mu > 0.0; }
};

inline Vec2 velocity(const State& q) { return Vec2(q[1] / q[0], q[2] / q[0]); }

inline double pressure(const State& q, const GasModel& gm) {
  return (gm.gamma - 1.0) * (q[3] - 0.5 * (q[1] * q[1] + q[2] * q[2]) / q[0]);
}

inline double temperature(const State& q, const GasModel& gm) {
  return pressure(q, gm) / (q[0] * gm.r_gas);
}

inline double sound_speed(const State& q, const GasModel& gm) {
  return std::sqrt(gm.gamma * pressure(q, gm) / q[0]);
}

inline State prim_to_cons(double rho, const Vec2& v, double p, const GasModel& gm) {
  State q;
  q[0] = rho;
  q[1] = rho * v[0];
  q[2] = rho * v[1];
  q[3] = p / (gm.gamma - 1.0) + 0.5 * rho * v.squaredNorm();
  return q;
}

/// Returns (rho, u, v, p).
inline Eigen::Vector4d cons_to_prim(const State& q, const GasModel& gm) {
  Eigen::Vector4d w;
  w[0] = q[0];
  w[1] = q[1] / q[0];
  w[2] = q[2] / q[0];
  w[3] = pressure(q, gm);
  return w;
}

inline bool is_admissible(const State& q, const GasModel& gm) {
  if (!q.allFinite()) return false;
  if (!(q[0] > gm.rho_floor)) return false;
  return pressure(q, gm) > gm.p_floor;
}

inline FluxTensor euler_flux(const State& q, const GasModel& gm) {
  const double p = pressure(q, gm);
  const Vec2 v = velocity(q);
  FluxTensor f;
  f(0, 0) = q[1];
  f(1, 0) = q[1] * v[0] + p;
  f(2, 0) = q[2] * v[0];
  f(3, 0) = v[0] * (q[3] + p);
  f(0, 1) = q[2];
  f(1, 1) = q[1] * v[1];
  f(2, 1) = q[2] * v[1] + p;
  f(3, 1) = v[1] * (q[3] + p);
  return f;
}

/// Velocity gradient from conserved-variable gradients (chain rule).
inline Mat2 velocity_gradient(const State& q, const StateGrad& g) {
  const Vec2 v = velocity(q);
  Mat2 gv;  // gv(i,d) = d v_i / d x_d
  for (int d = 0; d < 2; ++d) {
    gv(0, d) = (g(1, d) - v[0] * g(0, d)) / q[0];
    gv(1, d) = (g(2, d) - v[1] * g(0, d)) / q[0];
  }
  return gv;
}

/// Pressure gradient from conserved-variable gradients.
inline Vec2 pressure_gradient(const State& q, const StateGrad& g, const GasModel& gm) {
  const Vec2 v = velocity(q);
  Vec2 gp;
  for (int d = 0; d < 2; ++d) {
    const double dkin = v[0] * g(1, d) + v[1] * g(2, d) -
                        0.5 * (v[0] * v[0] + v[1] * v[1]) * g(0, d);
    gp[d] = (gm.gamma - 1.0) * (g(3, d) - dkin);
  }
  return gp;
}

/// Full Navier-Stokes flux: Euler part plus Stokes-hypothesis stress and
/// heat conduction. Reduces to euler_flux for mu = 0 or zero gradients.
inline FluxTensor navier_stokes_flux(const State& q, const StateGrad& g, const GasModel& gm) {
  const double p = pressure(q, gm);
  const Vec2 v = velocity(q);
  const Mat2 gv = velocity_gradient(q, g);
  const double divv = gv(0, 0) + gv(1, 1);

  // sigma = (p + 2/3 mu div v) I - mu (grad v + grad v^T)
  Mat2 sigma = -gm.mu * (gv + gv.transpose());
  sigma(0, 0) += p + (2.0 / 3.0) * gm.mu * divv;
  sigma(1, 1) += p + (2.0 / 3.0) * gm.mu * divv;

  const Vec2 gp = pressure_gradient(q, g, gm);
  Vec2 gT;
  for (int d = 0; d < 2; ++d)
    gT[d] = (gp[d] * q[0] - p * g(0, d)) / (q[0] * q[0] * gm.r_gas);
  const double kappa = gm.heat_conductivity();

  FluxTensor f;
  for (int d = 0; d < 2; ++d) {
    f(0, d) = q[1 + d];
    f(1, d) = q[1] * v[d] + sigma(0, d);
    f(2, d) = q[2] * v[d] + sigma(1, d);
    f(3, d) = v[d] * q[3] + v[0] * sigma(0, d) + v[1] * sigma(1, d) - kappa * gT[d];
  }
  return f;
}

inline FluxTensor physical_flux(const State& q, const StateGrad& g, const GasModel& gm) {
  return gm.viscous() ? navier_stokes_flux(q, g, gm) : euler_flux(q, gm);
}

/// Directional Euler flux Jacobian action: d/dq [F(q) . n] applied to dq.
inline State euler_jacobian_apply(const State& q, const State& dq, const Vec2& n,
                                  const GasModel& gm) {
  const Vec2 v = velocity(q);
  const double vn = v.dot(n);
  const double ke = 0.5 * (v[0] * v[0] + v[1] * v[1]);

  const double dvn = (n[0] * dq[1] + n[1] * dq[2] - vn * dq[0]) / q[0];
  const double dp = (gm.gamma - 1.0) * (dq[3] - v[0] * dq[1] - v[1] * dq[2] + ke * dq[0]);

  State out;
  out[0] = n[0] * dq[1] + n[1] * dq[2];
  out[1] = dq[1] * vn + q[1] * dvn + n[0] * dp;
  out[2] = dq[2] * vn + q[2] * dvn + n[1] * dp;
  out[3] = (dq[3] + dp) * vn + (q[3] + pressure(q, gm)) * dvn;
  return out;
}

/// Largest absolute eigenvalue of the ALE Jacobian in direction n (unit):
/// |v.n - V.n| + c.
inline double max_ale_wavespeed(const State& q, const Vec2& n, const Vec2& mesh_v,
                                const GasModel& gm) {
  const Vec2 v = velocity(q);
  return std::abs((v - mesh_v).dot(n)) + sound_speed(q, gm);
}

/// max(4 mu / 3 rho, gamma mu / (Pr rho)).
inline double max_viscous_eigenvalue(const State& q, const GasModel& gm) {
  if (!gm.viscous()) return 0.0;
  return std::max(4.0 * gm.mu / (3.0 * q[0]), gm.gamma * gm.mu / (gm.prandtl * q[0]));
}

}  // namespace aledg
