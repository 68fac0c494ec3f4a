#pragma once

#include <functional>
#include <string>
#include <vector>

#include "aledg/gas.hpp"
#include "aledg/tables.hpp"

namespace aledg {

enum class MotionMode { Lagrangian, Eulerian, Prescribed };

using PrescribedVelocity = std::function<Vec2(const Vec2&, double)>;

/// Element-local space-time solution: nodal state/velocity coefficients over
/// the space-time basis plus per-subnode trajectories (velocity expressed as
/// a shifted-Legendre series in tau; positions follow by exact integration).
struct PredictorSolution {
  Coeffs qhat;            // L x 4
  Coeffs2 vhat;           // L x 2
  MatX traj;              // (K*(N+1)) x 2
  std::vector<Vec2> x0;   // presented subnode positions at tau = 0
  double dt = 0;
  int iterations = 0;
  bool converged = false;
  double res_state = 0;
  double res_geom = 0;

  Vec2 subnode_position(const Discretization& d, int k, const VecX& iota_tau) const {
    Vec2 p = x0[k];
    for (int j = 0; j <= d.N; ++j) {
      p[0] += dt * traj(k * (d.N + 1) + j, 0) * iota_tau[j];
      p[1] += dt * traj(k * (d.N + 1) + j, 1) * iota_tau[j];
    }
    return p;
  }
};

/// Scratch buffers reused across cells.
struct PredictorScratch {
  MatX Q, GX, GE, V, W, integrand, rhs, qnew;
  Coeffs2 vnew;
  MatX node_gx, node_ge;
  MatX fvisc, DVX, DVE;
  std::vector<Mat2> jinv;   // per (g, s)
  std::vector<double> jdet;
};

struct PredictorStatus {
  bool ok = true;
  std::string error;
};

/// Solves the element-local coupled state/trajectory system by Picard
/// iteration to tolerance 1e-12 (max 100 sweeps). `x0` holds the cell's
/// presented subnode positions at t^n; `modal` the DG coefficients.
PredictorStatus local_predictor(const Discretization& d, const std::vector<Vec2>& x0,
                                const Coeffs& modal, double dt, const GasModel& gas,
                                MotionMode mode, const PrescribedVelocity& prescribed,
                                double t0, PredictorSolution& out, PredictorScratch& ws);

/// Time integral over [t^n, t^{n+1}] of the predictor state at subnode k
/// (local index), in units of the state.
State time_integrated_node_state(const Discretization& d, const PredictorSolution& sol,
                                 int local_subnode);

/// Predictor state at a reference space-time point.
State predictor_state_at(const Discretization& d, const PredictorSolution& sol,
                         const Vec2& xi, double tau);

}  // namespace aledg
