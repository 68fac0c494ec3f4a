#include "aledg/predictor.hpp"

#include <cmath>

namespace aledg {

namespace {

// div F = A_x(q) qx + A_y(q) qy for the Euler flux, evaluated pointwise.
inline State euler_divergence(const State& q, const State& qx, const State& qy,
                              const GasModel& gm) {
  const double rho = q[0];
  const double u = q[1] / rho, v = q[2] / rho;
  const double ke = 0.5 * (u * u + v * v);
  const double p = (gm.gamma - 1.0) * (q[3] - rho * ke);

  const double dun = (qx[1] - u * qx[0]) / rho;   // du/dx
  const double dvn = (qy[2] - v * qy[0]) / rho;   // dv/dy
  const double dpx = (gm.gamma - 1.0) * (qx[3] - u * qx[1] - v * qx[2] + ke * qx[0]);
  const double dpy = (gm.gamma - 1.0) * (qy[3] - u * qy[1] - v * qy[2] + ke * qy[0]);

  State out;
  out[0] = qx[1] + qy[2];
  out[1] = qx[1] * u + q[1] * dun + dpx + qy[1] * v + q[1] * dvn;
  out[2] = qx[2] * u + q[2] * dun + qy[2] * v + q[2] * dvn + dpy;
  out[3] = (qx[3] + dpx) * u + (q[3] + p) * dun + (qy[3] + dpy) * v + (q[3] + p) * dvn;
  return out;
}

}  // namespace

State time_integrated_node_state(const Discretization& d, const PredictorSolution& sol,
                                 int local_subnode) {
  return (d.tint_subnode.row(local_subnode) * sol.qhat).transpose();
}

State predictor_state_at(const Discretization& d, const PredictorSolution& sol,
                         const Vec2& xi, double tau) {
  return (d.theta.eval(xi, tau).transpose() * sol.qhat).transpose();
}

PredictorStatus local_predictor(const Discretization& d, const std::vector<Vec2>& x0,
                                const Coeffs& modal, double dt, const GasModel& gas,
                                MotionMode mode, const PrescribedVelocity& prescribed,
                                double t0, PredictorSolution& out, PredictorScratch& ws) {
  const int L = d.L, K = d.K, S = d.S;
  const int ng = d.ptau.size(), nq = d.pvol.size();
  const double tol = 1e-12;
  const int max_iter = 100;

  out.dt = dt;
  out.x0 = x0;
  out.qhat = d.node_phi * modal;
  out.vhat.resize(L, 2);
  out.converged = false;

  // position of a spatial node point through the piecewise-linear sub-grid map
  auto node_position = [&](int l, const MatX& traj, bool with_traj, double tau) {
    const int s = d.node_subcell[l];
    const auto& c = d.sg.cells[s];
    const Vec2 a = d.sg.nodes.row(c[0]);
    const Vec3 nd = d.theta.nodes()[l];
    const Vec2 lam = d.ref_edges(s).inverse() * (Vec2(nd[0], nd[1]) - a);
    const VecX io = d.iota(tau);
    Vec2 pos[3];
    for (int v = 0; v < 3; ++v) {
      pos[v] = x0[c[v]];
      if (with_traj)
        for (int j = 0; j <= d.N; ++j) {
          pos[v][0] += dt * traj(c[v] * (d.N + 1) + j, 0) * io[j];
          pos[v][1] += dt * traj(c[v] * (d.N + 1) + j, 1) * io[j];
        }
    }
    return Vec2(pos[0] + (pos[1] - pos[0]) * lam[0] + (pos[2] - pos[0]) * lam[1]);
  };

  auto update_velocity = [&](const Coeffs& qh, const MatX& traj, bool with_traj, Coeffs2& vh) {
    if (mode == MotionMode::Eulerian) {
      vh.setZero(L, 2);
    } else if (mode == MotionMode::Lagrangian) {
      vh.resize(L, 2);
      for (int l = 0; l < L; ++l) {
        vh(l, 0) = qh(l, 1) / qh(l, 0);
        vh(l, 1) = qh(l, 2) / qh(l, 0);
      }
    } else {
      vh.resize(L, 2);
      for (int l = 0; l < L; ++l) {
        const Vec2 x = node_position(l, traj, with_traj, d.node_tau[l]);
        const Vec2 vv = prescribed(x, t0 + d.node_tau[l] * dt);
        vh.row(l) = vv.transpose();
      }
    }
  };

  // initial admissibility at the nodes
  for (int l = 0; l < L; ++l)
    if (!is_admissible(out.qhat.row(l).transpose(), gas))
      return {false, "inadmissible state at a space-time node"};

  update_velocity(out.qhat, out.traj, false, out.vhat);
  out.traj = d.subnode_tauleg * out.vhat;

  ws.jinv.resize(ng * S);
  ws.jdet.resize(ng * S);
  const bool viscous = gas.viscous();

  double hscale = 0.0;
  {
    const auto& c = d.sg.corner;
    hscale = std::max((x0[c[1]] - x0[c[0]]).norm(), (x0[c[2]] - x0[c[0]]).norm());
  }

  for (int it = 1; it <= max_iter; ++it) {
    out.iterations = it;

    // geometry: per (g,s) instantaneous jacobian of the sub-cell map
    for (int g = 0; g < ng; ++g) {
      const VecX io = d.ptau_iota.row(g).transpose();
      for (int s = 0; s < S; ++s) {
        const auto& c = d.sg.cells[s];
        Vec2 p[3];
        for (int v = 0; v < 3; ++v) p[v] = out.subnode_position(d, c[v], io);
        Mat2 pchi;
        pchi.col(0) = p[1] - p[0];
        pchi.col(1) = p[2] - p[0];
        const Mat2 jxi = pchi * d.ref_edges(s).inverse();
        const double det = jxi.determinant();
        if (!(det > 0.0) || !std::isfinite(det))
          return {false, "tangled geometry inside the predictor"};
        ws.jinv[g * S + s] = jxi.inverse();
        ws.jdet[g * S + s] = det;
      }
    }

    ws.Q.noalias() = d.p_theta * out.qhat;
    ws.GX.noalias() = d.p_dthx * out.qhat;
    ws.GE.noalias() = d.p_dthe * out.qhat;
    ws.V.noalias() = d.p_theta * out.vhat;

    if (viscous) {
      // nodal viscous fluxes, collocated on the space-time basis
      ws.node_gx.noalias() = d.node_dthx * out.qhat;
      ws.node_ge.noalias() = d.node_dthe * out.qhat;
      ws.fvisc.resize(L, 8);
      for (int l = 0; l < L; ++l) {
        const int s = d.node_subcell[l];
        // jacobian at the node's own tau
        const auto& c = d.sg.cells[s];
        const VecX io = d.node_iota.row(l).transpose();
        Vec2 p[3];
        for (int v = 0; v < 3; ++v) p[v] = out.subnode_position(d, c[v], io);
        Mat2 pchi;
        pchi.col(0) = p[1] - p[0];
        pchi.col(1) = p[2] - p[0];
        const Mat2 jxi = pchi * d.ref_edges(s).inverse();
        if (!(jxi.determinant() > 0.0)) return {false, "tangled geometry inside the predictor"};
        const Mat2 ji = jxi.inverse();
        const State q = out.qhat.row(l).transpose();
        if (!is_admissible(q, gas)) return {false, "inadmissible state at a space-time node"};
        StateGrad grad;
        for (int i = 0; i < 4; ++i) {
          grad(i, 0) = ws.node_gx(l, i) * ji(0, 0) + ws.node_ge(l, i) * ji(1, 0);
          grad(i, 1) = ws.node_gx(l, i) * ji(0, 1) + ws.node_ge(l, i) * ji(1, 1);
        }
        const FluxTensor fv = navier_stokes_flux(q, grad, gas) - euler_flux(q, gas);
        for (int i = 0; i < 4; ++i) {
          ws.fvisc(l, i) = fv(i, 0);
          ws.fvisc(l, 4 + i) = fv(i, 1);
        }
      }
      ws.DVX.noalias() = d.p_dthx * ws.fvisc;
      ws.DVE.noalias() = d.p_dthe * ws.fvisc;
    }

    ws.integrand.resize(d.p_rows, 4);
    for (int g = 0; g < ng; ++g)
      for (int s = 0; s < S; ++s) {
        const Mat2 ji = ws.jinv[g * S + s];
        for (int q = 0; q < nq; ++q) {
          const int r = (g * S + s) * nq + q;
          const State qq = ws.Q.row(r).transpose();
          if (!(qq[0] > gas.rho_floor) || !std::isfinite(qq[0]))
            return {false, "inadmissible state at a quadrature point"};
          State qx, qy;
          for (int i = 0; i < 4; ++i) {
            qx[i] = ws.GX(r, i) * ji(0, 0) + ws.GE(r, i) * ji(1, 0);
            qy[i] = ws.GX(r, i) * ji(0, 1) + ws.GE(r, i) * ji(1, 1);
          }
          State rhs_pt = -euler_divergence(qq, qx, qy, gas);
          rhs_pt += ws.V(r, 0) * qx + ws.V(r, 1) * qy;
          if (viscous) {
            for (int i = 0; i < 4; ++i) {
              const double dfx = ws.DVX(r, i) * ji(0, 0) + ws.DVE(r, i) * ji(1, 0);
              const double dgy = ws.DVX(r, 4 + i) * ji(0, 1) + ws.DVE(r, 4 + i) * ji(1, 1);
              rhs_pt[i] -= dfx + dgy;
            }
          }
          ws.integrand.row(r) = d.p_w[r] * rhs_pt.transpose();
        }
      }

    ws.rhs.noalias() = d.F0 * modal + dt * (d.p_theta.transpose() * ws.integrand);
    ws.qnew = d.K1.solve(ws.rhs);
    if (!ws.qnew.allFinite()) return {false, "predictor iteration diverged"};

    update_velocity(ws.qnew, out.traj, true, ws.vnew);

    const double qscale = std::max(1.0, ws.qnew.cwiseAbs().maxCoeff());
    out.res_state = (ws.qnew - out.qhat).cwiseAbs().maxCoeff() / qscale;
    out.res_geom =
        dt * (ws.vnew - out.vhat).cwiseAbs().maxCoeff() / std::max(hscale, 1e-300);

    out.qhat = ws.qnew;
    out.vhat = ws.vnew;
    out.traj = d.subnode_tauleg * out.vhat;

    if (out.res_state < tol && out.res_geom < tol) {
      out.converged = true;
      break;
    }
  }
  if (!out.converged) return {false, "predictor did not converge"};

  for (int l = 0; l < L; ++l)
    if (!is_admissible(out.qhat.row(l).transpose(), gas))
      return {false, "inadmissible state at a space-time node"};
  ws.Q.noalias() = d.p_theta * out.qhat;
  for (int r = 0; r < d.p_rows; ++r)
    if (!is_admissible(ws.Q.row(r).transpose(), gas))
      return {false, "inadmissible state at a quadrature point"};
  return {};
}

}  // namespace aledg
