#include "aledg/dg_scheme.hpp"

#include <cmath>

namespace aledg {

std::vector<FaceInfo> build_face_list(const TriMesh& mesh) {
  std::vector<FaceInfo> out;
  for (int c = 0; c < mesh.n_cells(); ++c)
    for (int f = 0; f < 3; ++f) {
      const FaceAdj& a = mesh.adj[c][f];
      if (a.tag != BoundaryTag::Interior) {
        FaceInfo fi;
        fi.cl = c;
        fi.fl = f;
        fi.tag = a.tag;
        const Vec2 b0 = (mesh.vertex(c, 0) + mesh.vertex(c, 1) + mesh.vertex(c, 2)) / 3.0;
        const Vec2 fm = 0.5 * (mesh.vertex(c, f) + mesh.vertex(c, (f + 1) % 3));
        fi.h_nu = 2.0 * (b0 - fm).norm();
        out.push_back(fi);
      } else if (a.cell > c || (a.cell == c && a.face > f)) {
        FaceInfo fi;
        fi.cl = c;
        fi.fl = f;
        fi.cr = a.cell;
        fi.fr = a.face;
        fi.shift = a.shift;
        const Vec2 bl = (mesh.vertex(c, 0) + mesh.vertex(c, 1) + mesh.vertex(c, 2)) / 3.0;
        const Vec2 br = (mesh.vertex(a.cell, 0) + mesh.vertex(a.cell, 1) +
                         mesh.vertex(a.cell, 2)) / 3.0 + a.shift;
        const Vec2 fm = 0.5 * (mesh.vertex(c, f) + mesh.vertex(c, (f + 1) % 3));
        fi.h_nu = (bl - fm).norm() + (br - fm).norm();
        out.push_back(fi);
      }
    }
  return out;
}

State ale_rusanov_flux(const State& qm, const StateGrad& gim, const State& qp,
                       const StateGrad& gip, const Vec3& n_st, const GasModel& gas,
                       double eta) {
  const Vec2 nsp(n_st[0], n_st[1]);
  const double nlen = nsp.norm();

  const FluxTensor fm = physical_flux(qm, gim, gas);
  const FluxTensor fp = physical_flux(qp, gip, gas);
  State central = 0.5 * ((fm + fp) * nsp + (qm + qp) * n_st[2]);

  double smax = 0.0;
  if (nlen > 0.0) {
    const Vec2 nu = nsp / nlen;
    const double vn_mesh = -n_st[2] / nlen;
    for (const State* q : {&qm, &qp}) {
      const double lam = std::abs(velocity(*q).dot(nu) - vn_mesh) + sound_speed(*q, gas);
      smax = std::max(smax, lam);
    }
    if (gas.viscous()) {
      const double snu = std::max(max_viscous_eigenvalue(qm, gas),
                                  max_viscous_eigenvalue(qp, gas));
      smax += 2.0 * eta * snu;
    }
  }
  return central - 0.5 * smax * nlen * (qp - qm);
}

MatX cell_mass_matrix(const Discretization& d, const CellSnapshot& g, double tau) {
  MatX m = MatX::Zero(d.nphi, d.nphi);
  for (int s = 0; s < d.S; ++s) {
    const auto& c = d.sg.cells[s];
    const double det =
        2.0 * triangle_area(g.pos(c[0], tau), g.pos(c[1], tau), g.pos(c[2], tau));
    m += det * d.mass_sub[s];
  }
  return m;
}

Coeffs cell_volume_term(const Discretization& d, const CellSnapshot& g,
                        const PredictorSolution& pred, const GasModel& gas, bool* ok) {
  const int cnq = d.cvol.size(), cng = d.ctau.size();
  *ok = true;

  MatX Q = d.c_theta * pred.qhat;  // rows x 4
  MatX GX, GE;
  if (gas.viscous()) {
    GX = d.c_dthx * pred.qhat;
    GE = d.c_dthe * pred.qhat;
  }

  MatX B1(d.c_rows, 4), B2(d.c_rows, 4);
  for (int gg = 0; gg < cng; ++gg) {
    const double tau = d.ctau.x[gg];
    const double wt = d.ctau.w[gg] * g.dt;
    for (int s = 0; s < d.S; ++s) {
      const auto& c = d.sg.cells[s];
      Vec2 pn[3], pv[3];
      for (int v = 0; v < 3; ++v) {
        pn[v] = g.pos(c[v], tau);
        pv[v] = (g.xnp1[c[v]] - g.xn[c[v]]) / g.dt;
      }
      Mat2 pchi;
      pchi.col(0) = pn[1] - pn[0];
      pchi.col(1) = pn[2] - pn[0];
      const double det = pchi.determinant();
      if (!(det > 0.0)) {
        *ok = false;
        return Coeffs::Zero(d.nphi, 4);
      }
      // adj(P)^T rows
      const double a00 = pchi(1, 1), a01 = -pchi(1, 0);
      const double a10 = -pchi(0, 1), a11 = pchi(0, 0);

      Mat2 rp;  // d xi / d x = R_s P^{-1}, needed only for viscous gradients
      if (gas.viscous()) rp = d.ref_edges(s) * pchi.inverse();

      for (int q = 0; q < cnq; ++q) {
        const int r = (gg * d.S + s) * cnq + q;
        const State qq = Q.row(r).transpose();
        if (!(qq[0] > gas.rho_floor) || !std::isfinite(qq[0])) {
          *ok = false;
          return Coeffs::Zero(d.nphi, 4);
        }
        const Vec2 vg = d.c_lambda(q, 0) * pv[0] + d.c_lambda(q, 1) * pv[1] +
                        d.c_lambda(q, 2) * pv[2];
        FluxTensor fl;
        if (gas.viscous()) {
          StateGrad grad;
          for (int i = 0; i < 4; ++i) {
            grad(i, 0) = GX(r, i) * rp(0, 0) + GE(r, i) * rp(1, 0);
            grad(i, 1) = GX(r, i) * rp(0, 1) + GE(r, i) * rp(1, 1);
          }
          fl = navier_stokes_flux(qq, grad, gas);
        } else {
          fl = euler_flux(qq, gas);
        }
        const double w = d.c_wmaster[q] * wt;
        for (int i = 0; i < 4; ++i) {
          const double f0 = fl(i, 0) - vg[0] * qq[i];
          const double f1 = fl(i, 1) - vg[1] * qq[i];
          B1(r, i) = w * (a00 * f0 + a10 * f1);
          B2(r, i) = w * (a01 * f0 + a11 * f1);
        }
      }
    }
  }
  return d.c_dpx.transpose() * B1 + d.c_dpe.transpose() * B2;
}

double cell_gcl_residual(const Discretization& d, const CellSnapshot& g) {
  const int cnq = d.cvol.size(), cng = d.ctau.size();
  MatX res = MatX::Zero(d.nphi, 3);

  // volume part: - \int grad~ phi_k
  for (int gg = 0; gg < cng; ++gg) {
    const double tau = d.ctau.x[gg];
    const double wt = d.ctau.w[gg] * g.dt;
    for (int s = 0; s < d.S; ++s) {
      const auto& c = d.sg.cells[s];
      Vec2 pn[3], pv[3];
      for (int v = 0; v < 3; ++v) {
        pn[v] = g.pos(c[v], tau);
        pv[v] = (g.xnp1[c[v]] - g.xn[c[v]]) / g.dt;
      }
      Mat2 pchi;
      pchi.col(0) = pn[1] - pn[0];
      pchi.col(1) = pn[2] - pn[0];
      const double a00 = pchi(1, 1), a01 = -pchi(1, 0);
      const double a10 = -pchi(0, 1), a11 = pchi(0, 0);
      for (int q = 0; q < cnq; ++q) {
        const int r = (gg * d.S + s) * cnq + q;
        const Vec2 vg = d.c_lambda(q, 0) * pv[0] + d.c_lambda(q, 1) * pv[1] +
                        d.c_lambda(q, 2) * pv[2];
        const double w = d.c_wmaster[q] * wt;
        for (int k = 0; k < d.nphi; ++k) {
          const double gx = a00 * d.c_dpx(r, k) + a10 * d.c_dpe(r, k);
          const double gy = a01 * d.c_dpx(r, k) + a11 * d.c_dpe(r, k);
          res(k, 0) -= w * gx;
          res(k, 1) -= w * gy;
          res(k, 2) -= w * (-(gx * vg[0] + gy * vg[1]));
        }
      }
    }
  }

  // top and bottom closures
  for (int s = 0; s < d.S; ++s) {
    const auto& c = d.sg.cells[s];
    const double det1 =
        2.0 * triangle_area(g.pos(c[0], 1.0), g.pos(c[1], 1.0), g.pos(c[2], 1.0));
    const double det0 =
        2.0 * triangle_area(g.pos(c[0], 0.0), g.pos(c[1], 0.0), g.pos(c[2], 0.0));
    for (int k = 0; k < d.nphi; ++k)
      res(k, 2) += (det1 - det0) * d.phi_int_sub(s, k);
  }

  // lateral faces
  const int fnq = d.fq.size(), fng = d.ftau.size();
  for (int f = 0; f < 3; ++f)
    for (int e = 0; e < d.ns; ++e) {
      const int ga = d.sg.edge_subnodes[f][e], gb = d.sg.edge_subnodes[f][e + 1];
      for (int gg = 0; gg < fng; ++gg) {
        const double tau = d.ftau.x[gg];
        for (int a = 0; a < fnq; ++a) {
          const double sp = d.fq.x[a];
          const Vec2 xa = (1.0 - tau) * g.xn[ga] + tau * g.xnp1[ga];
          const Vec2 xb = (1.0 - tau) * g.xn[gb] + tau * g.xnp1[gb];
          const Vec2 xs = xb - xa;
          const Vec2 xt = (1.0 - sp) * (g.xnp1[ga] - g.xn[ga]) + sp * (g.xnp1[gb] - g.xn[gb]);
          const Vec3 nst(xs[1] * g.dt, -xs[0] * g.dt, xs[0] * xt[1] - xs[1] * xt[0]);
          const double w = d.fq.w[a] * d.ftau.w[gg];
          for (int k = 0; k < d.nphi; ++k) {
            const double ph = d.f_phi[f](e * fnq + a, k);
            res.row(k) += w * ph * nst.transpose();
          }
        }
      }
    }
  return res.cwiseAbs().maxCoeff();
}

State boundary_ghost_state(const State& inner, BoundaryTag tag, const Vec2& n,
                           const Vec2& vgeo, const Vec2& x, double t,
                           const BoundaryContext& bc) {
  switch (tag) {
    case BoundaryTag::Transmissive:
      return inner;
    case BoundaryTag::SlipWall:
    case BoundaryTag::MovingWall: {
      const Vec2 vw = (tag == BoundaryTag::MovingWall && bc.wall_velocity)
                          ? bc.wall_velocity(x, t)
                          : vgeo;
      const Vec2 v = velocity(inner);
      const Vec2 vg = v - 2.0 * ((v - vw).dot(n)) * n;
      State out = inner;
      out[1] = inner[0] * vg[0];
      out[2] = inner[0] * vg[1];
      out[3] = inner[3] + 0.5 * inner[0] * (vg.squaredNorm() - v.squaredNorm());
      return out;
    }
    case BoundaryTag::ExactDirichlet:
      return bc.dirichlet(x, t);
    default:
      return inner;
  }
}

FaceFluxResult compute_face_flux(const Discretization& d, const FaceInfo& face,
                                 const CellSnapshot& gl, const PredictorSolution& pl,
                                 const CellSnapshot* gr, const PredictorSolution* pr,
                                 const GasModel& gas, const BoundaryContext& bc) {
  FaceFluxResult out;
  const int fnq = d.fq.size(), fng = d.ftau.size();
  const bool interior = face.cr >= 0;
  const int f = face.fl;
  const int fr = face.fr;
  out.SL = MatX::Zero(d.nphi, 4);
  out.SR = MatX::Zero(d.nphi, 4);

  const double eta = gas.viscous() ? (2.0 * d.N + 1.0) / face.h_nu : 0.0;

  // boundary-extrapolated data on both sides (GEMM over the face tables)
  const MatX QL = d.f_theta[f] * pl.qhat;
  MatX QR, GXL, GEL, GXR, GER;
  if (interior) QR = d.f_theta[fr] * pr->qhat;
  if (gas.viscous()) {
    GXL = d.f_dthx[f] * pl.qhat;
    GEL = d.f_dthe[f] * pl.qhat;
    if (interior) {
      GXR = d.f_dthx[fr] * pr->qhat;
      GER = d.f_dthe[fr] * pr->qhat;
    }
  }

  for (int e = 0; e < d.ns; ++e) {
    const int ga = d.sg.edge_subnodes[f][e], gb = d.sg.edge_subnodes[f][e + 1];
    const int sl = d.sg.edge_subcell[f][e];
    const int er = d.ns - 1 - e;
    const int sr = interior ? d.sg.edge_subcell[fr][er] : -1;
    for (int gg = 0; gg < fng; ++gg) {
      const double tau = d.ftau.x[gg];

      Mat2 rpL, rpR;
      if (gas.viscous()) {
        const auto& c = d.sg.cells[sl];
        Mat2 pchi;
        pchi.col(0) = gl.pos(c[1], tau) - gl.pos(c[0], tau);
        pchi.col(1) = gl.pos(c[2], tau) - gl.pos(c[0], tau);
        rpL = d.ref_edges(sl) * pchi.inverse();
        if (interior) {
          const auto& cr2 = d.sg.cells[sr];
          Mat2 pr2;
          pr2.col(0) = gr->pos(cr2[1], tau) - gr->pos(cr2[0], tau);
          pr2.col(1) = gr->pos(cr2[2], tau) - gr->pos(cr2[0], tau);
          rpR = d.ref_edges(sr) * pr2.inverse();
        }
      }

      for (int a = 0; a < fnq; ++a) {
        const double sp = d.fq.x[a];
        const int rl = (gg * d.ns + e) * fnq + a;
        const int rr = (gg * d.ns + er) * fnq + (fnq - 1 - a);

        const Vec2 xa = (1.0 - tau) * gl.xn[ga] + tau * gl.xnp1[ga];
        const Vec2 xb = (1.0 - tau) * gl.xn[gb] + tau * gl.xnp1[gb];
        const Vec2 xs = xb - xa;
        const Vec2 xt =
            (1.0 - sp) * (gl.xnp1[ga] - gl.xn[ga]) + sp * (gl.xnp1[gb] - gl.xn[gb]);
        const Vec3 nst(xs[1] * gl.dt, -xs[0] * gl.dt, xs[0] * xt[1] - xs[1] * xt[0]);

        const State qm = QL.row(rl).transpose();
        if (!is_admissible(qm, gas)) {
          out.ok = false;
          out.error = "inadmissible trace state";
          return out;
        }

        StateGrad gim = StateGrad::Zero(), gip = StateGrad::Zero();
        if (gas.viscous())
          for (int i = 0; i < 4; ++i) {
            gim(i, 0) = GXL(rl, i) * rpL(0, 0) + GEL(rl, i) * rpL(1, 0);
            gim(i, 1) = GXL(rl, i) * rpL(0, 1) + GEL(rl, i) * rpL(1, 1);
          }

        State qp;
        if (interior) {
          qp = QR.row(rr).transpose();
          if (gas.viscous())
            for (int i = 0; i < 4; ++i) {
              gip(i, 0) = GXR(rr, i) * rpR(0, 0) + GER(rr, i) * rpR(1, 0);
              gip(i, 1) = GXR(rr, i) * rpR(0, 1) + GER(rr, i) * rpR(1, 1);
            }
        } else {
          const Vec2 nsp(nst[0], nst[1]);
          const double nl = nsp.norm();
          const Vec2 nu = nl > 0 ? Vec2(nsp / nl) : Vec2(1, 0);
          const Vec2 x = (1.0 - sp) * xa + sp * xb;
          const Vec2 vgeo = xt / gl.dt;
          qp = boundary_ghost_state(qm, face.tag, nu, vgeo, x, bc.t0 + tau * gl.dt, bc);
          gip = gim;
        }
        if (!is_admissible(qp, gas)) {
          out.ok = false;
          out.error = "inadmissible trace state";
          return out;
        }

        const State flux = ale_rusanov_flux(qm, gim, qp, gip, nst, gas, eta);
        const double w = d.fq.w[a] * d.ftau.w[gg];
        out.SL.noalias() += w * d.f_phi[f].row(e * fnq + a).transpose() * flux.transpose();
        if (interior)
          out.SR.noalias() +=
              w * d.f_phi[fr].row(er * fnq + (fnq - 1 - a)).transpose() * flux.transpose();
      }
    }
  }
  return out;
}

double compute_timestep(const Discretization& d, const TriMesh& mesh,
                        const GlobalSubnodes& gsn, const std::vector<Vec2>& xn,
                        const std::vector<Coeffs>& coeffs, const GasModel& gas, double cfl) {
  double dt = std::numeric_limits<double>::infinity();
  const double fac = cfl / (2.0 * d.N + 1.0);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const Vec2 a = gsn.presented(xn, c, d.sg.corner[0]);
    const Vec2 b = gsn.presented(xn, c, d.sg.corner[1]);
    const Vec2 e = gsn.presented(xn, c, d.sg.corner[2]);
    const double h = incircle_diameter(a, b, e);
    State mean = coeffs[c].row(0).transpose();
    const double lam = velocity(mean).norm() + sound_speed(mean, gas);
    const double lnu = max_viscous_eigenvalue(mean, gas);
    const double denom = lam + 2.0 * lnu * (2.0 * d.N + 1.0) / h;
    dt = std::min(dt, fac * h / denom);
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::runtime_error("non-positive time step");
  return dt;
}

}  // namespace aledg
