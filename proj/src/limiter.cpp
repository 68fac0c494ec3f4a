#include "aledg/limiter.hpp"

#include <cmath>
#include <set>

namespace aledg {

std::vector<char> detect_troubled_cells(const Discretization& d,
                                        const std::vector<Coeffs>& v_star,
                                        const std::vector<Coeffs>& v_n,
                                        const std::vector<std::vector<int>>& neighborhoods,
                                        const GasModel& gas, const DetectionParams& p) {
  const int nc = int(v_star.size());
  std::vector<char> flags(nc, 0);
  for (int c = 0; c < nc; ++c) {
    bool bad = false;
    // physical admissibility and floating-point sanity of every sub-cell average
    for (int s = 0; s < d.S && !bad; ++s)
      if (!is_admissible(v_star[c].row(s).transpose(), gas)) bad = true;

    if (!bad) {
      // relaxed discrete maximum principle on the density
      double lo = std::numeric_limits<double>::infinity(), hi = -lo;
      for (int m : neighborhoods[c]) {
        lo = std::min(lo, v_n[m].col(0).minCoeff());
        hi = std::max(hi, v_n[m].col(0).maxCoeff());
      }
      const double delta = std::max(p.delta0, p.eps * (hi - lo));
      const double smin = v_star[c].col(0).minCoeff();
      const double smax = v_star[c].col(0).maxCoeff();
      if (smin < lo - delta || smax > hi + delta) bad = true;
    }
    flags[c] = bad ? 1 : 0;
  }
  return flags;
}

std::vector<std::array<int, 3>> build_face_index(const TriMesh& mesh,
                                                 const std::vector<FaceInfo>& faces) {
  std::vector<std::array<int, 3>> idx(mesh.n_cells(), {-1, -1, -1});
  for (int f = 0; f < int(faces.size()); ++f) {
    idx[faces[f].cl][faces[f].fl] = f;
    if (faces[f].cr >= 0) idx[faces[f].cr][faces[f].fr] = f;
  }
  return idx;
}

namespace {

struct FvWork {
  Coeffs v;            // S x 4 averages at t^n
  MatX gx, gy;         // limited slopes
  MatX gxu, gyu;       // unlimited slopes
  Coeffs vmid;         // half-step states
  std::vector<Vec2> bary_n, bary_mid;
  std::vector<Vec2> vmesh;  // sub-cell mean mesh velocity
  std::vector<double> area_n, area_np1;
  bool first_order = false;
};

struct NeighborSample {
  bool present = false;
  State v;
  Vec2 bary_n, bary_mid;
  const FvWork* work = nullptr;  // source cell work (for face states)
  int subcell = -1;
  Vec2 shift = Vec2::Zero();
};

Vec2 presented_pos(const SubcellFvContext& ctx, const std::vector<Vec2>& x, int cell,
                   int local) {
  return ctx.gsn->presented(x, cell, local);
}

// state reconstructed at a point (given at tau=1/2 in the cell's own frame)
State face_state(const FvWork& w, int s, const Vec2& x_mid) {
  if (w.first_order) return w.v.row(s).transpose();
  const Vec2 dx = x_mid - w.bary_mid[s];
  State out;
  for (int i = 0; i < 4; ++i)
    out[i] = w.vmid(s, i) + w.gx(s, i) * dx[0] + w.gy(s, i) * dx[1];
  return out;
}

StateGrad slope_grad(const FvWork& w, int s) {
  StateGrad g;
  for (int i = 0; i < 4; ++i) {
    g(i, 0) = w.first_order ? 0.0 : w.gx(s, i);
    g(i, 1) = w.first_order ? 0.0 : w.gy(s, i);
  }
  return g;
}

void build_work(const SubcellFvContext& ctx, int cell, const std::map<int, Coeffs>& data_n,
                const std::map<int, FvWork>& all, FvWork& w) {
  const Discretization& d = *ctx.d;
  const SubGrid& sg = d.sg;
  w.v = data_n.at(cell);
  w.bary_n.resize(d.S);
  w.bary_mid.resize(d.S);
  w.vmesh.resize(d.S);
  w.area_n.resize(d.S);
  w.area_np1.resize(d.S);
  for (int s = 0; s < d.S; ++s) {
    const auto& sc = sg.cells[s];
    Vec2 bn = Vec2::Zero(), bm = Vec2::Zero(), vm = Vec2::Zero();
    for (int v = 0; v < 3; ++v) {
      const Vec2 p0 = presented_pos(ctx, *ctx.xn, cell, sc[v]);
      const Vec2 p1 = presented_pos(ctx, *ctx.xnp1, cell, sc[v]);
      bn += p0 / 3.0;
      bm += 0.5 * (p0 + p1) / 3.0;
      vm += (p1 - p0) / (3.0 * ctx.dt);
    }
    w.bary_n[s] = bn;
    w.bary_mid[s] = bm;
    w.vmesh[s] = vm;
    w.area_n[s] = triangle_area(presented_pos(ctx, *ctx.xn, cell, sc[0]),
                                presented_pos(ctx, *ctx.xn, cell, sc[1]),
                                presented_pos(ctx, *ctx.xn, cell, sc[2]));
    w.area_np1[s] = triangle_area(presented_pos(ctx, *ctx.xnp1, cell, sc[0]),
                                  presented_pos(ctx, *ctx.xnp1, cell, sc[1]),
                                  presented_pos(ctx, *ctx.xnp1, cell, sc[2]));
  }
  (void)all;
}

// neighbor sample across sub-cell face o of sub-cell s
NeighborSample neighbor_sample(const SubcellFvContext& ctx, int cell, int s, int o,
                               const std::map<int, Coeffs>& data_n,
                               const std::map<int, FvWork>& work) {
  const Discretization& d = *ctx.d;
  const auto& adj = d.sg.subcell_adj[s][o];
  NeighborSample out;
  if (adj.nb >= 0) {
    const FvWork& w = work.at(cell);
    out.present = true;
    out.v = w.v.row(adj.nb).transpose();
    out.bary_n = w.bary_n[adj.nb];
    out.bary_mid = w.bary_mid[adj.nb];
    out.work = &w;
    out.subcell = adj.nb;
    return out;
  }
  const FaceAdj& fa = ctx.mesh->adj[cell][adj.edge];
  if (fa.tag != BoundaryTag::Interior) return out;  // domain boundary: no sample
  const int nb = fa.cell;
  const auto it = work.find(nb);
  if (it == work.end()) return out;  // neighbor data not needed/built
  const int snb = d.sg.edge_subcell[fa.face][d.ns - 1 - adj.subedge];
  out.present = true;
  out.v = it->second.v.row(snb).transpose();
  out.bary_n = it->second.bary_n[snb] + fa.shift;
  out.bary_mid = it->second.bary_mid[snb] + fa.shift;
  out.work = &it->second;
  out.subcell = snb;
  out.shift = fa.shift;
  return out;
}

void reconstruct_slopes(const SubcellFvContext& ctx, int cell,
                        const std::map<int, Coeffs>& data_n, std::map<int, FvWork>& work) {
  const Discretization& d = *ctx.d;
  FvWork& w = work.at(cell);
  w.gxu = MatX::Zero(d.S, 4);
  w.gyu = MatX::Zero(d.S, 4);
  w.gx = MatX::Zero(d.S, 4);
  w.gy = MatX::Zero(d.S, 4);
  w.vmid = w.v;
  if (w.first_order) return;

  for (int s = 0; s < d.S; ++s) {
    NeighborSample nb[3];
    int m = 0;
    for (int o = 0; o < 3; ++o) {
      nb[o] = neighbor_sample(ctx, cell, s, o, data_n, work);
      if (nb[o].present) ++m;
    }
    if (m < 2) continue;  // not enough stencil: keep zero slopes

    // least-squares fit of the linear reconstruction
    Eigen::Matrix2d ata = Eigen::Matrix2d::Zero();
    Eigen::Matrix<double, 2, 4> atb = Eigen::Matrix<double, 2, 4>::Zero();
    for (int o = 0; o < 3; ++o) {
      if (!nb[o].present) continue;
      const Vec2 dx = nb[o].bary_n - w.bary_n[s];
      ata += dx * dx.transpose();
      atb += dx * (nb[o].v - State(w.v.row(s).transpose())).transpose();
    }
    const double det = ata.determinant();
    if (!(std::abs(det) > 1e-14 * ata.norm() * ata.norm())) continue;
    const Eigen::Matrix<double, 2, 4> g = ata.inverse() * atb;
    for (int i = 0; i < 4; ++i) {
      w.gxu(s, i) = g(0, i);
      w.gyu(s, i) = g(1, i);
    }

    // Barth & Jespersen per conserved variable
    for (int i = 0; i < 4; ++i) {
      double vmin = w.v(s, i), vmax = w.v(s, i);
      for (int o = 0; o < 3; ++o)
        if (nb[o].present) {
          vmin = std::min(vmin, nb[o].v[i]);
          vmax = std::max(vmax, nb[o].v[i]);
        }
      double alpha = 1.0;
      const auto& sc = d.sg.cells[s];
      for (int o = 0; o < 3; ++o) {
        const Vec2 fm = 0.5 * (presented_pos(ctx, *ctx.xn, cell, sc[o]) +
                               presented_pos(ctx, *ctx.xn, cell, sc[(o + 1) % 3]));
        const Vec2 dx = fm - w.bary_n[s];
        const double dv = g(0, i) * dx[0] + g(1, i) * dx[1];
        if (dv > 1e-14) alpha = std::min(alpha, (vmax - w.v(s, i)) / dv);
        if (dv < -1e-14) alpha = std::min(alpha, (vmin - w.v(s, i)) / dv);
      }
      alpha = std::clamp(alpha, 0.0, 1.0);
      w.gx(s, i) = alpha * g(0, i);
      w.gy(s, i) = alpha * g(1, i);
    }
  }

  // half-step evolution with the unlimited local flux divergence
  for (int s = 0; s < d.S; ++s) {
    const State q = w.v.row(s).transpose();
    State qx, qy;
    for (int i = 0; i < 4; ++i) {
      qx[i] = w.gxu(s, i);
      qy[i] = w.gyu(s, i);
    }
    const State divf = euler_jacobian_apply(q, qx, Vec2(1, 0), *ctx.gas) +
                       euler_jacobian_apply(q, qy, Vec2(0, 1), *ctx.gas);
    const State adv = w.vmesh[s][0] * qx + w.vmesh[s][1] * qy;
    w.vmid.row(s) = (q + 0.5 * ctx.dt * (adv - divf)).transpose();
    if (!is_admissible(w.vmid.row(s).transpose(), *ctx.gas)) w.vmid.row(s) = q.transpose();
  }
}

// exact integral of the space-time normal over a sub-face given its four
// corner positions (a/b endpoints at t^n and t^{n+1})
Vec3 subface_normal(const Vec2& an, const Vec2& bn, const Vec2& an1, const Vec2& bn1,
                    double dt) {
  const Vec2 xs = 0.5 * ((bn - an) + (bn1 - an1));
  const Vec2 xt = 0.5 * ((an1 - an) + (bn1 - bn));
  return Vec3(xs[1] * dt, -xs[0] * dt, xs[0] * xt[1] - xs[1] * xt[0]);
}

}  // namespace

FvRecomputeResult tvd_subcell_recompute(const SubcellFvContext& ctx,
                                        const std::vector<char>& flags,
                                        const std::map<int, Coeffs>& data_n) {
  const Discretization& d = *ctx.d;
  const SubGrid& sg = d.sg;
  FvRecomputeResult out;

  // cells to build reconstruction data for: flagged + interior neighbors
  std::set<int> needed;
  for (int c = 0; c < int(flags.size()); ++c)
    if (flags[c]) {
      needed.insert(c);
      for (int e = 0; e < 3; ++e)
        if (ctx.mesh->adj[c][e].tag == BoundaryTag::Interior)
          needed.insert(ctx.mesh->adj[c][e].cell);
    }
  if (needed.empty()) return out;

  std::map<int, FvWork> work;
  for (int c : needed) build_work(ctx, c, data_n, work, work[c]);
  for (int c : needed) reconstruct_slopes(ctx, c, data_n, work);

  // faces whose fluxes are produced by the sub-cell scheme
  std::set<int> fv_faces;
  for (int c = 0; c < int(flags.size()); ++c)
    if (flags[c])
      for (int e = 0; e < 3; ++e) fv_faces.insert((*ctx.face_of_cell)[c][e]);

  const double tmid = ctx.bc.t0 + 0.5 * ctx.dt;

  for (int attempt = 0; attempt < 8; ++attempt) {
    out.face_fluxes.clear();
    out.new_averages.clear();

    // pass 1: fluxes on main-grid faces touching flagged cells
    for (int fidx : fv_faces) {
      const FaceInfo& fi = (*ctx.faces)[fidx];
      const FvWork& wl = work.at(fi.cl);
      const double eta = ctx.gas->viscous() ? (2.0 * d.N + 1.0) / fi.h_nu : 0.0;
      MatX flux(d.ns, 4);
      for (int e = 0; e < d.ns; ++e) {
        const int ga = sg.edge_subnodes[fi.fl][e], gb = sg.edge_subnodes[fi.fl][e + 1];
        const Vec2 an = presented_pos(ctx, *ctx.xn, fi.cl, ga);
        const Vec2 bn = presented_pos(ctx, *ctx.xn, fi.cl, gb);
        const Vec2 an1 = presented_pos(ctx, *ctx.xnp1, fi.cl, ga);
        const Vec2 bn1 = presented_pos(ctx, *ctx.xnp1, fi.cl, gb);
        const Vec3 nst = subface_normal(an, bn, an1, bn1, ctx.dt);
        const Vec2 xc = 0.25 * (an + bn + an1 + bn1);

        const int sl = sg.edge_subcell[fi.fl][e];
        const State vl = face_state(wl, sl, xc);
        State vr;
        StateGrad gl = slope_grad(wl, sl), gr;
        if (fi.cr >= 0) {
          const FvWork& wr = work.at(fi.cr);
          const int sr = sg.edge_subcell[fi.fr][d.ns - 1 - e];
          // neighbor frame differs by the face shift
          vr = face_state(wr, sr, xc - fi.shift);
          gr = slope_grad(wr, sr);
        } else {
          const Vec2 nsp(nst[0], nst[1]);
          const Vec2 nu = nsp.normalized();
          const Vec2 vgeo = 0.5 * ((an1 - an) + (bn1 - bn)) / ctx.dt;
          vr = boundary_ghost_state(vl, fi.tag, nu, vgeo, xc, tmid, ctx.bc);
          gr = gl;
        }
        if (!is_admissible(vl, *ctx.gas) || !is_admissible(vr, *ctx.gas)) {
          out.ok = false;
          out.error = "inadmissible sub-cell face state";
          return out;
        }
        flux.row(e) = ale_rusanov_flux(vl, gl, vr, gr, nst, *ctx.gas, eta).transpose();
      }
      out.face_fluxes[fidx] = flux;
    }

    // pass 2: update every flagged cell
    bool any_retry = false;
    for (int c = 0; c < int(flags.size()); ++c) {
      if (!flags[c]) continue;
      FvWork& w = work.at(c);
      Coeffs acc = Coeffs::Zero(d.S, 4);

      // internal sub-faces once per pair
      for (int s = 0; s < d.S; ++s)
        for (int o = 0; o < 3; ++o) {
          const auto& adj = sg.subcell_adj[s][o];
          if (adj.nb >= 0 && adj.nb > s) {
            const int la = sg.cells[s][o], lb = sg.cells[s][(o + 1) % 3];
            const Vec2 an = presented_pos(ctx, *ctx.xn, c, la);
            const Vec2 bn = presented_pos(ctx, *ctx.xn, c, lb);
            const Vec2 an1 = presented_pos(ctx, *ctx.xnp1, c, la);
            const Vec2 bn1 = presented_pos(ctx, *ctx.xnp1, c, lb);
            const Vec3 nst = subface_normal(an, bn, an1, bn1, ctx.dt);
            const Vec2 xc = 0.25 * (an + bn + an1 + bn1);
            const State vl = face_state(w, s, xc);
            const State vr = face_state(w, adj.nb, xc);
            if (!is_admissible(vl, *ctx.gas) || !is_admissible(vr, *ctx.gas)) {
              out.ok = false;
              out.error = "inadmissible sub-cell face state";
              return out;
            }
            // sub-faces inside one cell share the cell's viscous length scale
            double eta = 0.0;
            if (ctx.gas->viscous()) {
              const double hn = (w.bary_mid[adj.nb] - w.bary_mid[s]).norm();
              eta = (2.0 * d.N + 1.0) / std::max(hn, 1e-300);
            }
            const State fl =
                ale_rusanov_flux(vl, slope_grad(w, s), vr, slope_grad(w, adj.nb), nst,
                                 *ctx.gas, eta);
            acc.row(s) += fl.transpose();
            acc.row(adj.nb) -= fl.transpose();
          } else if (adj.nb < 0) {
            // main-grid face: consume the stored flux
            const int fidx = (*ctx.face_of_cell)[c][adj.edge];
            const FaceInfo& fi = (*ctx.faces)[fidx];
            const MatX& flux = out.face_fluxes.at(fidx);
            if (fi.cl == c && fi.fl == adj.edge) {
              acc.row(s) += flux.row(adj.subedge);
            } else {
              acc.row(s) -= flux.row(d.ns - 1 - adj.subedge);
            }
          }
        }

      Coeffs vnew(d.S, 4);
      bool ok_cell = true;
      for (int s = 0; s < d.S; ++s) {
        vnew.row(s) = (w.v.row(s) * w.area_n[s] - acc.row(s)) / w.area_np1[s];
        if (!is_admissible(vnew.row(s).transpose(), *ctx.gas)) ok_cell = false;
      }
      if (!ok_cell) {
        if (w.first_order) {
          out.ok = false;
          out.error = "first-order sub-cell update is inadmissible";
          return out;
        }
        w.first_order = true;
        reconstruct_slopes(ctx, c, data_n, work);
        any_retry = true;
      }
      out.new_averages[c] = vnew;
    }
    if (!any_retry) break;
  }
  return out;
}

}  // namespace aledg
