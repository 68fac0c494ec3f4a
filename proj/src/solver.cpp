#include "aledg/solver.hpp"

#include <cmath>
#include <stdexcept>

namespace aledg {

Solver::Solver(TriMesh mesh, const SolverOptions& opt, CaseHooks hooks)
    : d_(opt.order),
      mesh_(std::move(mesh)),
      gsn_(build_global_subnodes(mesh_, d_.sg)),
      faces_(build_face_list(mesh_)),
      face_idx_(build_face_index(mesh_, faces_)),
      voronoi_(cell_voronoi_neighborhoods(mesh_)),
      opt_(opt),
      hooks_(std::move(hooks)) {
  xn_ = initial_subnode_positions(mesh_, d_.sg, gsn_);
  const int nc = mesh_.n_cells();
  u_.assign(nc, Coeffs::Zero(d_.nphi, 4));
  flags_.assign(nc, 0);
  averages_.assign(nc, Coeffs());
  xprev_ = xn_;
}

Coeffs Solver::project_cell(const std::function<State(const Vec2&)>& f, int cell) const {
  const Vec2 a = gsn_.presented(xn_, cell, d_.sg.corner[0]);
  const Vec2 b = gsn_.presented(xn_, cell, d_.sg.corner[1]);
  const Vec2 c = gsn_.presented(xn_, cell, d_.sg.corner[2]);
  Coeffs rhs = Coeffs::Zero(d_.nphi, 4);
  for (int m = 0; m < d_.init_quad.size(); ++m) {
    const Vec2 xi = d_.init_quad.pts.row(m);
    const Vec2 x = affine_triangle_map(a, b, c, xi);
    rhs += d_.init_quad.w[m] * d_.phi.eval(xi) * f(x).transpose();
  }
  Coeffs out(d_.nphi, 4);
  for (int k = 0; k < d_.nphi; ++k) out.row(k) = rhs.row(k) / d_.phi.mass_diagonal()[k];
  return out;
}

void Solver::set_initial(const std::function<State(const Vec2&)>& u0) {
  for (int c = 0; c < mesh_.n_cells(); ++c) {
    Coeffs coef = project_cell(u0, c);
    // pointwise admissibility on the check set; flatten to the mean if violated
    const MatX vals = d_.check_phi * coef;
    bool ok = true;
    for (int r = 0; r < vals.rows() && ok; ++r)
      if (!is_admissible(vals.row(r).transpose(), opt_.gas)) ok = false;
    if (!ok) {
      const State mean = coef.row(0).transpose();
      if (!is_admissible(mean, opt_.gas))
        throw std::runtime_error("initial condition inadmissible in cell " + std::to_string(c));
      coef.setZero();
      coef.row(0) = mean.transpose();
    }
    u_[c] = coef;
    flags_[c] = 0;
  }
}

void Solver::set_cell_state(int cell, const State& q) {
  u_[cell].setZero();
  u_[cell].row(0) = q.transpose();
}

double Solver::suggest_timestep() const {
  return compute_timestep(d_, mesh_, gsn_, xn_, u_, opt_.gas, opt_.cfl);
}

CellSnapshot Solver::cell_snapshot(int cell, const std::vector<Vec2>& xa,
                                   const std::vector<Vec2>& xb, double dt) const {
  CellSnapshot s;
  s.dt = dt;
  s.xn.resize(d_.K);
  s.xnp1.resize(d_.K);
  for (int k = 0; k < d_.K; ++k) {
    s.xn[k] = gsn_.presented(xa, cell, k);
    s.xnp1[k] = gsn_.presented(xb, cell, k);
  }
  return s;
}

double Solver::cell_area(int cell) const {
  double a = 0.0;
  for (const auto& sc : d_.sg.cells)
    a += triangle_area(gsn_.presented(xn_, cell, sc[0]), gsn_.presented(xn_, cell, sc[1]),
                       gsn_.presented(xn_, cell, sc[2]));
  return a;
}

Vec2 Solver::cell_barycenter(int cell) const {
  Vec2 b = Vec2::Zero();
  for (int v = 0; v < 3; ++v) b += gsn_.presented(xn_, cell, d_.sg.corner[v]) / 3.0;
  return b;
}

Coeffs Solver::subcell_averages(int cell) const {
  if (flags_[cell] && averages_[cell].size() > 0) return averages_[cell];
  return d_.proj.matrix() * u_[cell];
}

bool Solver::evaluate(const Vec2& x, State& out) const {
  for (int c = 0; c < mesh_.n_cells(); ++c) {
    for (int s = 0; s < d_.S; ++s) {
      const auto& sc = d_.sg.cells[s];
      const Vec2 a = gsn_.presented(xn_, c, sc[0]);
      const Vec2 b = gsn_.presented(xn_, c, sc[1]);
      const Vec2 e = gsn_.presented(xn_, c, sc[2]);
      const double det = (b - a)[0] * (e - a)[1] - (e - a)[0] * (b - a)[1];
      if (std::abs(det) < 1e-300) continue;
      const double l2 = ((x - a)[0] * (e - a)[1] - (e - a)[0] * (x - a)[1]) / det;
      const double l3 = ((b - a)[0] * (x - a)[1] - (x - a)[0] * (b - a)[1]) / det;
      if (l2 < -1e-12 || l3 < -1e-12 || l2 + l3 > 1.0 + 1e-12) continue;
      const Vec2 xi1 = d_.sg.nodes.row(sc[0]);
      const Vec2 xi = xi1 + d_.ref_edges(s) * Vec2(l2, l3);
      out = (d_.phi.eval(xi).transpose() * u_[c]).transpose();
      return true;
    }
  }
  return false;
}

State Solver::total_conserved() const {
  State tot = State::Zero();
  for (int c = 0; c < mesh_.n_cells(); ++c) {
    const Coeffs av = subcell_averages(c);
    for (int s = 0; s < d_.S; ++s) {
      const auto& sc = d_.sg.cells[s];
      const double area =
          triangle_area(gsn_.presented(xn_, c, sc[0]), gsn_.presented(xn_, c, sc[1]),
                        gsn_.presented(xn_, c, sc[2]));
      tot += area * State(av.row(s).transpose());
    }
  }
  return tot;
}

Eigen::Vector4d Solver::l2_error(
    const std::function<State(const Vec2&, double)>& exact) const {
  Eigen::Vector4d acc = Eigen::Vector4d::Zero();
  for (int c = 0; c < mesh_.n_cells(); ++c)
    for (int s = 0; s < d_.S; ++s) {
      const auto& sc = d_.sg.cells[s];
      const Vec2 a = gsn_.presented(xn_, c, sc[0]);
      const Vec2 b = gsn_.presented(xn_, c, sc[1]);
      const Vec2 e = gsn_.presented(xn_, c, sc[2]);
      const double det = 2.0 * triangle_area(a, b, e);
      const Vec2 xi1 = d_.sg.nodes.row(sc[0]);
      const Mat2 rs = d_.ref_edges(s);
      for (int m = 0; m < d_.err_quad.size(); ++m) {
        const Vec2 chi = d_.err_quad.pts.row(m);
        const Vec2 x = affine_triangle_map(a, b, e, chi);
        const Vec2 xi = xi1 + rs * chi;
        const State uh = (d_.phi.eval(xi).transpose() * u_[c]).transpose();
        const State du = uh - exact(x, t_);
        acc += d_.err_quad.w[m] * det * State(du.cwiseProduct(du));
      }
    }
  return acc.cwiseSqrt();
}

double Solver::mesh_size() const {
  double h = 0.0;
  for (int c = 0; c < mesh_.n_cells(); ++c)
    h = std::max(h, circumcircle_diameter(gsn_.presented(xn_, c, d_.sg.corner[0]),
                                          gsn_.presented(xn_, c, d_.sg.corner[1]),
                                          gsn_.presented(xn_, c, d_.sg.corner[2])));
  return h;
}

double Solver::last_gcl_residual() const {
  if (dtprev_ <= 0) return 0.0;
  double r = 0.0;
  for (int c = 0; c < mesh_.n_cells(); ++c)
    r = std::max(r, cell_gcl_residual(d_, cell_snapshot(c, xprev_, xn_, dtprev_)));
  return r;
}

bool Solver::try_step(double dt, StepStats& stats, std::string& why) {
  const int nc = mesh_.n_cells();
  const GasModel& gas = opt_.gas;

  // 1. element-local predictors
  preds_.resize(nc);
  std::vector<Vec2> x0(d_.K);
  int pred_iters = 0;
  for (int c = 0; c < nc; ++c) {
    for (int k = 0; k < d_.K; ++k) x0[k] = gsn_.presented(xn_, c, k);
    const PredictorStatus st = local_predictor(d_, x0, u_[c], dt, gas, opt_.motion,
                                               hooks_.prescribed, t_, preds_[c], pscratch_);
    if (!st.ok) {
      why = "predictor, cell " + std::to_string(c) + ": " + st.error;
      return false;
    }
    pred_iters = std::max(pred_iters, preds_[c].iterations);
  }
  stats.predictor_iterations_max = pred_iters;

  // 2. nodal solver, Lagrangian step, rezoning, relaxation
  MotionContext mc;
  mc.d = &d_;
  mc.mesh = &mesh_;
  mc.gsn = &gsn_;
  mc.gas = &gas;
  mc.mode = opt_.motion;
  mc.prescribed = hooks_.prescribed;
  mc.wall_velocity = hooks_.wall_velocity;
  mc.t0 = t_;

  NodalSolverInput nsi;
  nsi.preds = &preds_;
  nsi.flags = &flags_;
  nsi.averages = &averages_;

  std::vector<Vec2> vbar;
  try {
    vbar = solve_node_velocities(mc, xn_, nsi);
  } catch (const std::exception& e) {
    why = std::string("nodal solver: ") + e.what();
    return false;
  }
  const std::vector<Vec2> xlag = lagrangian_positions(xn_, vbar, dt);
  const std::vector<Vec2> xrez =
      (opt_.relax.kind == RelaxSpec::Kind::Lagrange) ? xlag : rezone(mc, xlag);
  std::vector<Vec2> xnp1;
  relax(mc, xn_, xlag, xrez, opt_.relax, xnp1);
  if (!snapshot_valid(mc, xnp1)) {
    why = "tangled mesh after relaxation";
    return false;
  }

  // 3. corrector: face fluxes once per face, then per-cell assembly
  BoundaryContext bc{hooks_.dirichlet, hooks_.wall_velocity, t_};
  const int nf = int(faces_.size());
  std::vector<MatX> faceSL(nf), faceSR(nf);
  flux_pairing_ok_ = true;
  for (int f = 0; f < nf; ++f) {
    const FaceInfo& fi = faces_[f];
    const CellSnapshot gl = cell_snapshot(fi.cl, xn_, xnp1, dt);
    if (fi.cr >= 0) {
      const CellSnapshot gr = cell_snapshot(fi.cr, xn_, xnp1, dt);
      const FaceFluxResult r =
          compute_face_flux(d_, fi, gl, preds_[fi.cl], &gr, &preds_[fi.cr], gas, bc);
      if (!r.ok) {
        why = "face flux: " + r.error;
        return false;
      }
      faceSL[f] = r.SL;
      faceSR[f] = r.SR;
      for (int i = 0; i < 4; ++i)
        if (r.SL(0, i) != r.SR(0, i)) flux_pairing_ok_ = false;
    } else {
      const FaceFluxResult r =
          compute_face_flux(d_, fi, gl, preds_[fi.cl], nullptr, nullptr, gas, bc);
      if (!r.ok) {
        why = "face flux: " + r.error;
        return false;
      }
      faceSL[f] = r.SL;
    }
  }

  std::vector<Coeffs> rhs(nc), ustar(nc);
  std::vector<Eigen::LLT<MatX>> mass1(nc);
  for (int c = 0; c < nc; ++c) {
    const CellSnapshot gs = cell_snapshot(c, xn_, xnp1, dt);
    const MatX m0 = cell_mass_matrix(d_, gs, 0.0);
    const MatX m1 = cell_mass_matrix(d_, gs, 1.0);
    bool okv = true;
    const Coeffs vol = cell_volume_term(d_, gs, preds_[c], gas, &okv);
    if (!okv) {
      why = "inverted space-time volume in cell " + std::to_string(c);
      return false;
    }
    Coeffs surf = Coeffs::Zero(d_.nphi, 4);
    for (int e = 0; e < 3; ++e) {
      const int f = face_idx_[c][e];
      const FaceInfo& fi = faces_[f];
      if (fi.cl == c && fi.fl == e)
        surf += faceSL[f];
      else
        surf -= faceSR[f];
    }
    rhs[c] = m0 * u_[c] + vol - surf;
    mass1[c].compute(m1);
    if (mass1[c].info() != Eigen::Success) {
      why = "singular new mass matrix in cell " + std::to_string(c);
      return false;
    }
    ustar[c] = mass1[c].solve(rhs[c]);
    if (!ustar[c].allFinite()) {
      why = "non-finite candidate in cell " + std::to_string(c);
      return false;
    }
  }

  // 4. detection on the candidate sub-cell averages
  std::vector<Coeffs> vstar(nc), vn(nc);
  for (int c = 0; c < nc; ++c) {
    vstar[c] = d_.proj.matrix() * ustar[c];
    vn[c] = (flags_[c] && averages_[c].size() > 0) ? averages_[c] : d_.proj.matrix() * u_[c];
  }
  std::vector<char> newflags =
      detect_troubled_cells(d_, vstar, vn, voronoi_, gas, opt_.detection);

  int nflag = 0;
  for (char f : newflags) nflag += f;
  stats.flagged = nflag;

  // 5. sub-cell FV recompute of the troubled cells
  FvRecomputeResult fv;
  if (nflag > 0) {
    std::map<int, Coeffs> data_n;
    for (int c = 0; c < nc; ++c)
      if (newflags[c]) {
        data_n[c] = vn[c];
        for (int e = 0; e < 3; ++e)
          if (mesh_.adj[c][e].tag == BoundaryTag::Interior) {
            const int nb = mesh_.adj[c][e].cell;
            data_n.emplace(nb, vn[nb]);
          }
      }
    SubcellFvContext fctx;
    fctx.d = &d_;
    fctx.mesh = &mesh_;
    fctx.gsn = &gsn_;
    fctx.xn = &xn_;
    fctx.xnp1 = &xnp1;
    fctx.dt = dt;
    fctx.gas = &gas;
    fctx.bc = bc;
    fctx.faces = &faces_;
    fctx.face_of_cell = &face_idx_;
    fv = tvd_subcell_recompute(fctx, newflags, data_n);
    if (!fv.ok) {
      why = "sub-cell limiter: " + fv.error;
      return false;
    }
  }

  // 6. conservative fixup of good neighbors + gather of flagged cells
  std::vector<Coeffs> unew(nc);
  std::vector<Coeffs> newav(nc);
  for (int c = 0; c < nc; ++c) {
    if (!newflags[c]) {
      bool touched = false;
      Coeffs r = rhs[c];
      for (int e = 0; e < 3; ++e) {
        const int f = face_idx_[c][e];
        const FaceInfo& fi = faces_[f];
        if (fi.cr < 0) continue;
        const int nb = (fi.cl == c) ? fi.cr : fi.cl;
        if (!newflags[nb]) continue;
        touched = true;
        // remove the DG surface contribution of this face, insert the
        // sub-cell FV fluxes actually used by the flagged neighbor
        const MatX& flux = fv.face_fluxes.at(f);
        if (fi.cl == c) {
          r += faceSL[f];
          for (int se = 0; se < d_.ns; ++se)
            r -= d_.f_phi_center[fi.fl].row(se).transpose() * flux.row(se);
        } else {
          r -= faceSR[f];
          for (int se = 0; se < d_.ns; ++se)
            r += d_.f_phi_center[fi.fr].row(d_.ns - 1 - se).transpose() * flux.row(se);
        }
      }
      unew[c] = touched ? Coeffs(mass1[c].solve(r)) : ustar[c];
    } else {
      const Coeffs& vnew = fv.new_averages.at(c);
      VecX areas(d_.S);
      for (int s = 0; s < d_.S; ++s) {
        const auto& sc = d_.sg.cells[s];
        areas[s] =
            triangle_area(gsn_.presented(xnp1, c, sc[0]), gsn_.presented(xnp1, c, sc[1]),
                          gsn_.presented(xnp1, c, sc[2]));
      }
      Coeffs coef = d_.proj.reconstruct_weighted(vnew, areas);
      const MatX vals = d_.check_phi * coef;
      bool ok = true;
      for (int r2 = 0; r2 < vals.rows() && ok; ++r2)
        if (!is_admissible(vals.row(r2).transpose(), gas)) ok = false;
      if (!ok) {
        // conservative fallback: keep the area-weighted mean only
        const State mean =
            (vnew.transpose() * areas) / areas.sum();
        coef.setZero();
        coef.row(0) = mean.transpose();
      }
      unew[c] = coef;
      newav[c] = vnew;
    }
  }

  // commit
  u_ = std::move(unew);
  averages_ = std::move(newav);
  flags_ = std::move(newflags);
  xprev_ = xn_;
  xn_ = std::move(xnp1);
  dtprev_ = dt;
  t_ += dt;
  total_steps_ += 1;
  total_flagged_ += nflag;
  stats.dt = dt;
  stats.t_new = t_;
  return true;
}

StepStats Solver::step(double dt_max) {
  StepStats stats;
  double dt = dt_max;
  std::string why;
  for (int attempt = 0; attempt <= opt_.max_halvings; ++attempt) {
    stats.rejections = attempt;
    if (try_step(dt, stats, why)) return stats;
    dt *= 0.5;
  }
  throw std::runtime_error("time step rejected after " +
                           std::to_string(opt_.max_halvings) + " halvings: " + why);
}

void Solver::run(double t_end, const std::function<void(const StepStats&)>& on_step) {
  while (t_ < t_end * (1.0 - 1e-14) && std::abs(t_end - t_) > 1e-300) {
    double dt = suggest_timestep();
    bool final_step = false;
    if (t_ + dt >= t_end) {
      dt = t_end - t_;
      final_step = true;
    }
    const StepStats st = step(dt);
    if (final_step && st.rejections == 0) t_ = t_end;
    if (on_step) on_step(st);
  }
}

}  // namespace aledg
