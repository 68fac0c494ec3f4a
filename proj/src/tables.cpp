#include "aledg/tables.hpp"

#include <stdexcept>

namespace aledg {

VecX Discretization::iota(double tau) const {
  VecX v(N + 1);
  for (int j = 0; j <= N; ++j) v[j] = shifted_legendre_antiderivative(j, tau);
  return v;
}

Mat2 Discretization::ref_edges(int s) const {
  const auto& c = sg.cells[s];
  const Vec2 a = sg.nodes.row(c[0]), b = sg.nodes.row(c[1]), d = sg.nodes.row(c[2]);
  Mat2 r;
  r.col(0) = b - a;
  r.col(1) = d - a;
  return r;
}

Discretization::Discretization(int degree)
    : N(degree),
      phi(degree),
      theta(degree),
      sg(SubGrid::build(degree)),
      proj(phi, sg),
      nphi(phi.size()),
      L(theta.size()),
      K(sg.n_subnodes),
      S(sg.n_subcells),
      ns(sg.ns) {
  if (degree < 1 || degree > 3) throw std::invalid_argument("degree must be in {1,2,3}");

  // --- predictor time-lift operator and init term -------------------------
  {
    const TriQuad tq = triangle_quadrature(2 * N + 1);
    const Quad1D gl = gauss_legendre_01(N + 1);
    MatX k1 = MatX::Zero(L, L);
    F0 = MatX::Zero(L, nphi);
    for (int m = 0; m < tq.size(); ++m) {
      const Vec2 xi = tq.pts.row(m);
      const VecX th1 = theta.eval(xi, 1.0);
      const VecX th0 = theta.eval(xi, 0.0);
      k1 += tq.w[m] * th1 * th1.transpose();
      F0 += tq.w[m] * th0 * phi.eval(xi).transpose();
      for (int g = 0; g < gl.size(); ++g) {
        const VecX th = theta.eval(xi, gl.x[g]);
        const MatX dth = theta.grad(xi, gl.x[g]);
        k1 -= tq.w[m] * gl.w[g] * dth.col(2) * th.transpose();
      }
    }
    K1.compute(k1);
    if (std::abs(K1.determinant()) < 1e-14)
      throw std::runtime_error("singular predictor time-lift operator");
  }

  // --- node tables ---------------------------------------------------------
  node_phi.resize(L, nphi);
  node_dthx.resize(L, L);
  node_dthe.resize(L, L);
  node_subcell.resize(L);
  node_tau.resize(L);
  node_iota.resize(L, N + 1);
  for (int l = 0; l < L; ++l) {
    const Vec3 nd = theta.nodes()[l];
    const Vec2 xi(nd[0], nd[1]);
    node_phi.row(l) = phi.eval(xi).transpose();
    const MatX g = theta.grad(xi, nd[2]);
    node_dthx.row(l) = g.col(0).transpose();
    node_dthe.row(l) = g.col(1).transpose();
    node_subcell[l] = sg.find_subcell(xi);
    node_tau[l] = nd[2];
    node_iota.row(l) = iota(nd[2]).transpose();
  }

  // --- predictor volume tables --------------------------------------------
  pvol = triangle_quadrature(N + 1);
  ptau = gauss_legendre_01(N + 1);
  const int nq = pvol.size(), ng = ptau.size();
  p_rows = ng * S * nq;
  p_theta.resize(p_rows, L);
  p_dthx.resize(p_rows, L);
  p_dthe.resize(p_rows, L);
  p_w.resize(p_rows);
  ptau_iota.resize(ng, N + 1);
  for (int g = 0; g < ng; ++g) ptau_iota.row(g) = iota(ptau.x[g]).transpose();
  one_iota = iota(1.0);

  const double ref_measure = 1.0 / (ns * ns);  // |det R_s|, equal for all sub-cells
  for (int g = 0; g < ng; ++g)
    for (int s = 0; s < S; ++s) {
      const auto& c = sg.cells[s];
      const Vec2 a = sg.nodes.row(c[0]), b = sg.nodes.row(c[1]), d = sg.nodes.row(c[2]);
      for (int q = 0; q < nq; ++q) {
        const int r = (g * S + s) * nq + q;
        const Vec2 xi = affine_triangle_map(a, b, d, pvol.pts.row(q));
        p_theta.row(r) = theta.eval(xi, ptau.x[g]).transpose();
        const MatX dth = theta.grad(xi, ptau.x[g]);
        p_dthx.row(r) = dth.col(0).transpose();
        p_dthe.row(r) = dth.col(1).transpose();
        p_w[r] = pvol.w[q] * 2.0 * ref_measure * ptau.w[g];
      }
    }

  tint_subnode.resize(K, L);
  subnode_tauleg.resize(K * (N + 1), L);
  for (int k = 0; k < K; ++k) {
    const Vec2 xi = sg.nodes.row(k);
    tint_subnode.row(k) = theta.time_integral(xi).transpose();
    const MatX tl = theta.tau_legendre(xi);  // L x (N+1)
    for (int j = 0; j <= N; ++j) subnode_tauleg.row(k * (N + 1) + j) = tl.col(j).transpose();
  }

  // --- corrector volume tables ----------------------------------------------
  cvol = triangle_quadrature(N + 1);
  ctau = gauss_legendre_01(N + 1);
  const int cnq = cvol.size(), cng = ctau.size();
  c_rows = cng * S * cnq;
  c_theta.resize(c_rows, L);
  c_dthx.resize(c_rows, L);
  c_dthe.resize(c_rows, L);
  c_dpx.resize(c_rows, nphi);
  c_dpe.resize(c_rows, nphi);
  c_lambda.resize(cnq, 3);
  c_wmaster.resize(cnq);
  for (int q = 0; q < cnq; ++q) {
    c_lambda(q, 0) = 1.0 - cvol.pts(q, 0) - cvol.pts(q, 1);
    c_lambda(q, 1) = cvol.pts(q, 0);
    c_lambda(q, 2) = cvol.pts(q, 1);
    c_wmaster[q] = cvol.w[q];
  }
  for (int g = 0; g < cng; ++g)
    for (int s = 0; s < S; ++s) {
      const auto& c = sg.cells[s];
      const Vec2 a = sg.nodes.row(c[0]), b = sg.nodes.row(c[1]), d = sg.nodes.row(c[2]);
      const Mat2 rs = ref_edges(s);
      for (int q = 0; q < cnq; ++q) {
        const int r = (g * S + s) * cnq + q;
        const Vec2 xi = affine_triangle_map(a, b, d, cvol.pts.row(q));
        c_theta.row(r) = theta.eval(xi, ctau.x[g]).transpose();
        const MatX dth = theta.grad(xi, ctau.x[g]);
        c_dthx.row(r) = dth.col(0).transpose();
        c_dthe.row(r) = dth.col(1).transpose();
        const MatX dp = phi.grad(xi);  // global xi frame -> master frame via R_s^T
        for (int l = 0; l < nphi; ++l) {
          const Vec2 gchi = rs.transpose() * Vec2(dp(l, 0), dp(l, 1));
          c_dpx(r, l) = gchi[0];
          c_dpe(r, l) = gchi[1];
        }
      }
    }

  // --- face tables -----------------------------------------------------------
  fq = gauss_legendre_01(N + 1);
  ftau = gauss_legendre_01(N + 1);
  const int fnq = fq.size(), fng = ftau.size();
  f_rows = fng * ns * fnq;
  for (int f = 0; f < 3; ++f) {
    f_phi[f].resize(ns * fnq, nphi);
    f_theta[f].resize(f_rows, L);
    f_dthx[f].resize(f_rows, L);
    f_dthe[f].resize(f_rows, L);
    f_phi_center[f].resize(ns, nphi);
    for (int e = 0; e < ns; ++e) {
      const Vec2 xa = sg.nodes.row(sg.edge_subnodes[f][e]);
      const Vec2 xb = sg.nodes.row(sg.edge_subnodes[f][e + 1]);
      f_phi_center[f].row(e) = phi.eval(0.5 * (xa + xb)).transpose();
      for (int a = 0; a < fnq; ++a) {
        const Vec2 xi = xa + fq.x[a] * (xb - xa);
        f_phi[f].row(e * fnq + a) = phi.eval(xi).transpose();
        for (int g = 0; g < fng; ++g) {
          const int r = (g * ns + e) * fnq + a;
          f_theta[f].row(r) = theta.eval(xi, ftau.x[g]).transpose();
          const MatX dth = theta.grad(xi, ftau.x[g]);
          f_dthx[f].row(r) = dth.col(0).transpose();
          f_dthe[f].row(r) = dth.col(1).transpose();
        }
      }
    }
  }

  // --- sub-cell mass blocks ----------------------------------------------------
  {
    const TriQuad mq = triangle_quadrature(2 * N + 1);
    mass_sub.assign(S, MatX::Zero(nphi, nphi));
    phi_int_sub = MatX::Zero(S, nphi);
    for (int s = 0; s < S; ++s) {
      const auto& c = sg.cells[s];
      const Vec2 a = sg.nodes.row(c[0]), b = sg.nodes.row(c[1]), d = sg.nodes.row(c[2]);
      for (int q = 0; q < mq.size(); ++q) {
        const Vec2 xi = affine_triangle_map(a, b, d, mq.pts.row(q));
        const VecX ph = phi.eval(xi);
        mass_sub[s] += mq.w[q] * ph * ph.transpose();
        phi_int_sub.row(s) += mq.w[q] * ph.transpose();
      }
    }
  }

  init_quad = triangle_quadrature(2 * N + 7);
  err_quad = triangle_quadrature(2 * N + 3);

  {
    std::vector<Vec2> pts;
    for (int k = 0; k < K; ++k) pts.push_back(sg.nodes.row(k));
    for (int s = 0; s < S; ++s) {
      const auto& c = sg.cells[s];
      const Vec2 a = sg.nodes.row(c[0]), b = sg.nodes.row(c[1]), d2 = sg.nodes.row(c[2]);
      for (int q = 0; q < cvol.size(); ++q)
        pts.push_back(affine_triangle_map(a, b, d2, cvol.pts.row(q)));
    }
    check_phi.resize(int(pts.size()), nphi);
    for (size_t i = 0; i < pts.size(); ++i) check_phi.row(int(i)) = phi.eval(pts[i]).transpose();
  }
}

}  // namespace aledg
