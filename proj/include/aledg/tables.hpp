#pragma once

#include <vector>

#include "aledg/basis.hpp"
#include "aledg/quadrature.hpp"
#include "aledg/subgrid.hpp"
#include "aledg/types.hpp"

namespace aledg {

/// All reference-element machinery for one polynomial degree, computed once
/// at startup: bases, quadrature tables evaluated at every fixed point the
/// predictor/corrector loops touch, the predictor time-lift operator, and
/// the sub-cell projection.
///
/// Row layouts: volume tables stack (tau g, sub-cell s, point q) as
/// r = (g*S + s)*nq + q; face tables stack (tau g, sub-edge e, point a) as
/// r = (g*ns + e)*nq + a.
struct Discretization {
  explicit Discretization(int degree);

  int N;
  PolynomialBasis phi;
  SpaceTimeBasis theta;
  SubGrid sg;
  SubcellProjection proj;

  int nphi, L, K, S, ns;

  // --- predictor ---------------------------------------------------------
  Eigen::PartialPivLU<MatX> K1;  // time-lift operator
  MatX F0;                       // L x nphi
  MatX node_phi;                 // L x nphi, spatial basis at the ST nodes
  MatX node_dthx, node_dthe;     // L x L, theta gradients at the ST nodes
  std::vector<int> node_subcell;
  VecX node_tau;
  MatX node_iota;  // L x (N+1): antiderivative values at node taus

  TriQuad pvol;
  Quad1D ptau;
  int p_rows;                    // ptau.n * S * pvol.n
  MatX p_theta, p_dthx, p_dthe;  // p_rows x L
  VecX p_w;                      // quadrature weight including measure
  MatX ptau_iota;                // ptau.n x (N+1)
  VecX one_iota;                 // antiderivatives at tau = 1

  MatX tint_subnode;     // K x L
  MatX subnode_tauleg;   // (K*(N+1)) x L: tau-Legendre extraction stacked per subnode

  // --- corrector ----------------------------------------------------------
  TriQuad cvol;
  Quad1D ctau;
  int c_rows;
  MatX c_theta, c_dthx, c_dthe;  // c_rows x L
  MatX c_dpx, c_dpe;             // c_rows x nphi: grad phi in sub-cell master frame
  MatX c_lambda;                 // cvol.n x 3 barycentric weights of master points
  VecX c_wmaster;                // cvol.n master weights

  Quad1D fq;   // edge parameter rule
  Quad1D ftau; // face tau rule
  int f_rows;  // ftau.n * ns * fq.n
  std::array<MatX, 3> f_phi;            // per face: (ns*fq.n) x nphi (tau-independent)
  std::array<MatX, 3> f_theta;          // per face: f_rows x L
  std::array<MatX, 3> f_dthx, f_dthe;   // per face: f_rows x L
  std::array<MatX, 3> f_phi_center;     // per face: ns x nphi, at sub-edge midpoints

  std::vector<MatX> mass_sub;  // per sub-cell: nphi x nphi over the master triangle
  MatX phi_int_sub;            // S x nphi: integral of phi over master triangle

  // strong rules for initial projection and error norms
  TriQuad init_quad;
  TriQuad err_quad;

  // basis values at the admissibility check set (sub-nodes + volume points)
  MatX check_phi;

  // --- helpers -------------------------------------------------------------
  /// Reference-subcell edge matrix R_s = [xi2-xi1 | xi3-xi1].
  Mat2 ref_edges(int s) const;

  /// Evaluate the antiderivative row (I_0(tau), ..., I_N(tau)).
  VecX iota(double tau) const;
};

}  // namespace aledg
