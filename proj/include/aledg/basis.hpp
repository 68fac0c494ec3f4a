#pragma once

#include <utility>
#include <vector>

#include "aledg/quadrature.hpp"
#include "aledg/subgrid.hpp"
#include "aledg/types.hpp"

namespace aledg {

/// Orthogonal modal (Dubiner-type) basis on the reference triangle
/// (0,0),(1,0),(0,1). The first mode is the constant 1; higher modes are
/// scaled to unit L2 norm. Modes are ordered by total degree.
class PolynomialBasis {
 public:
  explicit PolynomialBasis(int degree);

  int degree() const { return degree_; }
  int size() const { return int(pq_.size()); }
  int mode_degree(int l) const { return pq_[l].first + pq_[l].second; }

  VecX eval(const Vec2& xi) const;
  MatX grad(const Vec2& xi) const;  // size() x 2

  /// Diagonal of the reference mass matrix.
  const VecX& mass_diagonal() const { return mass_diag_; }

 private:
  int degree_;
  std::vector<std::pair<int, int>> pq_;
  VecX scale_;
  VecX mass_diag_;
};

/// Nodal (Lagrange) basis of total degree N on the space-time reference
/// element T_E x [0,1]. Nodes stack Gauss-Legendre points in tau over the
/// degree-N triangle lattice, one stack of size N+1-|lattice layer| per
/// spatial point; unisolvency is asserted at construction.
class SpaceTimeBasis {
 public:
  explicit SpaceTimeBasis(int degree);

  int degree() const { return degree_; }
  int size() const { return int(nodes_.size()); }
  const std::vector<Vec3>& nodes() const { return nodes_; }

  VecX eval(const Vec2& xi, double tau) const;
  MatX grad(const Vec2& xi, double tau) const;  // size() x 3

  /// \int_0^1 theta_l(xi, tau) dtau for all l.
  VecX time_integral(const Vec2& xi) const;

  /// theta_l(xi, .) expressed as a shifted-Legendre series in tau:
  /// returns size() x (N+1) coefficients.
  MatX tau_legendre(const Vec2& xi) const;

 private:
  VecX eval_modal(const Vec2& xi, double tau) const;

  int degree_;
  PolynomialBasis tri_;
  std::vector<std::pair<int, int>> modes_;  // (spatial mode, Legendre degree)
  std::vector<Vec3> nodes_;
  MatX coeff_;  // modal-to-nodal: theta_l = sum_m coeff_(m,l) chi_m
};

/// Projection onto piecewise-constant sub-cell averages and its
/// conservative least-squares inverse.
class SubcellProjection {
 public:
  SubcellProjection(const PolynomialBasis& basis, const SubGrid& sg);

  /// S x nphi matrix; row j integrates the basis over reference sub-cell j
  /// divided by its reference area. Averages = matrix() * coeffs.
  const MatX& matrix() const { return proj_; }

  /// Constrained least-squares reconstruction with uniform (reference)
  /// sub-cell weights in the conservation constraint.
  MatX reconstruct(const MatX& averages) const;

  /// Same, with the conservation constraint weighted by the given physical
  /// sub-cell areas.
  MatX reconstruct_weighted(const MatX& averages, const VecX& areas) const;

 private:
  MatX proj_;
  VecX ref_weights_;
};

}  // namespace aledg
