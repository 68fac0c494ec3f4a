#include "aledg/basis.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace aledg {

namespace {

// Jacobi polynomial P_n^{(a,b)} and derivative at x.
void jacobi_eval(int n, double a, double b, double x, double& value, double& deriv) {
  if (n == 0) {
    value = 1.0;
    deriv = 0.0;
    return;
  }
  double p0 = 1.0;
  double p1 = 0.5 * (a + b + 2.0) * x + 0.5 * (a - b);
  for (int k = 2; k <= n; ++k) {
    const double a1 = 2.0 * k * (k + a + b) * (2.0 * k + a + b - 2.0);
    const double a2 = (2.0 * k + a + b - 1.0) * (a * a - b * b);
    const double a3 = (2.0 * k + a + b - 1.0) * (2.0 * k + a + b) * (2.0 * k + a + b - 2.0);
    const double a4 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * (2.0 * k + a + b);
    const double p2 = ((a2 + a3 * x) * p1 - a4 * p0) / a1;
    p0 = p1;
    p1 = p2;
  }
  value = p1;
  double v1, d1;
  if (n == 1) {
    deriv = 0.5 * (a + b + 2.0);
    return;
  }
  jacobi_eval(n - 1, a + 1.0, b + 1.0, x, v1, d1);
  deriv = 0.5 * (n + a + b + 1.0) * v1;
}

// Value and (d/dxi, d/deta) of the scaled factor P_p(s/t) t^p with
// s = 2 xi + eta - 1, t = 1 - eta, evaluated division-free so the basis is
// well defined up to eta = 1.
void scaled_legendre_factor(int p, const Vec2& xi, double& v, double& dx, double& dy) {
  const double s = 2.0 * xi[0] + xi[1] - 1.0;
  const double t = 1.0 - xi[1];
  // dual numbers carrying (value, d/dxi, d/deta)
  double f0 = 1.0, f0x = 0.0, f0y = 0.0;
  double f1 = s, f1x = 2.0, f1y = 1.0;
  if (p == 0) {
    v = f0;
    dx = f0x;
    dy = f0y;
    return;
  }
  for (int k = 2; k <= p; ++k) {
    // k f_k = (2k-1) s f_{k-1} - (k-1) t^2 f_{k-2}
    const double c1 = (2.0 * k - 1.0) / k, c2 = (k - 1.0) / k;
    const double g = c1 * (s * f1) - c2 * (t * t * f0);
    const double gx = c1 * (2.0 * f1 + s * f1x) - c2 * (t * t * f0x);
    const double gy = c1 * (f1 + s * f1y) - c2 * (-2.0 * t * f0 + t * t * f0y);
    f0 = f1;
    f0x = f1x;
    f0y = f1y;
    f1 = g;
    f1x = gx;
    f1y = gy;
  }
  v = f1;
  dx = f1x;
  dy = f1y;
}

void dubiner_mode(int p, int q, const Vec2& xi, double& v, double& dx, double& dy) {
  double a, ax, ay;
  scaled_legendre_factor(p, xi, a, ax, ay);
  double b, db;
  jacobi_eval(q, 2.0 * p + 1.0, 0.0, 2.0 * xi[1] - 1.0, b, db);
  v = a * b;
  dx = ax * b;
  dy = ay * b + a * 2.0 * db;
}

}  // namespace

PolynomialBasis::PolynomialBasis(int degree) : degree_(degree) {
  if (degree < 0 || degree > 7) throw std::invalid_argument("basis degree out of range");
  for (int d = 0; d <= degree; ++d)
    for (int q = 0; q <= d; ++q) pq_.emplace_back(d - q, q);

  // Normalize: constant mode stays 1, higher modes get unit L2 norm.
  const int n = size();
  scale_ = VecX::Ones(n);
  const TriQuad quad = triangle_quadrature(2 * degree + 1);
  for (int l = 1; l < n; ++l) {
    double nrm2 = 0.0;
    for (int m = 0; m < quad.size(); ++m) {
      double v, dx, dy;
      dubiner_mode(pq_[l].first, pq_[l].second, quad.pts.row(m), v, dx, dy);
      nrm2 += quad.w[m] * v * v;
    }
    scale_[l] = 1.0 / std::sqrt(nrm2);
  }
  mass_diag_ = VecX::Ones(n);
  mass_diag_[0] = 0.5;
}

VecX PolynomialBasis::eval(const Vec2& xi) const {
  VecX out(size());
  for (int l = 0; l < size(); ++l) {
    double v, dx, dy;
    dubiner_mode(pq_[l].first, pq_[l].second, xi, v, dx, dy);
    out[l] = scale_[l] * v;
  }
  return out;
}

MatX PolynomialBasis::grad(const Vec2& xi) const {
  MatX out(size(), 2);
  for (int l = 0; l < size(); ++l) {
    double v, dx, dy;
    dubiner_mode(pq_[l].first, pq_[l].second, xi, v, dx, dy);
    out(l, 0) = scale_[l] * dx;
    out(l, 1) = scale_[l] * dy;
  }
  return out;
}

SpaceTimeBasis::SpaceTimeBasis(int degree) : degree_(degree), tri_(degree) {
  if (degree < 1 || degree > 4) throw std::invalid_argument("space-time degree out of range");

  for (int m = 0; m < tri_.size(); ++m)
    for (int j = 0; tri_.mode_degree(m) + j <= degree; ++j) modes_.emplace_back(m, j);

  // Node set: spatial lattice point (k/N, p/N) carries N+1-(k+p) GL points in tau.
  for (int p = 0; p <= degree; ++p)
    for (int k = 0; k <= degree - p; ++k) {
      const int stack = degree + 1 - k - p;
      const Quad1D gl = gauss_legendre_01(stack);
      for (int j = 0; j < stack; ++j)
        nodes_.emplace_back(double(k) / degree, double(p) / degree, gl.x[j]);
    }
  const int L = size();
  assert(int(modes_.size()) == L);
  assert(L == (degree + 1) * (degree + 2) * (degree + 3) / 6);

  MatX vand(L, L);
  for (int l = 0; l < L; ++l)
    vand.col(l) = eval_modal(Vec2(nodes_[l][0], nodes_[l][1]), nodes_[l][2]);
  Eigen::FullPivLU<MatX> lu(vand);
  if (!lu.isInvertible())
    throw std::runtime_error("space-time interpolation nodes are not unisolvent");
  coeff_ = lu.inverse().transpose();  // theta_l = sum_m coeff_(m,l) chi_m
}

VecX SpaceTimeBasis::eval_modal(const Vec2& xi, double tau) const {
  const VecX phi = tri_.eval(xi);
  VecX chi(size());
  for (size_t i = 0; i < modes_.size(); ++i)
    chi[i] = phi[modes_[i].first] * shifted_legendre(modes_[i].second, tau);
  return chi;
}

VecX SpaceTimeBasis::eval(const Vec2& xi, double tau) const {
  return coeff_.transpose() * eval_modal(xi, tau);
}

MatX SpaceTimeBasis::grad(const Vec2& xi, double tau) const {
  const VecX phi = tri_.eval(xi);
  const MatX dphi = tri_.grad(xi);
  const int L = size();
  MatX dchi(L, 3);
  for (int i = 0; i < L; ++i) {
    const int m = modes_[i].first, j = modes_[i].second;
    double v, d;
    legendre_eval(j, 2.0 * tau - 1.0, v, d);
    dchi(i, 0) = dphi(m, 0) * v;
    dchi(i, 1) = dphi(m, 1) * v;
    dchi(i, 2) = phi[m] * 2.0 * d;
  }
  return coeff_.transpose() * dchi;
}

VecX SpaceTimeBasis::time_integral(const Vec2& xi) const {
  // shifted Legendre polynomials integrate to delta_{j0} over [0,1]
  const VecX phi = tri_.eval(xi);
  VecX chi = VecX::Zero(size());
  for (size_t i = 0; i < modes_.size(); ++i)
    if (modes_[i].second == 0) chi[i] = phi[modes_[i].first];
  return coeff_.transpose() * chi;
}

MatX SpaceTimeBasis::tau_legendre(const Vec2& xi) const {
  const VecX phi = tri_.eval(xi);
  MatX out = MatX::Zero(size(), degree_ + 1);
  for (int l = 0; l < size(); ++l)
    for (size_t i = 0; i < modes_.size(); ++i)
      out(l, modes_[i].second) += coeff_(i, l) * phi[modes_[i].first];
  return out;
}

SubcellProjection::SubcellProjection(const PolynomialBasis& basis, const SubGrid& sg) {
  const TriQuad quad = triangle_quadrature(basis.degree() + 1);
  proj_ = MatX::Zero(sg.n_subcells, basis.size());
  for (int s = 0; s < sg.n_subcells; ++s) {
    const auto& c = sg.cells[s];
    const Vec2 a = sg.nodes.row(c[0]), b = sg.nodes.row(c[1]), d = sg.nodes.row(c[2]);
    for (int m = 0; m < quad.size(); ++m) {
      const Vec2 xi = affine_triangle_map(a, b, d, quad.pts.row(m));
      proj_.row(s) += 2.0 * quad.w[m] * basis.eval(xi).transpose();
    }
  }
  // rows above are means: the affine Jacobian cancels against the sub-cell area
  ref_weights_ = VecX::Constant(sg.n_subcells, 1.0 / sg.n_subcells);
}

MatX SubcellProjection::reconstruct(const MatX& averages) const {
  return reconstruct_weighted(averages, ref_weights_);
}

MatX SubcellProjection::reconstruct_weighted(const MatX& averages, const VecX& areas) const {
  const int n = int(proj_.cols());
  const int nv = int(averages.cols());
  VecX w = areas / areas.sum();
  const VecX a = proj_.transpose() * w;
  MatX kkt = MatX::Zero(n + 1, n + 1);
  kkt.topLeftCorner(n, n) = 2.0 * proj_.transpose() * proj_;
  kkt.col(n).head(n) = a;
  kkt.row(n).head(n) = a.transpose();
  MatX rhs(n + 1, nv);
  rhs.topRows(n) = 2.0 * proj_.transpose() * averages;
  rhs.bottomRows(1) = w.transpose() * averages;
  const MatX sol = Eigen::PartialPivLU<MatX>(kkt).solve(rhs);
  return sol.topRows(n);
}

}  // namespace aledg
