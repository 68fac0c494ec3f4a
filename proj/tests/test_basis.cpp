#include <doctest.h>

#include <random>

#include "aledg/basis.hpp"
#include "aledg/quadrature.hpp"
#include "aledg/subgrid.hpp"

using namespace aledg;

namespace {

// Exact integral of xi^a eta^b over the unit triangle: a! b! / (a+b+2)!.
double monomial_integral(int a, int b) {
  double v = 1.0;
  for (int k = 1; k <= a; ++k) v *= k;
  for (int k = 1; k <= b; ++k) v *= k;
  for (int k = 1; k <= a + b + 2; ++k) v /= k;
  return v;
}

// Independent symbolic-style oracle: recover the monomial coefficients of a
// polynomial from point evaluations, then integrate each monomial exactly.
double integrate_product_symbolically(const PolynomialBasis& basis, int k, int l) {
  const int deg = 2 * basis.degree();
  std::vector<std::pair<int, int>> monos;
  for (int d = 0; d <= deg; ++d)
    for (int b = 0; b <= d; ++b) monos.emplace_back(d - b, b);
  const int n = int(monos.size());

  std::mt19937 rng(1234);
  std::uniform_real_distribution<double> uni(0.05, 0.95);
  MatX V(2 * n, n);
  VecX rhs(2 * n);
  for (int r = 0; r < 2 * n; ++r) {
    Vec2 xi;
    do {
      xi = Vec2(uni(rng), uni(rng));
    } while (xi[0] + xi[1] > 0.95);
    for (int c = 0; c < n; ++c)
      V(r, c) = std::pow(xi[0], monos[c].first) * std::pow(xi[1], monos[c].second);
    const VecX phi = basis.eval(xi);
    rhs[r] = phi[k] * phi[l];
  }
  const VecX coef = V.colPivHouseholderQr().solve(rhs);
  double integral = 0.0;
  for (int c = 0; c < n; ++c)
    integral += coef[c] * monomial_integral(monos[c].first, monos[c].second);
  return integral;
}

}  // namespace

TEST_CASE("quadrature integrates monomials exactly") {
  for (int p = 1; p <= 9; ++p) {
    const TriQuad q = triangle_quadrature(p);
    for (int a = 0; a + 0 <= p; ++a)
      for (int b = 0; a + b <= p; ++b) {
        double s = 0.0;
        for (int m = 0; m < q.size(); ++m)
          s += q.w[m] * std::pow(q.pts(m, 0), a) * std::pow(q.pts(m, 1), b);
        CHECK(s == doctest::Approx(monomial_integral(a, b)).epsilon(1e-13));
      }
  }
}

TEST_CASE("gauss-legendre on [0,1]") {
  for (int n = 1; n <= 8; ++n) {
    const Quad1D q = gauss_legendre_01(n);
    for (int p = 0; p <= 2 * n - 1; ++p) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += q.w[i] * std::pow(q.x[i], p);
      CHECK(s == doctest::Approx(1.0 / (p + 1)).epsilon(1e-13));
    }
  }
}

TEST_CASE("basis size and constant mode") {
  CHECK(PolynomialBasis(3).size() == 10);
  const PolynomialBasis b0(0);
  CHECK(b0.size() == 1);
  CHECK(b0.eval(Vec2(0.3, 0.2))[0] == doctest::Approx(1.0));
  CHECK(PolynomialBasis(2).eval(Vec2(0.11, 0.47))[0] == doctest::Approx(1.0));
}

TEST_CASE("basis orthogonality against symbolic integration") {
  const PolynomialBasis basis(2);
  for (int k = 0; k < basis.size(); ++k)
    for (int l = 0; l <= k; ++l) {
      const double exact = integrate_product_symbolically(basis, k, l);
      if (k != l)
        CHECK(std::abs(exact) < 1e-10);
      else
        CHECK(exact == doctest::Approx(basis.mass_diagonal()[k]).epsilon(1e-9));
    }
}

TEST_CASE("mass matrix diagonal for all supported degrees") {
  for (int n = 0; n <= 3; ++n) {
    const PolynomialBasis basis(n);
    const TriQuad q = triangle_quadrature(2 * n + 1);
    MatX mass = MatX::Zero(basis.size(), basis.size());
    for (int m = 0; m < q.size(); ++m) {
      const VecX phi = basis.eval(q.pts.row(m));
      mass += q.w[m] * phi * phi.transpose();
    }
    for (int k = 0; k < basis.size(); ++k)
      for (int l = 0; l < basis.size(); ++l) {
        if (k == l)
          CHECK(mass(k, l) == doctest::Approx(basis.mass_diagonal()[k]).epsilon(1e-12));
        else
          CHECK(std::abs(mass(k, l)) < 1e-12);
      }
  }
}

TEST_CASE("basis gradients match finite differences") {
  const PolynomialBasis basis(3);
  const Vec2 xi(0.21, 0.33);
  const double h = 1e-6;
  const MatX g = basis.grad(xi);
  for (int d = 0; d < 2; ++d) {
    Vec2 dp = Vec2::Zero(), dm = Vec2::Zero();
    dp[d] = h;
    dm[d] = -h;
    const VecX fd = (basis.eval(xi + dp) - basis.eval(xi + dm)) / (2 * h);
    for (int l = 0; l < basis.size(); ++l)
      CHECK(g(l, d) == doctest::Approx(fd[l]).epsilon(1e-6));
  }
}

TEST_CASE("basis well-defined on the collapsed edge eta=1") {
  const PolynomialBasis basis(3);
  const VecX v = basis.eval(Vec2(0.0, 1.0));
  CHECK(v.allFinite());
  CHECK(v[0] == doctest::Approx(1.0));
  CHECK(basis.grad(Vec2(0.0, 1.0)).allFinite());
}

TEST_CASE("space-time basis dof counts and lagrange property") {
  CHECK(SpaceTimeBasis(2).size() == 10);
  CHECK(SpaceTimeBasis(1).size() == 4);
  CHECK(SpaceTimeBasis(3).size() == 20);
  for (int n = 1; n <= 3; ++n) {
    const SpaceTimeBasis st(n);
    for (int l = 0; l < st.size(); ++l) {
      const Vec3 node = st.nodes()[l];
      const VecX th = st.eval(Vec2(node[0], node[1]), node[2]);
      for (int m = 0; m < st.size(); ++m)
        CHECK(th[m] == doctest::Approx(l == m ? 1.0 : 0.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("space-time basis partition of unity at random points") {
  const SpaceTimeBasis st(3);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Vec2 xi(uni(rng), uni(rng));
    if (xi[0] + xi[1] > 1.0) xi = Vec2(1.0 - xi[0], 1.0 - xi[1]);
    const double tau = uni(rng);
    CHECK(st.eval(xi, tau).sum() == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(st.time_integral(xi).sum() == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("space-time time integral against quadrature") {
  const SpaceTimeBasis st(2);
  const Vec2 xi(0.4, 0.3);
  const Quad1D q = gauss_legendre_01(5);
  VecX ref = VecX::Zero(st.size());
  for (int i = 0; i < q.size(); ++i) ref += q.w[i] * st.eval(xi, q.x[i]);
  const VecX ti = st.time_integral(xi);
  for (int l = 0; l < st.size(); ++l) CHECK(ti[l] == doctest::Approx(ref[l]).epsilon(1e-12));
}

TEST_CASE("space-time tau-legendre expansion") {
  const SpaceTimeBasis st(3);
  const Vec2 xi(0.25, 0.5);
  const MatX c = st.tau_legendre(xi);
  for (double tau : {0.0, 0.37, 1.0}) {
    const VecX direct = st.eval(xi, tau);
    for (int l = 0; l < st.size(); ++l) {
      double s = 0.0;
      for (int j = 0; j <= st.degree(); ++j) s += c(l, j) * shifted_legendre(j, tau);
      CHECK(s == doctest::Approx(direct[l]).epsilon(1e-11));
    }
  }
}

TEST_CASE("subcell projection basics") {
  for (int n = 1; n <= 3; ++n) {
    const PolynomialBasis basis(n);
    const SubGrid sg = SubGrid::build(n);
    const SubcellProjection proj(basis, sg);
    if (n == 1) CHECK(proj.matrix().rows() == 9);

    // constant state -> all averages equal
    MatX coeffs = MatX::Zero(basis.size(), 1);
    coeffs(0, 0) = 3.7;
    const MatX av = proj.matrix() * coeffs;
    for (int s = 0; s < sg.n_subcells; ++s) CHECK(av(s, 0) == doctest::Approx(3.7).epsilon(1e-13));
  }
}

TEST_CASE("projection of linear field gives centroid values") {
  const int n = 2;
  const PolynomialBasis basis(n);
  const SubGrid sg = SubGrid::build(n);
  const SubcellProjection proj(basis, sg);

  // express u(xi) = xi in the modal basis by L2 projection (exact for degree 1)
  const TriQuad q = triangle_quadrature(2 * n + 1);
  VecX rhs = VecX::Zero(basis.size());
  for (int m = 0; m < q.size(); ++m) rhs += q.w[m] * q.pts(m, 0) * basis.eval(q.pts.row(m));
  MatX coeffs(basis.size(), 1);
  coeffs.col(0) = rhs.cwiseQuotient(basis.mass_diagonal());

  const MatX av = proj.matrix() * coeffs;
  for (int s = 0; s < sg.n_subcells; ++s) {
    const auto& c = sg.cells[s];
    const double cx = (sg.nodes(c[0], 0) + sg.nodes(c[1], 0) + sg.nodes(c[2], 0)) / 3.0;
    CHECK(av(s, 0) == doctest::Approx(cx).epsilon(1e-12));
  }
}

TEST_CASE("reconstruction is a left inverse of projection") {
  std::mt19937 rng(99);
  std::normal_distribution<double> gauss;
  for (int n = 1; n <= 3; ++n) {
    const PolynomialBasis basis(n);
    const SubGrid sg = SubGrid::build(n);
    const SubcellProjection proj(basis, sg);
    MatX coeffs(basis.size(), 4);
    for (int i = 0; i < coeffs.size(); ++i) coeffs.data()[i] = gauss(rng);
    const MatX rec = proj.reconstruct(proj.matrix() * coeffs);
    CHECK((rec - coeffs).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("reconstruction of constant averages is the constant") {
  const PolynomialBasis basis(2);
  const SubGrid sg = SubGrid::build(2);
  const SubcellProjection proj(basis, sg);
  const MatX rec = proj.reconstruct(MatX::Constant(sg.n_subcells, 1, 2.5));
  CHECK(rec(0, 0) == doctest::Approx(2.5).epsilon(1e-13));
  CHECK(rec.bottomRows(rec.rows() - 1).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("reconstruction conserves the cell mean of random averages") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> uni(0.5, 2.0);
  const PolynomialBasis basis(3);
  const SubGrid sg = SubGrid::build(3);
  const SubcellProjection proj(basis, sg);
  MatX av(sg.n_subcells, 1);
  for (int s = 0; s < sg.n_subcells; ++s) av(s, 0) = uni(rng);
  const MatX rec = proj.reconstruct(av);

  // oracle: integrate the reconstruction directly with quadrature
  const TriQuad q = triangle_quadrature(2 * 3 + 1);
  double integral = 0.0;
  for (int m = 0; m < q.size(); ++m) integral += q.w[m] * basis.eval(q.pts.row(m)).dot(rec.col(0));
  CHECK(integral * 2.0 == doctest::Approx(av.mean()).epsilon(1e-13));

  // weighted variant: area-weighted mean of the back-projected averages
  // equals the area-weighted mean of the inputs (physical conservation)
  VecX areas(sg.n_subcells);
  for (int s = 0; s < sg.n_subcells; ++s) areas[s] = 1.0 + 0.3 * std::sin(s * 1.7);
  const MatX rec2 = proj.reconstruct_weighted(av, areas);
  const MatX back = proj.matrix() * rec2;
  const double got = areas.dot(back.col(0)) / areas.sum();
  const double want = areas.dot(av.col(0)) / areas.sum();
  CHECK(got == doctest::Approx(want).epsilon(1e-12));
}
