#include "aledg/quadrature.hpp"

#include <cassert>
#include <cmath>

namespace aledg {

void legendre_eval(int n, double x, double& value, double& deriv) {
  double p0 = 1.0, p1 = x;
  if (n == 0) {
    value = 1.0;
    deriv = 0.0;
    return;
  }
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  value = p1;
  // (1-x^2) P_n' = n (P_{n-1} - x P_n)
  if (std::abs(1.0 - x * x) > 1e-14)
    deriv = n * (p0 - x * p1) / (1.0 - x * x);
  else
    deriv = 0.5 * n * (n + 1) * (x > 0 ? 1.0 : ((n - 1) % 2 ? -1.0 : 1.0));
}

double shifted_legendre(int n, double t) {
  double v, d;
  legendre_eval(n, 2.0 * t - 1.0, v, d);
  return v;
}

double shifted_legendre_antiderivative(int j, double tau) {
  const double x = 2.0 * tau - 1.0;
  if (j == 0) return tau;
  // int P_j = (P_{j+1} - P_{j-1}) / (2j+1); both vanish at x = -1 for j >= 1.
  double vp, vm, d;
  legendre_eval(j + 1, x, vp, d);
  legendre_eval(j - 1, x, vm, d);
  return 0.5 * (vp - vm) / (2 * j + 1);
}

Quad1D gauss_legendre_01(int n) {
  assert(n >= 1);
  Quad1D q;
  q.x.resize(n);
  q.w.resize(n);
  for (int i = 0; i < n; ++i) {
    // Chebyshev initial guess, Newton refinement.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double v = 0, d = 0;
    for (int it = 0; it < 100; ++it) {
      legendre_eval(n, x, v, d);
      const double dx = v / d;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    legendre_eval(n, x, v, d);
    const double w = 2.0 / ((1.0 - x * x) * d * d);
    q.x[n - 1 - i] = 0.5 * (x + 1.0);
    q.w[n - 1 - i] = 0.5 * w;
  }
  // enforce exact reflection symmetry so reversed tables hit identical points
  for (int i = 0; i < n / 2; ++i) {
    const double xm = 0.5 * (q.x[i] + 1.0 - q.x[n - 1 - i]);
    q.x[i] = xm;
    q.x[n - 1 - i] = 1.0 - xm;
    const double wm = 0.5 * (q.w[i] + q.w[n - 1 - i]);
    q.w[i] = wm;
    q.w[n - 1 - i] = wm;
  }
  return q;
}

TriQuad triangle_quadrature(int exactness) {
  // xi = u (1 - v), eta = v on [0,1]^2 with Jacobian (1 - v):
  // the u-rule needs exactness p, the v-rule p+1.
  const int nu = (exactness + 2) / 2;
  const int nv = (exactness + 3) / 2;
  const Quad1D qu = gauss_legendre_01(nu);
  const Quad1D qv = gauss_legendre_01(nv);
  TriQuad t;
  t.pts.resize(nu * nv, 2);
  t.w.resize(nu * nv);
  int m = 0;
  for (int j = 0; j < nv; ++j)
    for (int i = 0; i < nu; ++i, ++m) {
      const double v = qv.x[j];
      t.pts(m, 0) = qu.x[i] * (1.0 - v);
      t.pts(m, 1) = v;
      t.w[m] = qu.w[i] * qv.w[j] * (1.0 - v);
    }
  return t;
}

}  // namespace aledg
