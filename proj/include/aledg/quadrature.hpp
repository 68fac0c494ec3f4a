#pragma once

#include "aledg/types.hpp"

namespace aledg {

/// 1D Gauss-Legendre rule mapped to [0,1]; weights sum to 1.
struct Quad1D {
  VecX x;
  VecX w;
  int size() const { return static_cast<int>(x.size()); }
};

Quad1D gauss_legendre_01(int n);

/// Quadrature on the reference triangle with vertices (0,0), (1,0), (0,1);
/// weights sum to 1/2.
struct TriQuad {
  MatX pts;  // nq x 2
  VecX w;
  int size() const { return static_cast<int>(w.size()); }
};

/// Rule exact for polynomials of total degree <= exactness (collapsed
/// tensor-product construction; all points strictly inside the triangle).
TriQuad triangle_quadrature(int exactness);

/// Legendre polynomial P_n and derivative at x in [-1,1].
void legendre_eval(int n, double x, double& value, double& deriv);

/// Shifted Legendre P_n(2t-1) on [0,1].
double shifted_legendre(int n, double t);

/// Integral over [0,tau] of the shifted Legendre polynomial P_j(2t-1).
double shifted_legendre_antiderivative(int j, double tau);

}  // namespace aledg
