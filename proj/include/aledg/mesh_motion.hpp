#pragma once

#include <functional>
#include <vector>

#include "aledg/gas.hpp"
#include "aledg/mesh.hpp"
#include "aledg/predictor.hpp"
#include "aledg/tables.hpp"

namespace aledg {

/// Everything the nodal solver and the mesh-quality machinery need to see.
struct MotionContext {
  const Discretization* d = nullptr;
  const TriMesh* mesh = nullptr;
  const GlobalSubnodes* gsn = nullptr;
  const GasModel* gas = nullptr;
  MotionMode mode = MotionMode::Lagrangian;
  PrescribedVelocity prescribed;
  std::function<Vec2(const Vec2&, double)> wall_velocity;  // moving walls
  double t0 = 0.0;
};

/// HLL intermediate state between two states across a face with outward
/// (unit) normal n of the left side.
State hll_state(const State& ql, const State& qr, const Vec2& n, const GasModel& gas);

struct NodalSolverInput {
  const std::vector<PredictorSolution>* preds = nullptr;
  const std::vector<char>* flags = nullptr;           // MOOD indicator b_i (previous step)
  const std::vector<Coeffs>* averages = nullptr;      // sub-cell averages for flagged cells
};

/// One velocity vector per global sub-node: arithmetic-average states at
/// vertices, HLL states at face sub-nodes, a local P1 Laplace solve for the
/// internal ones, with wall constraints applied to boundary sub-nodes.
std::vector<Vec2> solve_node_velocities(const MotionContext& ctx, const std::vector<Vec2>& xn,
                                        const NodalSolverInput& in);

std::vector<Vec2> lagrangian_positions(const std::vector<Vec2>& xn,
                                       const std::vector<Vec2>& vbar, double dt);

/// Condition-number quality optimization of the interior sub-nodes
/// (3 Gauss-Seidel sweeps of local 2D Newton with an area-positivity line
/// search); boundary sub-nodes stay at their Lagrangian positions. Each
/// node keeps its Lagrangian position unless the patch minimum sub-cell
/// area does not degrade.
std::vector<Vec2> rezone(const MotionContext& ctx, const std::vector<Vec2>& xlag);

struct RelaxSpec {
  enum class Kind { Deformation, Constant, Lagrange } kind = Kind::Deformation;
  double omega0 = 0.7;  // used by Kind::Constant
};

/// Blends Lagrangian and rezoned positions, X = XLag + omega (XRez - XLag),
/// with omega from the local deformation gradient (or constant / zero).
/// Returns the per-node omega.
std::vector<double> relax(const MotionContext& ctx, const std::vector<Vec2>& xn,
                          const std::vector<Vec2>& xlag, const std::vector<Vec2>& xrez,
                          const RelaxSpec& spec, std::vector<Vec2>& xnp1);

/// True iff every presented sub-cell has positive area.
bool snapshot_valid(const MotionContext& ctx, const std::vector<Vec2>& x);

/// P1 finite-element Laplace solve for the internal sub-node velocities of
/// one cell, given Dirichlet data on its vertex/face sub-nodes (exposed for
/// testing; `positions`/`velocity` are per local sub-node).
void laplace_internal_velocities(const Discretization& d, const std::vector<Vec2>& positions,
                                 std::vector<Vec2>& velocity);

/// Condition-number quality kappa^2 = ||J||_F^4 / det(J)^2 of a triangle
/// against the equilateral target.
double subcell_quality(const Vec2& a, const Vec2& b, const Vec2& c);

}  // namespace aledg
