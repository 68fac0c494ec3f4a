#pragma once

#include <functional>
#include <string>
#include <vector>

#include "aledg/gas.hpp"
#include "aledg/mesh.hpp"
#include "aledg/predictor.hpp"
#include "aledg/tables.hpp"

namespace aledg {

/// Boundary-condition closures for ghost states.
struct BoundaryContext {
  std::function<State(const Vec2&, double)> dirichlet;      // exact_dirichlet faces
  std::function<Vec2(const Vec2&, double)> wall_velocity;   // moving_wall faces
  double t0 = 0.0;
};

/// One mesh face, owned by its left side (cl < cr, or the boundary cell).
struct FaceInfo {
  int cl = -1, fl = -1;
  int cr = -1, fr = -1;
  BoundaryTag tag = BoundaryTag::Interior;
  Vec2 shift = Vec2::Zero();  // neighbor frame -> owner frame
  double h_nu = 0.0;          // barycenter distance sum for the viscous penalty
};

std::vector<FaceInfo> build_face_list(const TriMesh& mesh);

/// Presented subnode positions of one cell at both time levels; the space-time
/// sub-volumes interpolate linearly in tau between them.
struct CellSnapshot {
  std::vector<Vec2> xn, xnp1;
  double dt = 0.0;
  Vec2 pos(int local, double tau) const { return (1.0 - tau) * xn[local] + tau * xnp1[local]; }
};

/// ALE Rusanov flux in space-time normal direction. `n_st` carries the
/// surface measure; its time component encodes the normal mesh velocity.
/// Returns G . n_st. `eta` is the viscous penalty (2N+1)/h_nu (0 if inviscid).
State ale_rusanov_flux(const State& qm, const StateGrad& gim, const State& qp,
                       const StateGrad& gip, const Vec3& n_st, const GasModel& gas,
                       double eta);

/// Mass matrix of the cell at tau = 0 or 1, assembled sub-cell-wise on the
/// piecewise linear geometry. Entries are exact for the polynomial basis.
MatX cell_mass_matrix(const Discretization& d, const CellSnapshot& g, double tau);

/// Space-time volume term: \int grad~phi_k . F~(q_h, grad q_h) over all
/// sub-volumes of the cell (nphi x 4).
Coeffs cell_volume_term(const Discretization& d, const CellSnapshot& g,
                        const PredictorSolution& pred, const GasModel& gas, bool* ok);

/// Max over test functions of | surface - volume | in the discrete geometric
/// conservation identity, computed with the scheme's own quadrature.
double cell_gcl_residual(const Discretization& d, const CellSnapshot& g);

struct FaceFluxResult {
  MatX SL, SR;  // contracted surface integrals, nphi x 4 (SR unused at boundaries)
  bool ok = true;
  std::string error;
};

/// Evaluates the ALE Rusanov flux over all space-time sub-faces of one mesh
/// face (owner parametrization; n_st outward from the owner) and contracts it
/// with both sides' test functions. The owner cell consumes +SL, the neighbor
/// -SR, which keeps interior fluxes single-valued by construction.
FaceFluxResult compute_face_flux(const Discretization& d, const FaceInfo& face,
                                 const CellSnapshot& gl, const PredictorSolution& pl,
                                 const CellSnapshot* gr, const PredictorSolution* pr,
                                 const GasModel& gas, const BoundaryContext& bc);

/// CFL time step from cell-mean states on the t^n geometry.
double compute_timestep(const Discretization& d, const TriMesh& mesh,
                        const GlobalSubnodes& gsn, const std::vector<Vec2>& xn,
                        const std::vector<Coeffs>& coeffs, const GasModel& gas, double cfl);

/// Ghost state for a boundary face. `n` is the outward unit normal, `vgeo`
/// the local face velocity, `x`/`t` the quadrature point.
State boundary_ghost_state(const State& inner, BoundaryTag tag, const Vec2& n,
                           const Vec2& vgeo, const Vec2& x, double t,
                           const BoundaryContext& bc);

}  // namespace aledg
