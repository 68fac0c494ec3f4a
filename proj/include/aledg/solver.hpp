#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "aledg/dg_scheme.hpp"
#include "aledg/limiter.hpp"
#include "aledg/mesh.hpp"
#include "aledg/mesh_motion.hpp"
#include "aledg/predictor.hpp"
#include "aledg/tables.hpp"

namespace aledg {

struct SolverOptions {
  int order = 2;
  double cfl = 0.5;
  GasModel gas;
  MotionMode motion = MotionMode::Lagrangian;
  RelaxSpec relax;
  DetectionParams detection;
  int max_halvings = 10;
};

/// Case-supplied closures (any may be empty when unused by the mesh tags).
struct CaseHooks {
  std::function<State(const Vec2&, double)> dirichlet;
  std::function<Vec2(const Vec2&, double)> wall_velocity;
  PrescribedVelocity prescribed;
};

struct StepStats {
  double t_new = 0;
  double dt = 0;
  int rejections = 0;
  int flagged = 0;
  int predictor_iterations_max = 0;
};

/// One-step ALE ADER-DG driver: predictor, nodal solver, mesh motion, DG
/// corrector, a-posteriori sub-cell limiting, conservative neighbor fixup.
class Solver {
 public:
  Solver(TriMesh mesh, const SolverOptions& opt, CaseHooks hooks = {});

  /// L2-projects the initial condition (conserved variables) onto the DG
  /// space; cells whose projection is pointwise inadmissible are flattened
  /// to their mean.
  void set_initial(const std::function<State(const Vec2&)>& u0);

  /// Overwrites one cell with a constant state (point energy deposits).
  void set_cell_state(int cell, const State& q);

  double suggest_timestep() const;

  /// Advances one time step of size at most dt_max (halving on rejection).
  StepStats step(double dt_max);

  /// Runs to t_end exactly; `on_step` (optional) fires after every step.
  void run(double t_end, const std::function<void(const StepStats&)>& on_step = {});

  // --- observation ---------------------------------------------------------
  double time() const { return t_; }
  const Discretization& disc() const { return d_; }
  const TriMesh& mesh() const { return mesh_; }
  const GlobalSubnodes& subnodes() const { return gsn_; }
  const std::vector<Vec2>& positions() const { return xn_; }
  const std::vector<Coeffs>& coefficients() const { return u_; }
  const std::vector<char>& troubled_flags() const { return flags_; }
  int total_flagged_steps() const { return total_flagged_; }
  int total_steps() const { return total_steps_; }

  State cell_mean(int cell) const { return u_[cell].row(0).transpose(); }
  double cell_area(int cell) const;
  Vec2 cell_barycenter(int cell) const;

  /// Sub-cell averages of the current solution (stored FV data where a cell
  /// is flagged, projection of the polynomial otherwise).
  Coeffs subcell_averages(int cell) const;

  /// Point evaluation through the piecewise-linear sub-grid geometry
  /// (searches the containing sub-cell; returns false if x is outside).
  bool evaluate(const Vec2& x, State& out) const;

  /// Conserved integrals over the domain.
  State total_conserved() const;

  /// Continuous L2 error against an exact solution at the current time.
  Eigen::Vector4d l2_error(const std::function<State(const Vec2&, double)>& exact) const;

  /// Max circumcircle diameter over the current configuration.
  double mesh_size() const;

  /// GCL residual of the last accepted step, max over cells (diagnostic;
  /// computed on demand from the stored snapshots).
  double last_gcl_residual() const;

  /// Bitwise single-valuedness audit of the last accepted step's fluxes.
  bool last_flux_pairing_ok() const { return flux_pairing_ok_; }

 private:
  struct Reject {
    std::string reason;
  };

  bool try_step(double dt, StepStats& stats, std::string& why);
  CellSnapshot cell_snapshot(int cell, const std::vector<Vec2>& xa,
                             const std::vector<Vec2>& xb, double dt) const;
  Coeffs project_cell(const std::function<State(const Vec2&)>& f, int cell) const;

  Discretization d_;
  TriMesh mesh_;
  GlobalSubnodes gsn_;
  std::vector<FaceInfo> faces_;
  std::vector<std::array<int, 3>> face_idx_;
  std::vector<std::vector<int>> voronoi_;
  SolverOptions opt_;
  CaseHooks hooks_;

  std::vector<Vec2> xn_;
  std::vector<Coeffs> u_;
  std::vector<char> flags_;
  std::vector<Coeffs> averages_;
  double t_ = 0;
  int total_steps_ = 0;
  int total_flagged_ = 0;
  bool flux_pairing_ok_ = true;

  // previous accepted step snapshots (diagnostics)
  std::vector<Vec2> xprev_;
  double dtprev_ = 0;

  // workspaces
  std::vector<PredictorSolution> preds_;
  PredictorScratch pscratch_;
};

}  // namespace aledg
