#pragma once

#include <functional>
#include <string>

#include "aledg/config.hpp"
#include "aledg/solver.hpp"

namespace aledg {

/// A fully assembled test problem: mesh, gas model, initial/exact/boundary
/// data and the default final time.
struct CaseSetup {
  std::string name;
  TriMesh mesh;
  SolverOptions options;
  CaseHooks hooks;
  std::function<State(const Vec2&)> initial;
  std::function<State(const Vec2&, double)> exact;  // empty if unavailable
  std::function<void(Solver&)> post_init;           // e.g. point energy deposits
  double t_end = 1.0;
};

/// Builds one of the named cases: vortex, explosion, saltzman, kidder,
/// sedov, taylor_green, freestream. Throws on unknown names.
CaseSetup build_case(const SimulationConfig& cfg);

/// Focalisation time of the shell compression problem (gamma = 2 closed form).
double kidder_focalisation_time();

}  // namespace aledg
