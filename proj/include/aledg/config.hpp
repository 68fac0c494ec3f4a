#pragma once

#include <string>

namespace aledg {

/// Run configuration: plain key = value text file plus CLI overrides.
struct SimulationConfig {
  std::string case_name = "vortex";
  int order = 2;
  double cfl = 0.5;
  double t_end = -1.0;  // negative: use the case default
  std::string motion = "lagrangian";  // lagrangian | eulerian
  std::string relax = "deformation";  // deformation | constant | lagrange
  double omega = 0.7;                 // constant-relaxation factor

  // gas overrides (negative: case default)
  double gamma = -1.0;
  double mu = -1.0;
  double prandtl = -1.0;

  // mesh: either a file or generator parameters (0: case default)
  std::string mesh_file;
  int nx = 0;
  int ny = 0;

  std::string out_dir = "out";
  int out_every = 0;  // steps between exports; 0 = final state only
  unsigned seed = 0;  // reserved for perturbation-style cases
  bool walls = false; // replace transmissive boundaries by slip walls

  void set(const std::string& key, const std::string& value);
};

SimulationConfig load_config(const std::string& path);

}  // namespace aledg
