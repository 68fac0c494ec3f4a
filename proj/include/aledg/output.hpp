#pragma once

#include <string>
#include <vector>

#include "aledg/solver.hpp"

namespace aledg {

/// Legacy ASCII VTK unstructured grid: every sub-cell becomes a linear
/// triangle carrying its averaged (rho, v, p) plus the per-main-cell limiter
/// flag.
void export_vtk(const Solver& solver, const std::string& path);

/// One row per main cell: barycenter, radius, cell-mean conserved and
/// primitive variables.
void export_scatter_csv(const Solver& solver, const std::string& path);

struct ConvergenceRow {
  double h = 0;
  Eigen::Vector4d error = Eigen::Vector4d::Zero();
  Eigen::Vector4d order = Eigen::Vector4d::Zero();
};

/// Orders from consecutive log-ratios of a mesh sequence.
std::vector<ConvergenceRow> convergence_orders(const std::vector<double>& h,
                                               const std::vector<Eigen::Vector4d>& err);

std::string format_convergence_table(const std::vector<ConvergenceRow>& rows);
void write_convergence_csv(const std::vector<ConvergenceRow>& rows, const std::string& path);

}  // namespace aledg
