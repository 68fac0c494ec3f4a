#pragma once

#include <map>
#include <string>
#include <vector>

#include "aledg/dg_scheme.hpp"
#include "aledg/gas.hpp"
#include "aledg/mesh.hpp"
#include "aledg/tables.hpp"

namespace aledg {

/// Detection parameters of the relaxed discrete maximum principle.
struct DetectionParams {
  double delta0 = 1e-4;
  double eps = 1e-3;
};

/// MOOD detection: a cell is troubled (b=1) unless all candidate sub-cell
/// averages are finite and admissible and the density averages satisfy the
/// RDMP against the t^n neighborhood bounds.
std::vector<char> detect_troubled_cells(const Discretization& d,
                                        const std::vector<Coeffs>& v_star,
                                        const std::vector<Coeffs>& v_n,
                                        const std::vector<std::vector<int>>& neighborhoods,
                                        const GasModel& gas, const DetectionParams& p = {});

/// Context shared by the sub-cell finite volume recompute and the
/// conservative neighbor fixup.
struct SubcellFvContext {
  const Discretization* d = nullptr;
  const TriMesh* mesh = nullptr;
  const GlobalSubnodes* gsn = nullptr;
  const std::vector<Vec2>* xn = nullptr;
  const std::vector<Vec2>* xnp1 = nullptr;
  double dt = 0.0;
  const GasModel* gas = nullptr;
  BoundaryContext bc;
  const std::vector<FaceInfo>* faces = nullptr;
  const std::vector<std::array<int, 3>>* face_of_cell = nullptr;  // (cell,edge) -> face id
};

/// Result of the second-order TVD ALE finite-volume recompute on the
/// sub-grid: new averages for every flagged cell plus the sub-face fluxes
/// actually used on main-grid faces adjacent to flagged cells (keyed by face
/// id, oriented outward from the face owner).
struct FvRecomputeResult {
  bool ok = true;
  std::string error;
  std::map<int, Coeffs> new_averages;       // flagged cell -> S x 4
  std::map<int, MatX> face_fluxes;          // face id -> ns x 4 integrated fluxes
};

/// `data_n` must provide the t^n sub-cell averages for any cell the stencils
/// touch (flagged cells and their Neumann neighbors).
FvRecomputeResult tvd_subcell_recompute(const SubcellFvContext& ctx,
                                        const std::vector<char>& flags,
                                        const std::map<int, Coeffs>& data_n);

/// Map cell -> edge -> face id, companion of build_face_list.
std::vector<std::array<int, 3>> build_face_index(const TriMesh& mesh,
                                                 const std::vector<FaceInfo>& faces);

}  // namespace aledg
