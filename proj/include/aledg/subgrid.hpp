#pragma once

#include <array>
#include <vector>

#include "aledg/types.hpp"

namespace aledg {

enum class SubnodeKind { Vertex, Face, Internal };

/// Uniform simplex sub-grid of the reference triangle: each edge is split
/// into ns = 2N+1 sub-edges, giving ns^2 sub-cells on (ns+1)(ns+2)/2
/// sub-nodes placed at the standard conforming finite-element lattice.
struct SubGrid {
  int degree = 0;
  int ns = 0;           // sub-edges per edge
  int n_subnodes = 0;   // K
  int n_subcells = 0;   // S

  MatX nodes;                                   // K x 2 reference coordinates
  std::vector<std::array<int, 3>> cells;        // sub-cell connectivity (ccw)
  std::vector<SubnodeKind> kind;                // per sub-node
  std::array<int, 3> corner;                    // local ids of the 3 vertices
  std::vector<std::array<int, 2>> face_slot;    // Face kind: (edge, index); else (-1,-1)

  // Per reference edge (0: v1->v2, 1: v2->v3, 2: v3->v1), the sub-nodes in
  // edge order including endpoints (ns+1 entries) and the sub-cell owning
  // each sub-edge (ns entries).
  std::array<std::vector<int>, 3> edge_subnodes;
  std::array<std::vector<int>, 3> edge_subcell;

  std::vector<std::vector<int>> subcells_of_subnode;  // K -> incident sub-cells

  /// Neighbor sub-cell across local face o of sub-cell s (-1 at the main-cell
  /// boundary); `edge`/`subedge` identify the reference edge position there.
  struct SubFaceAdj {
    int nb = -1;
    int edge = -1;
    int subedge = -1;
  };
  std::vector<std::array<SubFaceAdj, 3>> subcell_adj;

  int lattice_id(int k, int p) const { return offset_[p] + k; }
  double subcell_ref_area() const { return 0.5 / n_subcells; }

  /// First sub-cell whose closed reference triangle contains xi.
  int find_subcell(const Vec2& xi) const;

  static SubGrid build(int degree);

 private:
  std::vector<int> offset_;
};

/// Affine map of the reference triangle (0,0),(1,0),(0,1) through the given
/// vertex positions.
inline Vec2 affine_triangle_map(const Vec2& x1, const Vec2& x2, const Vec2& x3,
                                const Vec2& xi) {
  return x1 + (x2 - x1) * xi[0] + (x3 - x1) * xi[1];
}

inline double triangle_area(const Vec2& x1, const Vec2& x2, const Vec2& x3) {
  return 0.5 * ((x2[0] - x1[0]) * (x3[1] - x1[1]) - (x3[0] - x1[0]) * (x2[1] - x1[1]));
}

}  // namespace aledg
