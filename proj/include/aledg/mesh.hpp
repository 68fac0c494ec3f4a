#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "aledg/subgrid.hpp"
#include "aledg/types.hpp"

namespace aledg {

enum class BoundaryTag { Interior, Transmissive, SlipWall, MovingWall, ExactDirichlet };

const char* to_string(BoundaryTag tag);
BoundaryTag boundary_tag_from_string(const std::string& s);

/// Adjacency through local face f of a cell (f connects local vertices f and
/// (f+1)%3). For interior faces `shift` maps the neighbor's coordinate frame
/// into ours (nonzero only across periodic seams).
struct FaceAdj {
  int cell = -1;
  int face = -1;
  BoundaryTag tag = BoundaryTag::Interior;
  Vec2 shift = Vec2::Zero();
};

/// Unstructured conforming triangle mesh. Node positions are the t=0
/// configuration; once the sub-node geometry takes over, connectivity is the
/// only thing consumed from here. Periodic boundaries are resolved at build
/// time by node identification, with per-cell vertex shifts recording the
/// lattice offset of each cell's presentation.
struct TriMesh {
  std::vector<Vec2> nodes;
  std::vector<std::array<int, 3>> cells;
  std::vector<std::array<FaceAdj, 3>> adj;
  std::vector<std::array<Vec2, 3>> vshift;  // per-cell vertex presentation shifts
  bool periodic = false;

  int n_cells() const { return int(cells.size()); }
  Vec2 vertex(int cell, int v) const { return nodes[cells[cell][v]] + vshift[cell][v]; }
  double cell_area(int cell) const {
    return triangle_area(vertex(cell, 0), vertex(cell, 1), vertex(cell, 2));
  }

  /// Builds adjacency from connectivity + boundary-edge tags; identifies
  /// periodic node pairs by translation. Must be called once after the node,
  /// cell and boundary lists are filled.
  void finalize(const std::vector<std::array<int, 3>>& boundary_edges);

  std::vector<std::vector<int>> node_cells() const;  // main-node -> incident cells
};

/// h_i = incircle diameter = 4 A / perimeter. Throws on degenerate input.
double incircle_diameter(const Vec2& a, const Vec2& b, const Vec2& c);
double circumcircle_diameter(const Vec2& a, const Vec2& b, const Vec2& c);

// --- generators -----------------------------------------------------------

struct BoxSpec {
  int nx = 10, ny = 10;
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  bool periodic_x = false, periodic_y = false;
  bool iso = false;  // offset-row lattice (near-equilateral cells); periodic only
  BoundaryTag left = BoundaryTag::Transmissive, right = BoundaryTag::Transmissive;
  BoundaryTag bottom = BoundaryTag::Transmissive, top = BoundaryTag::Transmissive;
  std::function<Vec2(const Vec2&)> warp;  // optional node displacement
};

TriMesh generate_structured_mesh(const BoxSpec& spec);

/// Disc of radius `radius` built from concentric rings with near-uniform
/// spacing; `rings` controls resolution (cell count ~ 6 rings^2).
TriMesh generate_disc_mesh(int rings, double radius, BoundaryTag outer);

/// Annulus sector (polar box) r in [r0,r1], theta in [th0,th1].
TriMesh generate_annulus_mesh(int n_r, int n_th, double r0, double r1, double th0,
                              double th1, BoundaryTag inner, BoundaryTag outer,
                              BoundaryTag sides);

// --- plain-text mesh file -------------------------------------------------

void save_mesh(const TriMesh& mesh, const std::string& path);
TriMesh load_mesh(const std::string& path);

// --- sub-node layer -------------------------------------------------------

/// Globally unified sub-node numbering over the whole mesh, with per-cell
/// presentation shifts for periodic seams.
struct GlobalSubnodes {
  int count = 0;
  std::vector<std::vector<int>> gid;      // cell -> local subnode -> global id
  std::vector<std::vector<Vec2>> shift;   // cell -> local subnode -> shift
  std::vector<SubnodeKind> kind;          // per global sub-node
  std::vector<char> on_boundary;          // per global sub-node
  std::vector<std::vector<std::pair<int, int>>> incidence;  // gsn -> (cell, local)

  Vec2 presented(const std::vector<Vec2>& X, int cell, int local) const {
    return X[gid[cell][local]] + shift[cell][local];
  }
};

GlobalSubnodes build_global_subnodes(const TriMesh& mesh, const SubGrid& sg);

/// Canonical sub-node positions of the t=0 configuration.
std::vector<Vec2> initial_subnode_positions(const TriMesh& mesh, const SubGrid& sg,
                                            const GlobalSubnodes& gsn);

/// Cells of the main grid sharing at least one vertex with cell i (the
/// Voronoi neighborhood used by the limiter), including i itself.
std::vector<std::vector<int>> cell_voronoi_neighborhoods(const TriMesh& mesh);

}  // namespace aledg
