#include "aledg/subgrid.hpp"

#include <cassert>
#include <map>

namespace aledg {

int SubGrid::find_subcell(const Vec2& xi) const {
  for (int s = 0; s < n_subcells; ++s) {
    const auto& c = cells[s];
    const Vec2 a = nodes.row(c[0]), b = nodes.row(c[1]), d = nodes.row(c[2]);
    const double det = (b - a).x() * (d - a).y() - (d - a).x() * (b - a).y();
    const double l2 = ((xi - a).x() * (d - a).y() - (d - a).x() * (xi - a).y()) / det;
    const double l3 = ((b - a).x() * (xi - a).y() - (xi - a).x() * (b - a).y()) / det;
    if (l2 >= -1e-12 && l3 >= -1e-12 && l2 + l3 <= 1.0 + 1e-12) return s;
  }
  return -1;
}

SubGrid SubGrid::build(int degree) {
  assert(degree >= 1 && degree <= 4);
  SubGrid sg;
  sg.degree = degree;
  const int ns = 2 * degree + 1;
  sg.ns = ns;
  sg.n_subnodes = (ns + 1) * (ns + 2) / 2;
  sg.n_subcells = ns * ns;

  sg.offset_.resize(ns + 1);
  int off = 0;
  for (int p = 0; p <= ns; ++p) {
    sg.offset_[p] = off;
    off += ns + 1 - p;
  }

  sg.nodes.resize(sg.n_subnodes, 2);
  sg.kind.resize(sg.n_subnodes);
  for (int p = 0; p <= ns; ++p)
    for (int k = 0; k <= ns - p; ++k) {
      const int id = sg.lattice_id(k, p);
      sg.nodes(id, 0) = double(k) / ns;
      sg.nodes(id, 1) = double(p) / ns;
      const bool e0 = (p == 0), e1 = (k + p == ns), e2 = (k == 0);
      const int on = int(e0) + int(e1) + int(e2);
      sg.kind[id] = on >= 2 ? SubnodeKind::Vertex
                            : (on == 1 ? SubnodeKind::Face : SubnodeKind::Internal);
    }
  sg.corner = {sg.lattice_id(0, 0), sg.lattice_id(ns, 0), sg.lattice_id(0, ns)};

  // "up" triangles first, then "down" triangles, row by row
  for (int p = 0; p < ns; ++p)
    for (int k = 0; k < ns - p; ++k)
      sg.cells.push_back({sg.lattice_id(k, p), sg.lattice_id(k + 1, p), sg.lattice_id(k, p + 1)});
  for (int p = 0; p + 1 < ns; ++p)
    for (int k = 0; k + p + 1 < ns; ++k)
      sg.cells.push_back(
          {sg.lattice_id(k + 1, p), sg.lattice_id(k + 1, p + 1), sg.lattice_id(k, p + 1)});
  assert(int(sg.cells.size()) == sg.n_subcells);

  // reference edges with endpoint order matching the main-cell orientation
  for (int j = 0; j <= ns; ++j) {
    sg.edge_subnodes[0].push_back(sg.lattice_id(j, 0));
    sg.edge_subnodes[1].push_back(sg.lattice_id(ns - j, j));
    sg.edge_subnodes[2].push_back(sg.lattice_id(0, ns - j));
  }

  sg.face_slot.assign(sg.n_subnodes, {-1, -1});
  for (int e = 0; e < 3; ++e)
    for (int j = 1; j < ns; ++j)
      if (sg.kind[sg.edge_subnodes[e][j]] == SubnodeKind::Face)
        sg.face_slot[sg.edge_subnodes[e][j]] = {e, j};

  sg.subcells_of_subnode.resize(sg.n_subnodes);
  for (int s = 0; s < sg.n_subcells; ++s)
    for (int v : sg.cells[s]) sg.subcells_of_subnode[v].push_back(s);

  // sub-cell adjacency through shared sub-edges
  std::map<std::pair<int, int>, std::pair<int, int>> half;  // (a,b) -> (subcell, face)
  sg.subcell_adj.resize(sg.n_subcells);
  for (int s = 0; s < sg.n_subcells; ++s)
    for (int o = 0; o < 3; ++o) {
      const int a = sg.cells[s][o], b = sg.cells[s][(o + 1) % 3];
      const auto it = half.find({b, a});
      if (it != half.end()) {
        sg.subcell_adj[s][o].nb = it->second.first;
        sg.subcell_adj[it->second.first][it->second.second].nb = s;
      } else {
        half[{a, b}] = {s, o};
      }
    }

  // boundary sub-edges: match them to reference-edge slots
  for (int e = 0; e < 3; ++e) {
    sg.edge_subcell[e].resize(ns, -1);
    for (int j = 0; j < ns; ++j) {
      const int a = sg.edge_subnodes[e][j], b = sg.edge_subnodes[e][j + 1];
      const auto it = half.find({a, b});
      assert(it != half.end());
      const int s = it->second.first, o = it->second.second;
      assert(sg.subcell_adj[s][o].nb == -1);
      sg.edge_subcell[e][j] = s;
      sg.subcell_adj[s][o].edge = e;
      sg.subcell_adj[s][o].subedge = j;
    }
  }
  return sg;
}

}  // namespace aledg
