#include "aledg/mesh.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace aledg {

const char* to_string(BoundaryTag tag) {
  switch (tag) {
    case BoundaryTag::Interior: return "interior";
    case BoundaryTag::Transmissive: return "transmissive";
    case BoundaryTag::SlipWall: return "slip_wall";
    case BoundaryTag::MovingWall: return "moving_wall";
    case BoundaryTag::ExactDirichlet: return "exact_dirichlet";
  }
  return "?";
}

BoundaryTag boundary_tag_from_string(const std::string& s) {
  if (s == "transmissive") return BoundaryTag::Transmissive;
  if (s == "slip_wall") return BoundaryTag::SlipWall;
  if (s == "moving_wall") return BoundaryTag::MovingWall;
  if (s == "exact_dirichlet") return BoundaryTag::ExactDirichlet;
  throw std::runtime_error("unknown boundary tag: " + s);
}

namespace {

constexpr int kPeriodicCode = 100;

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

void TriMesh::finalize(const std::vector<std::array<int, 3>>& boundary_edges) {
  const int nc = n_cells();
  if (vshift.empty()) vshift.assign(nc, {Vec2::Zero(), Vec2::Zero(), Vec2::Zero()});
  adj.assign(nc, {});

  for (int c = 0; c < nc; ++c)
    if (cell_area(c) <= 0.0) throw std::runtime_error("inverted cell in mesh");

  UnionFind uf(int(nodes.size()));

  // resolve periodic pairs by translation before anything else
  std::vector<std::array<int, 2>> periodic_edges;
  for (const auto& be : boundary_edges)
    if (be[2] == kPeriodicCode) periodic_edges.push_back({be[0], be[1]});

  if (!periodic_edges.empty()) {
    periodic = true;
    Vec2 lo = nodes[0], hi = nodes[0];
    for (const auto& p : nodes) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
    const Vec2 L = hi - lo;
    const double tol = 1e-9 * std::max(L[0], L[1]);
    std::vector<Vec2> shifts = {{L[0], 0}, {-L[0], 0}, {0, L[1]}, {0, -L[1]}};

    for (size_t i = 0; i < periodic_edges.size(); ++i) {
      const Vec2 mi = 0.5 * (nodes[periodic_edges[i][0]] + nodes[periodic_edges[i][1]]);
      for (size_t j = i + 1; j < periodic_edges.size(); ++j) {
        const Vec2 mj = 0.5 * (nodes[periodic_edges[j][0]] + nodes[periodic_edges[j][1]]);
        for (const Vec2& t : shifts) {
          if ((mi + t - mj).norm() < tol) {
            for (int a : periodic_edges[i]) {
              bool matched = false;
              for (int b : periodic_edges[j])
                if ((nodes[a] + t - nodes[b]).norm() < tol) {
                  uf.unite(a, b);
                  matched = true;
                }
              if (!matched) throw std::runtime_error("periodic edge endpoints do not match");
            }
          }
        }
      }
    }
    // rewrite connectivity onto representatives, keeping the original
    // geometry through per-cell vertex shifts
    for (int c = 0; c < nc; ++c)
      for (int v = 0; v < 3; ++v) {
        const int orig = cells[c][v];
        const int root = uf.find(orig);
        vshift[c][v] += nodes[orig] - nodes[root];
        cells[c][v] = root;
      }
  }

  // tags keyed on representative ids
  std::map<std::pair<int, int>, BoundaryTag> tag_of;
  for (const auto& be : boundary_edges) {
    if (be[2] == kPeriodicCode) continue;
    int a = uf.find(be[0]), b = uf.find(be[1]);
    if (a > b) std::swap(a, b);
    tag_of[{a, b}] = static_cast<BoundaryTag>(be[2]);
  }

  std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> edges;
  for (int c = 0; c < nc; ++c)
    for (int f = 0; f < 3; ++f) {
      int a = cells[c][f], b = cells[c][(f + 1) % 3];
      if (a > b) std::swap(a, b);
      edges[{a, b}].push_back({c, f});
    }

  for (const auto& [key, halves] : edges) {
    if (halves.size() == 2) {
      const auto [c1, f1] = halves[0];
      const auto [c2, f2] = halves[1];
      // conforming: opposite traversal
      if (cells[c1][f1] != cells[c2][(f2 + 1) % 3] || cells[c2][f2] != cells[c1][(f1 + 1) % 3])
        throw std::runtime_error("non-conforming edge orientation");
      const Vec2 s1 = vshift[c1][f1] - vshift[c2][(f2 + 1) % 3];
      const Vec2 s2 = vshift[c1][(f1 + 1) % 3] - vshift[c2][f2];
      if ((s1 - s2).norm() > 1e-9) throw std::runtime_error("inconsistent periodic shifts");
      adj[c1][f1] = {c2, f2, BoundaryTag::Interior, s1};
      adj[c2][f2] = {c1, f1, BoundaryTag::Interior, -s1};
    } else if (halves.size() == 1) {
      const auto [c, f] = halves[0];
      const auto it = tag_of.find(key);
      if (it == tag_of.end())
        throw std::runtime_error("untagged boundary edge in mesh");
      adj[c][f] = {-1, -1, it->second, Vec2::Zero()};
    } else {
      throw std::runtime_error("edge shared by more than two cells");
    }
  }
}

std::vector<std::vector<int>> TriMesh::node_cells() const {
  std::vector<std::vector<int>> out(nodes.size());
  for (int c = 0; c < n_cells(); ++c)
    for (int v : cells[c]) out[v].push_back(c);
  return out;
}

double incircle_diameter(const Vec2& a, const Vec2& b, const Vec2& c) {
  const double area = triangle_area(a, b, c);
  const double per = (b - a).norm() + (c - b).norm() + (a - c).norm();
  if (area <= 0.0 || per <= 0.0) throw std::invalid_argument("degenerate triangle");
  return 4.0 * area / per;
}

double circumcircle_diameter(const Vec2& a, const Vec2& b, const Vec2& c) {
  const double area = triangle_area(a, b, c);
  if (area <= 0.0) throw std::invalid_argument("degenerate triangle");
  return 0.5 * (b - a).norm() * (c - b).norm() * (a - c).norm() / area;
}

TriMesh generate_structured_mesh(const BoxSpec& spec) {
  if (spec.nx < 1 || spec.ny < 1) throw std::invalid_argument("nx, ny must be >= 1");
  if ((spec.periodic_x && spec.nx < 3) || (spec.periodic_y && spec.ny < 3))
    throw std::invalid_argument("periodic direction needs at least 3 cells");
  TriMesh m;
  const double Lx = spec.x1 - spec.x0, Ly = spec.y1 - spec.y0;
  const int nx = spec.nx, ny = spec.ny;
  const double dx = Lx / nx, dy = Ly / ny;

  const int ncol = spec.periodic_x ? nx : nx + 1;
  const int nrow = spec.periodic_y ? ny : ny + 1;
  if (spec.iso && !(spec.periodic_x && spec.periodic_y))
    throw std::invalid_argument("iso lattice requires a fully periodic box");
  if (spec.iso && ny % 2 != 0) throw std::invalid_argument("iso lattice needs even ny");

  auto nid = [&](int i, int j) { return (j % nrow) * ncol + (i % ncol); };
  auto nshift = [&](int i, int j) {
    return Vec2((i >= ncol && spec.periodic_x) ? Lx : 0.0,
                (j >= nrow && spec.periodic_y) ? Ly : 0.0);
  };

  for (int j = 0; j < nrow; ++j)
    for (int i = 0; i < ncol; ++i) {
      Vec2 p(spec.x0 + i * dx, spec.y0 + j * dy);
      if (spec.iso && (j % 2)) p[0] += 0.5 * dx;
      if (spec.warp) p += spec.warp(p);
      m.nodes.push_back(p);
    }

  std::vector<std::array<Vec2, 3>> shifts;
  auto add_cell = [&](std::array<std::pair<int, int>, 3> vs) {
    std::array<int, 3> ids;
    std::array<Vec2, 3> sh;
    for (int v = 0; v < 3; ++v) {
      ids[v] = nid(vs[v].first, vs[v].second);
      sh[v] = nshift(vs[v].first, vs[v].second);
    }
    m.cells.push_back(ids);
    shifts.push_back(sh);
  };

  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      if (!spec.iso) {
        add_cell({{{i, j}, {i + 1, j}, {i + 1, j + 1}}});
        add_cell({{{i, j}, {i + 1, j + 1}, {i, j + 1}}});
      } else if (j % 2 == 0) {
        add_cell({{{i, j}, {i + 1, j}, {i, j + 1}}});
        add_cell({{{i + 1, j}, {i + 1, j + 1}, {i, j + 1}}});
      } else {
        add_cell({{{i, j}, {i + 1, j}, {i + 1, j + 1}}});
        add_cell({{{i, j}, {i + 1, j + 1}, {i, j + 1}}});
      }
    }
  m.vshift = shifts;
  m.periodic = spec.periodic_x || spec.periodic_y;

  std::vector<std::array<int, 3>> bedges;
  if (!spec.periodic_x)
    for (int j = 0; j < ny; ++j) {
      bedges.push_back({nid(0, j), nid(0, j + 1), int(spec.left)});
      bedges.push_back({nid(nx, j), nid(nx, j + 1), int(spec.right)});
    }
  if (!spec.periodic_y)
    for (int i = 0; i < nx; ++i) {
      bedges.push_back({nid(i, 0), nid(i + 1, 0), int(spec.bottom)});
      bedges.push_back({nid(i, ny), nid(i + 1, ny), int(spec.top)});
    }
  m.finalize(bedges);
  return m;
}

TriMesh generate_disc_mesh(int rings, double radius, BoundaryTag outer) {
  if (rings < 1) throw std::invalid_argument("rings must be >= 1");
  TriMesh m;
  std::vector<std::vector<int>> ring_ids(rings + 1);
  m.nodes.push_back(Vec2::Zero());
  ring_ids[0] = {0};
  for (int r = 1; r <= rings; ++r) {
    const int n = 6 * r;
    const double rad = radius * r / rings;
    for (int k = 0; k < n; ++k) {
      const double th = 2.0 * M_PI * k / n;
      ring_ids[r].push_back(int(m.nodes.size()));
      m.nodes.push_back(Vec2(rad * std::cos(th), rad * std::sin(th)));
    }
  }
  // fan around the center
  for (int k = 0; k < 6; ++k)
    m.cells.push_back({0, ring_ids[1][k], ring_ids[1][(k + 1) % 6]});
  // zipper between consecutive rings, walking by angle
  for (int r = 1; r < rings; ++r) {
    const auto& in = ring_ids[r];
    const auto& out = ring_ids[r + 1];
    const int n1 = int(in.size()), n2 = int(out.size());
    int i = 0, j = 0;
    while (i < n1 || j < n2) {
      const double na = (i + 1) * 2.0 * M_PI / n1;
      const double nb = (j + 1) * 2.0 * M_PI / n2;
      if (j >= n2 || (i < n1 && na <= nb)) {
        m.cells.push_back({in[i % n1], out[j % n2], in[(i + 1) % n1]});
        ++i;
      } else {
        m.cells.push_back({in[i % n1], out[j % n2], out[(j + 1) % n2]});
        ++j;
      }
    }
  }
  std::vector<std::array<int, 3>> bedges;
  const auto& last = ring_ids[rings];
  for (size_t k = 0; k < last.size(); ++k)
    bedges.push_back({last[k], last[(k + 1) % last.size()], int(outer)});
  m.finalize(bedges);
  return m;
}

TriMesh generate_annulus_mesh(int n_r, int n_th, double r0, double r1, double th0,
                              double th1, BoundaryTag inner, BoundaryTag outer,
                              BoundaryTag sides) {
  TriMesh m;
  auto nid = [&](int k, int l) { return l * (n_r + 1) + k; };
  for (int l = 0; l <= n_th; ++l)
    for (int k = 0; k <= n_r; ++k) {
      const double r = r0 + (r1 - r0) * k / n_r;
      const double th = th0 + (th1 - th0) * l / n_th;
      m.nodes.push_back(Vec2(r * std::cos(th), r * std::sin(th)));
    }
  for (int l = 0; l < n_th; ++l)
    for (int k = 0; k < n_r; ++k) {
      m.cells.push_back({nid(k, l), nid(k + 1, l), nid(k + 1, l + 1)});
      m.cells.push_back({nid(k, l), nid(k + 1, l + 1), nid(k, l + 1)});
    }
  std::vector<std::array<int, 3>> bedges;
  for (int l = 0; l < n_th; ++l) {
    bedges.push_back({nid(0, l), nid(0, l + 1), int(inner)});
    bedges.push_back({nid(n_r, l), nid(n_r, l + 1), int(outer)});
  }
  for (int k = 0; k < n_r; ++k) {
    bedges.push_back({nid(k, 0), nid(k + 1, 0), int(sides)});
    bedges.push_back({nid(k, n_th), nid(k + 1, n_th), int(sides)});
  }
  m.finalize(bedges);
  return m;
}

void save_mesh(const TriMesh& mesh, const std::string& path) {
  if (mesh.periodic)
    throw std::runtime_error("periodic meshes cannot be serialized to the plain format");
  std::vector<std::array<int, 3>> bedges;
  for (int c = 0; c < mesh.n_cells(); ++c)
    for (int f = 0; f < 3; ++f)
      if (mesh.adj[c][f].tag != BoundaryTag::Interior)
        bedges.push_back({mesh.cells[c][f], mesh.cells[c][(f + 1) % 3], int(mesh.adj[c][f].tag)});

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.precision(17);
  out << mesh.nodes.size() << " " << mesh.cells.size() << " " << bedges.size() << "\n";
  for (size_t i = 0; i < mesh.nodes.size(); ++i)
    out << i << " " << mesh.nodes[i][0] << " " << mesh.nodes[i][1] << "\n";
  for (size_t c = 0; c < mesh.cells.size(); ++c)
    out << c << " " << mesh.cells[c][0] << " " << mesh.cells[c][1] << " " << mesh.cells[c][2]
        << "\n";
  for (const auto& be : bedges)
    out << be[0] << " " << be[1] << " " << to_string(static_cast<BoundaryTag>(be[2])) << "\n";
}

TriMesh load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  size_t nn, nc, nb;
  if (!(in >> nn >> nc >> nb)) throw std::runtime_error("malformed mesh header");
  TriMesh m;
  m.nodes.resize(nn);
  for (size_t i = 0; i < nn; ++i) {
    size_t id;
    double x, y;
    if (!(in >> id >> x >> y) || id >= nn) throw std::runtime_error("malformed node line");
    m.nodes[id] = Vec2(x, y);
  }
  m.cells.resize(nc);
  for (size_t c = 0; c < nc; ++c) {
    size_t id;
    int a, b, d;
    if (!(in >> id >> a >> b >> d) || id >= nc) throw std::runtime_error("malformed cell line");
    m.cells[id] = {a, b, d};
  }
  std::vector<std::array<int, 3>> bedges;
  for (size_t e = 0; e < nb; ++e) {
    int a, b;
    std::string tag;
    if (!(in >> a >> b >> tag)) throw std::runtime_error("malformed boundary line");
    const int code = (tag == "periodic") ? kPeriodicCode : int(boundary_tag_from_string(tag));
    bedges.push_back({a, b, code});
  }
  m.finalize(bedges);
  return m;
}

GlobalSubnodes build_global_subnodes(const TriMesh& mesh, const SubGrid& sg) {
  GlobalSubnodes g;
  const int nc = mesh.n_cells();
  g.gid.assign(nc, std::vector<int>(sg.n_subnodes, -1));
  g.shift.assign(nc, std::vector<Vec2>(sg.n_subnodes, Vec2::Zero()));

  std::map<std::array<int, 4>, int> keymap;  // (type, a, b, slot) -> gid
  auto get = [&](std::array<int, 4> key, SubnodeKind kind) {
    auto it = keymap.find(key);
    if (it != keymap.end()) return it->second;
    const int id = g.count++;
    keymap[key] = id;
    g.kind.push_back(kind);
    return id;
  };

  const int ns = sg.ns;
  for (int c = 0; c < nc; ++c) {
    for (int k = 0; k < sg.n_subnodes; ++k) {
      const Vec2 xi = sg.nodes.row(k);
      // presentation shift interpolates the vertex shifts
      g.shift[c][k] = (1.0 - xi[0] - xi[1]) * mesh.vshift[c][0] + xi[0] * mesh.vshift[c][1] +
                      xi[1] * mesh.vshift[c][2];
      if (sg.kind[k] == SubnodeKind::Internal) {
        g.gid[c][k] = get({0, c, k, 0}, SubnodeKind::Internal);
      } else if (sg.kind[k] == SubnodeKind::Vertex) {
        int v = (k == sg.corner[0]) ? 0 : (k == sg.corner[1] ? 1 : 2);
        g.gid[c][k] = get({1, mesh.cells[c][v], 0, 0}, SubnodeKind::Vertex);
      }
    }
    for (int e = 0; e < 3; ++e) {
      const int a = mesh.cells[c][e], b = mesh.cells[c][(e + 1) % 3];
      for (int j = 1; j < ns; ++j) {
        const int k = sg.edge_subnodes[e][j];
        const std::array<int, 4> key =
            (a < b) ? std::array<int, 4>{2, a, b, j} : std::array<int, 4>{2, b, a, ns - j};
        g.gid[c][k] = get(key, SubnodeKind::Face);
      }
    }
  }

  g.incidence.resize(g.count);
  g.on_boundary.assign(g.count, 0);
  for (int c = 0; c < nc; ++c) {
    for (int k = 0; k < sg.n_subnodes; ++k) g.incidence[g.gid[c][k]].push_back({c, k});
    for (int e = 0; e < 3; ++e)
      if (mesh.adj[c][e].tag != BoundaryTag::Interior)
        for (int k : sg.edge_subnodes[e]) g.on_boundary[g.gid[c][k]] = 1;
  }
  return g;
}

std::vector<Vec2> initial_subnode_positions(const TriMesh& mesh, const SubGrid& sg,
                                            const GlobalSubnodes& gsn) {
  std::vector<Vec2> X(gsn.count, Vec2::Zero());
  std::vector<char> seen(gsn.count, 0);
  double scale = 0.0;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const Vec2 a = mesh.vertex(c, 0), b = mesh.vertex(c, 1), d = mesh.vertex(c, 2);
    scale = std::max({scale, (b - a).norm(), (d - a).norm()});
    for (int k = 0; k < sg.n_subnodes; ++k) {
      const Vec2 pos = affine_triangle_map(a, b, d, sg.nodes.row(k)) - gsn.shift[c][k];
      const int gid = gsn.gid[c][k];
      if (!seen[gid]) {
        X[gid] = pos;
        seen[gid] = 1;
      } else if ((X[gid] - pos).norm() > 1e-9 * scale) {
        throw std::runtime_error("inconsistent sub-node positions across cells");
      }
    }
  }
  return X;
}

std::vector<std::vector<int>> cell_voronoi_neighborhoods(const TriMesh& mesh) {
  const auto nc = mesh.node_cells();
  std::vector<std::vector<int>> out(mesh.n_cells());
  for (int c = 0; c < mesh.n_cells(); ++c) {
    std::vector<int>& lst = out[c];
    for (int v : mesh.cells[c])
      for (int o : nc[v]) lst.push_back(o);
    std::sort(lst.begin(), lst.end());
    lst.erase(std::unique(lst.begin(), lst.end()), lst.end());
  }
  return out;
}

}  // namespace aledg
