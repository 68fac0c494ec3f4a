#include <doctest.h>

#include <cstdio>
#include <random>

#include "aledg/mesh.hpp"
#include "aledg/subgrid.hpp"

using namespace aledg;

TEST_CASE("subgrid counts and kinds") {
  const SubGrid s1 = SubGrid::build(1);
  CHECK(s1.ns == 3);
  CHECK(s1.n_subcells == 9);
  CHECK(s1.n_subnodes == 10);
  int nv = 0, nf = 0, ni = 0;
  for (auto k : s1.kind) {
    if (k == SubnodeKind::Vertex) ++nv;
    if (k == SubnodeKind::Face) ++nf;
    if (k == SubnodeKind::Internal) ++ni;
  }
  CHECK(nv == 3);
  CHECK(nf == 6);
  CHECK(ni == 1);

  const SubGrid s2 = SubGrid::build(2);
  CHECK(s2.ns == 5);
  CHECK(s2.n_subcells == 25);
  CHECK(s2.n_subnodes == 21);
}

TEST_CASE("subgrid areas partition the reference triangle") {
  for (int n = 1; n <= 3; ++n) {
    const SubGrid sg = SubGrid::build(n);
    double sum = 0.0;
    for (const auto& c : sg.cells) {
      const double a = triangle_area(sg.nodes.row(c[0]), sg.nodes.row(c[1]), sg.nodes.row(c[2]));
      CHECK(a > 0.0);
      sum += a;
    }
    CHECK(sum == doctest::Approx(0.5).epsilon(1e-14));
  }
}

TEST_CASE("subgrid adjacency is consistent") {
  const SubGrid sg = SubGrid::build(2);
  for (int s = 0; s < sg.n_subcells; ++s)
    for (int o = 0; o < 3; ++o) {
      const auto& a = sg.subcell_adj[s][o];
      if (a.nb >= 0) {
        bool back = false;
        for (int oo = 0; oo < 3; ++oo)
          if (sg.subcell_adj[a.nb][oo].nb == s) back = true;
        CHECK(back);
      } else {
        CHECK(a.edge >= 0);
        CHECK(sg.edge_subcell[a.edge][a.subedge] == s);
      }
    }
}

TEST_CASE("affine subcell map") {
  const Vec2 a(1.0, 2.0), b(3.0, 2.5), c(1.5, 4.0);
  CHECK((affine_triangle_map(a, b, c, Vec2(0, 0)) - a).norm() == doctest::Approx(0.0));
  const Vec2 mid = affine_triangle_map(a, b, c, Vec2(1.0 / 3, 1.0 / 3));
  CHECK(mid[0] == doctest::Approx((a[0] + b[0] + c[0]) / 3));
  CHECK(mid[1] == doctest::Approx((a[1] + b[1] + c[1]) / 3));

  // Jacobian determinant equals twice the shoelace area
  const double det = (b - a)[0] * (c - a)[1] - (c - a)[0] * (b - a)[1];
  const double shoelace =
      0.5 * (a[0] * (b[1] - c[1]) + b[0] * (c[1] - a[1]) + c[0] * (a[1] - b[1]));
  CHECK(det == doctest::Approx(2.0 * shoelace).epsilon(1e-14));
}

TEST_CASE("incircle diameter") {
  const double s = 1.0;
  CHECK(incircle_diameter(Vec2(0, 0), Vec2(s, 0), Vec2(0.5 * s, s * std::sqrt(3) / 2)) ==
        doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-13));
  CHECK(incircle_diameter(Vec2(0, 0), Vec2(3, 0), Vec2(0, 4)) == doctest::Approx(2.0));
  CHECK_THROWS(incircle_diameter(Vec2(0, 0), Vec2(1, 1), Vec2(2, 2)));
}

TEST_CASE("structured mesh generation") {
  BoxSpec spec;
  spec.nx = spec.ny = 30;
  spec.x0 = spec.y0 = 0.0;
  spec.x1 = spec.y1 = 1.2;
  spec.left = spec.right = spec.bottom = spec.top = BoundaryTag::SlipWall;
  const TriMesh m = generate_structured_mesh(spec);
  CHECK(m.n_cells() == 1800);
  for (int c = 0; c < m.n_cells(); ++c) CHECK(m.cell_area(c) > 0.0);

  BoxSpec tiny;
  tiny.nx = tiny.ny = 1;
  const TriMesh t = generate_structured_mesh(tiny);
  CHECK(t.n_cells() == 2);
  int shared = 0;
  for (int f = 0; f < 3; ++f)
    if (t.adj[0][f].cell == 1) ++shared;
  CHECK(shared == 1);
}

TEST_CASE("mesh save/load round trip") {
  BoxSpec spec;
  spec.nx = 4;
  spec.ny = 3;
  spec.left = BoundaryTag::MovingWall;
  spec.top = BoundaryTag::ExactDirichlet;
  const TriMesh m = generate_structured_mesh(spec);
  const std::string path = "roundtrip_test.tri";
  save_mesh(m, path);
  const TriMesh r = load_mesh(path);
  std::remove(path.c_str());

  REQUIRE(r.n_cells() == m.n_cells());
  REQUIRE(r.nodes.size() == m.nodes.size());
  for (size_t i = 0; i < m.nodes.size(); ++i) CHECK((r.nodes[i] - m.nodes[i]).norm() == 0.0);
  for (int c = 0; c < m.n_cells(); ++c) {
    CHECK(r.cells[c] == m.cells[c]);
    for (int f = 0; f < 3; ++f) {
      CHECK(r.adj[c][f].cell == m.adj[c][f].cell);
      CHECK(r.adj[c][f].tag == m.adj[c][f].tag);
    }
  }
}

TEST_CASE("malformed mesh files are rejected") {
  const std::string path = "bad_mesh.tri";
  {
    std::FILE* f = std::fopen(path.c_str(), "w");
    std::fputs("3 1 0\n0 0.0 0.0\n1 1.0 0.0\n2 0.0 1.0\n0 0 2 1\n", f);  // inverted cell
    std::fclose(f);
  }
  CHECK_THROWS(load_mesh(path));
  std::remove(path.c_str());
}

TEST_CASE("fully periodic box has no boundary") {
  BoxSpec spec;
  spec.nx = spec.ny = 4;
  spec.periodic_x = spec.periodic_y = true;
  const TriMesh m = generate_structured_mesh(spec);
  CHECK(m.n_cells() == 32);
  for (int c = 0; c < m.n_cells(); ++c)
    for (int f = 0; f < 3; ++f) {
      CHECK(m.adj[c][f].tag == BoundaryTag::Interior);
      CHECK(m.adj[c][f].cell >= 0);
    }
  // presented geometry is still the original square partition
  double area = 0.0;
  for (int c = 0; c < m.n_cells(); ++c) area += m.cell_area(c);
  CHECK(area == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("iso lattice periodic box") {
  BoxSpec spec;
  spec.nx = 6;
  spec.ny = 6;
  spec.periodic_x = spec.periodic_y = true;
  spec.iso = true;
  const TriMesh m = generate_structured_mesh(spec);
  double area = 0.0;
  for (int c = 0; c < m.n_cells(); ++c) {
    CHECK(m.cell_area(c) > 0.0);
    area += m.cell_area(c);
  }
  CHECK(area == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("disc mesh") {
  const TriMesh m = generate_disc_mesh(6, 1.0, BoundaryTag::Transmissive);
  CHECK(m.n_cells() == 6 * 36);
  double area = 0.0;
  for (int c = 0; c < m.n_cells(); ++c) {
    CHECK(m.cell_area(c) > 0.0);
    area += m.cell_area(c);
  }
  CHECK(area < M_PI);
  CHECK(area > 0.95 * M_PI);
}

TEST_CASE("annulus sector mesh") {
  const TriMesh m =
      generate_annulus_mesh(4, 12, 0.9, 1.0, 0.0, M_PI / 2, BoundaryTag::ExactDirichlet,
                            BoundaryTag::ExactDirichlet, BoundaryTag::SlipWall);
  CHECK(m.n_cells() == 2 * 4 * 12);
  for (int c = 0; c < m.n_cells(); ++c) CHECK(m.cell_area(c) > 0.0);
}

TEST_CASE("global subnodes: continuity and voronoi counts") {
  BoxSpec spec;
  spec.nx = spec.ny = 4;
  spec.left = spec.right = spec.bottom = spec.top = BoundaryTag::Transmissive;
  const TriMesh m = generate_structured_mesh(spec);
  for (int n = 1; n <= 2; ++n) {
    const SubGrid sg = SubGrid::build(n);
    const GlobalSubnodes gsn = build_global_subnodes(m, sg);
    const auto X = initial_subnode_positions(m, sg, gsn);  // asserts single-valuedness
    CHECK(int(X.size()) == gsn.count);

    for (int k = 0; k < gsn.count; ++k) {
      const int ncells = int(gsn.incidence[k].size());
      if (gsn.kind[k] == SubnodeKind::Internal) CHECK(ncells == 1);
      if (gsn.kind[k] == SubnodeKind::Face) CHECK(ncells == (gsn.on_boundary[k] ? 1 : 2));
      if (gsn.kind[k] == SubnodeKind::Vertex && !gsn.on_boundary[k]) CHECK(ncells == 6);
    }
  }
}

TEST_CASE("physical subcell areas sum to the cell area") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> uni(-0.01, 0.01);
  BoxSpec spec;
  spec.nx = spec.ny = 2;
  const TriMesh m = generate_structured_mesh(spec);
  const SubGrid sg = SubGrid::build(2);
  const GlobalSubnodes gsn = build_global_subnodes(m, sg);
  auto X = initial_subnode_positions(m, sg, gsn);

  // perturb all subnodes a little (valid placement), then compare per-cell
  // subcell-area sums against the polygon area from the boundary subnodes
  for (auto& x : X) x += Vec2(uni(rng), uni(rng));
  for (int c = 0; c < m.n_cells(); ++c) {
    double sum = 0.0;
    for (const auto& sc : sg.cells)
      sum += triangle_area(gsn.presented(X, c, sc[0]), gsn.presented(X, c, sc[1]),
                           gsn.presented(X, c, sc[2]));
    // shoelace area over the boundary polyline of the cell
    std::vector<Vec2> poly;
    for (int e = 0; e < 3; ++e)
      for (int j = 0; j < sg.ns; ++j) poly.push_back(gsn.presented(X, c, sg.edge_subnodes[e][j]));
    double shoelace = 0.0;
    for (size_t i = 0; i < poly.size(); ++i) {
      const Vec2 a = poly[i], b = poly[(i + 1) % poly.size()];
      shoelace += 0.5 * (a[0] * b[1] - b[0] * a[1]);
    }
    CHECK(sum == doctest::Approx(shoelace).epsilon(1e-12));
  }
}

TEST_CASE("cell voronoi neighborhood on structured mesh") {
  BoxSpec spec;
  spec.nx = spec.ny = 5;
  const TriMesh m = generate_structured_mesh(spec);
  const auto vor = cell_voronoi_neighborhoods(m);
  for (int c = 0; c < m.n_cells(); ++c) {
    CHECK(std::find(vor[c].begin(), vor[c].end(), c) != vor[c].end());
    CHECK(vor[c].size() >= 3);
  }
}
