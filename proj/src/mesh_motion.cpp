#include "aledg/mesh_motion.hpp"

#include <cmath>
#include <stdexcept>

namespace aledg {

State hll_state(const State& ql, const State& qr, const Vec2& n, const GasModel& gas) {
  const double vnl = velocity(ql).dot(n), vnr = velocity(qr).dot(n);
  const double cl = sound_speed(ql, gas), cr = sound_speed(qr, gas);
  const double sl = std::min({0.0, vnl - cl, vnr - cr});
  const double sr = std::max({0.0, vnl + cl, vnr + cr});
  if (sr - sl < 1e-14) {
    // degenerate fan: consistency limit
    return 0.5 * (ql + qr);
  }
  const State fl = euler_flux(ql, gas) * n;
  const State fr = euler_flux(qr, gas) * n;
  return (sr * qr - sl * ql + fl - fr) / (sr - sl);
}

namespace {

// contributor states of one global sub-node restricted to one incident cell
void cell_contributions(const MotionContext& ctx, const NodalSolverInput& in, int cell,
                        int local, std::vector<State>& states) {
  const Discretization& d = *ctx.d;
  if (!(*in.flags)[cell]) {
    states.push_back(time_integrated_node_state(d, (*in.preds)[cell], local));
  } else {
    for (int s : d.sg.subcells_of_subnode[local])
      states.push_back((*in.averages)[cell].row(s).transpose());
  }
}

State mean_state(const std::vector<State>& states) {
  State q = State::Zero();
  for (const auto& s : states) q += s;
  return q / double(states.size());
}

}  // namespace

void laplace_internal_velocities(const Discretization& d, const std::vector<Vec2>& positions,
                                 std::vector<Vec2>& velocity) {
  const SubGrid& sg = d.sg;
  std::vector<int> internal, index(sg.n_subnodes, -1);
  for (int k = 0; k < sg.n_subnodes; ++k)
    if (sg.kind[k] == SubnodeKind::Internal) {
      index[k] = int(internal.size());
      internal.push_back(k);
    }
  if (internal.empty()) return;
  const int n = int(internal.size());
  MatX K = MatX::Zero(n, n);
  MatX rhs = MatX::Zero(n, 2);

  for (const auto& c : sg.cells) {
    const Vec2 a = positions[c[0]], b = positions[c[1]], e = positions[c[2]];
    const double area = triangle_area(a, b, e);
    if (!(area > 0.0)) throw std::runtime_error("degenerate sub-grid in Laplace solve");
    // P1 gradients: grad lambda_i = rot(opposite edge) / (2 area)
    Vec2 g[3];
    g[0] = Vec2(b[1] - e[1], e[0] - b[0]) / (2.0 * area);
    g[1] = Vec2(e[1] - a[1], a[0] - e[0]) / (2.0 * area);
    g[2] = Vec2(a[1] - b[1], b[0] - a[0]) / (2.0 * area);
    for (int i = 0; i < 3; ++i) {
      if (index[c[i]] < 0) continue;
      for (int j = 0; j < 3; ++j) {
        const double kij = area * g[i].dot(g[j]);
        if (index[c[j]] >= 0)
          K(index[c[i]], index[c[j]]) += kij;
        else
          rhs.row(index[c[i]]) -= kij * velocity[c[j]].transpose();
      }
    }
  }
  const MatX sol = Eigen::LDLT<MatX>(K).solve(rhs);
  for (int i = 0; i < n; ++i) velocity[internal[i]] = sol.row(i).transpose();
}

std::vector<Vec2> solve_node_velocities(const MotionContext& ctx, const std::vector<Vec2>& xn,
                                        const NodalSolverInput& in) {
  const Discretization& d = *ctx.d;
  const GlobalSubnodes& gsn = *ctx.gsn;
  const TriMesh& mesh = *ctx.mesh;
  std::vector<Vec2> vbar(gsn.count, Vec2::Zero());

  if (ctx.mode == MotionMode::Eulerian) return vbar;
  if (ctx.mode == MotionMode::Prescribed) {
    for (int k = 0; k < gsn.count; ++k) vbar[k] = ctx.prescribed(xn[k], ctx.t0);
    return vbar;
  }

  // vertex and face sub-nodes from the effective neighborhood
  std::vector<State> states, side;
  for (int k = 0; k < gsn.count; ++k) {
    const SubnodeKind kind = gsn.kind[k];
    if (kind == SubnodeKind::Internal) continue;

    if (kind == SubnodeKind::Vertex || gsn.incidence[k].size() == 1) {
      states.clear();
      for (const auto& [cell, local] : gsn.incidence[k])
        cell_contributions(ctx, in, cell, local, states);
      const State q = mean_state(states);
      if (!is_admissible(q, *ctx.gas))
        throw std::runtime_error("inadmissible sub-node state in the nodal solver");
      vbar[k] = velocity(q);
    } else {
      // interior face sub-node: HLL between the two sides, normal taken
      // outward from the lower-indexed cell
      const auto [c0, l0] = gsn.incidence[k][0];
      const auto [c1, l1] = gsn.incidence[k][1];
      const bool first_left = c0 <= c1;
      const auto [cl, ll] = first_left ? gsn.incidence[k][0] : gsn.incidence[k][1];
      const auto [cr, lr] = first_left ? gsn.incidence[k][1] : gsn.incidence[k][0];

      states.clear();
      cell_contributions(ctx, in, cl, ll, states);
      const State qlft = mean_state(states);
      states.clear();
      cell_contributions(ctx, in, cr, lr, states);
      const State qrgt = mean_state(states);

      // bisector normal of the two adjacent sub-edges on the left side
      const auto [edge, slot] = d.sg.face_slot[ll];
      const int ga = d.sg.edge_subnodes[edge][slot - 1];
      const int gb = d.sg.edge_subnodes[edge][slot];
      const int gc = d.sg.edge_subnodes[edge][slot + 1];
      const Vec2 pa = gsn.presented(xn, cl, ga), pb = gsn.presented(xn, cl, gb),
                 pc = gsn.presented(xn, cl, gc);
      Vec2 n1(pb[1] - pa[1], pa[0] - pb[0]);
      Vec2 n2(pc[1] - pb[1], pb[0] - pc[0]);
      Vec2 n = n1.normalized() + n2.normalized();
      n.normalize();

      const State q = hll_state(qlft, qrgt, n, *ctx.gas);
      if (!is_admissible(q, *ctx.gas)) {
        // robust fallback: arithmetic mean velocity
        vbar[k] = 0.5 * (velocity(qlft) + velocity(qrgt));
      } else {
        vbar[k] = velocity(q);
      }
    }
  }

  // wall constraints on boundary sub-nodes
  for (int k = 0; k < gsn.count; ++k) {
    if (!gsn.on_boundary[k] || gsn.kind[k] == SubnodeKind::Internal) continue;
    bool moving = false, slip = false;
    std::vector<Vec2> tangents;
    Vec2 xk = xn[k];
    for (const auto& [cell, local] : gsn.incidence[k]) {
      for (int e = 0; e < 3; ++e) {
        const BoundaryTag tag = mesh.adj[cell][e].tag;
        if (tag == BoundaryTag::Interior) continue;
        // is this sub-node on edge e?
        const auto& lst = d.sg.edge_subnodes[e];
        int pos = -1;
        for (int j = 0; j <= d.ns; ++j)
          if (lst[j] == local) pos = j;
        if (pos < 0) continue;
        if (tag == BoundaryTag::MovingWall) moving = true;
        if (tag == BoundaryTag::SlipWall) {
          slip = true;
          if (pos > 0) {
            const Vec2 t = gsn.presented(xn, cell, lst[pos]) -
                           gsn.presented(xn, cell, lst[pos - 1]);
            tangents.push_back(t.normalized());
          }
          if (pos < d.ns) {
            const Vec2 t = gsn.presented(xn, cell, lst[pos + 1]) -
                           gsn.presented(xn, cell, lst[pos]);
            tangents.push_back(t.normalized());
          }
        }
      }
    }
    if (moving && ctx.wall_velocity) {
      vbar[k] = ctx.wall_velocity(xk, ctx.t0);
    } else if (slip && !tangents.empty()) {
      // single direction -> project; two independent directions -> pinned
      Vec2 t0 = tangents[0];
      bool corner = false;
      for (const Vec2& t : tangents)
        if (std::abs(t0[0] * t[1] - t0[1] * t[0]) > 1e-8) corner = true;
      vbar[k] = corner ? Vec2::Zero() : Vec2(t0 * t0.dot(vbar[k]));
    }
  }

  // internal sub-nodes: local Laplace per cell
  std::vector<Vec2> pos(d.K), vel(d.K);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    bool has_internal = false;
    for (int k = 0; k < d.K; ++k) {
      pos[k] = gsn.presented(xn, c, k);
      vel[k] = vbar[gsn.gid[c][k]];
      has_internal |= (d.sg.kind[k] == SubnodeKind::Internal);
    }
    if (!has_internal) continue;
    laplace_internal_velocities(d, pos, vel);
    for (int k = 0; k < d.K; ++k)
      if (d.sg.kind[k] == SubnodeKind::Internal) vbar[gsn.gid[c][k]] = vel[k];
  }
  return vbar;
}

std::vector<Vec2> lagrangian_positions(const std::vector<Vec2>& xn,
                                       const std::vector<Vec2>& vbar, double dt) {
  std::vector<Vec2> out(xn.size());
  for (size_t k = 0; k < xn.size(); ++k) out[k] = xn[k] + dt * vbar[k];
  return out;
}

double subcell_quality(const Vec2& a, const Vec2& b, const Vec2& c) {
  // J maps the equilateral reference triangle onto (a,b,c)
  static const Mat2 winv = [] {
    Mat2 w;
    w << 1.0, 0.5, 0.0, std::sqrt(3.0) / 2.0;
    return Mat2(w.inverse());
  }();
  Mat2 p;
  p.col(0) = b - a;
  p.col(1) = c - a;
  const Mat2 j = p * winv;
  const double det = j.determinant();
  if (!(det > 0.0)) return 1e30;
  const double fro2 = j.squaredNorm();
  return fro2 * fro2 / (det * det);
}

namespace {

struct NodePatch {
  // (cell, subcell, which corner is this node)
  std::vector<std::array<int, 3>> members;
};

double patch_objective(const MotionContext& ctx, const NodePatch& patch,
                       const std::vector<Vec2>& x, int node, const Vec2& trial) {
  const Discretization& d = *ctx.d;
  const GlobalSubnodes& gsn = *ctx.gsn;
  double obj = 0.0;
  for (const auto& [cell, s, corner] : patch.members) {
    const auto& sc = d.sg.cells[s];
    Vec2 p[3];
    for (int v = 0; v < 3; ++v) {
      p[v] = gsn.presented(x, cell, sc[v]);
      if (v == corner) p[v] = trial + gsn.shift[cell][sc[v]];
    }
    obj += subcell_quality(p[0], p[1], p[2]);
  }
  return obj;
}

double patch_min_area(const MotionContext& ctx, const NodePatch& patch,
                      const std::vector<Vec2>& x) {
  const Discretization& d = *ctx.d;
  const GlobalSubnodes& gsn = *ctx.gsn;
  double amin = std::numeric_limits<double>::infinity();
  for (const auto& [cell, s, corner] : patch.members) {
    const auto& sc = d.sg.cells[s];
    amin = std::min(amin, triangle_area(gsn.presented(x, cell, sc[0]),
                                        gsn.presented(x, cell, sc[1]),
                                        gsn.presented(x, cell, sc[2])));
  }
  return amin;
}

}  // namespace

std::vector<Vec2> rezone(const MotionContext& ctx, const std::vector<Vec2>& xlag) {
  const Discretization& d = *ctx.d;
  const GlobalSubnodes& gsn = *ctx.gsn;
  std::vector<Vec2> x = xlag;

  // patches of interior nodes
  std::vector<NodePatch> patch(gsn.count);
  std::vector<double> hloc(gsn.count, 0.0);
  for (int k = 0; k < gsn.count; ++k) {
    if (gsn.on_boundary[k]) continue;
    for (const auto& [cell, local] : gsn.incidence[k])
      for (int s : d.sg.subcells_of_subnode[local]) {
        const auto& sc = d.sg.cells[s];
        int corner = -1;
        for (int v = 0; v < 3; ++v)
          if (sc[v] == local) corner = v;
        patch[k].members.push_back({cell, s, corner});
        hloc[k] = std::max(hloc[k], (gsn.presented(xlag, cell, sc[0]) -
                                     gsn.presented(xlag, cell, sc[1])).norm());
      }
  }

  for (int sweep = 0; sweep < 3; ++sweep) {
    for (int k = 0; k < gsn.count; ++k) {
      if (gsn.on_boundary[k] || patch[k].members.empty()) continue;
      const double h = 1e-5 * hloc[k];
      const Vec2 p0 = x[k];
      auto f = [&](double dx, double dy) {
        return patch_objective(ctx, patch[k], x, k, p0 + Vec2(dx, dy));
      };
      const double f0 = f(0, 0);
      const double fx = (f(h, 0) - f(-h, 0)) / (2 * h);
      const double fy = (f(0, h) - f(0, -h)) / (2 * h);
      const double fxx = (f(h, 0) - 2 * f0 + f(-h, 0)) / (h * h);
      const double fyy = (f(0, h) - 2 * f0 + f(0, -h)) / (h * h);
      const double fxy = (f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4 * h * h);
      const double det = fxx * fyy - fxy * fxy;
      Vec2 step;
      if (det > 0.0 && fxx > 0.0) {
        step = -Vec2(fyy * fx - fxy * fy, fxx * fy - fxy * fx) / det;
      } else {
        const double gn = std::hypot(fx, fy);
        if (gn < 1e-30) continue;
        step = -Vec2(fx, fy) * (0.1 * hloc[k] / gn);
      }
      double alpha = 1.0;
      for (int ls = 0; ls < 6; ++ls, alpha *= 0.5) {
        const Vec2 trial = p0 + alpha * step;
        if (patch_objective(ctx, patch[k], x, k, trial) < f0) {
          x[k] = trial;
          break;
        }
      }
    }
  }

  // per-node validity guard against the Lagrangian configuration
  for (int k = 0; k < gsn.count; ++k) {
    if (gsn.on_boundary[k] || patch[k].members.empty()) continue;
    if (patch_min_area(ctx, patch[k], x) < patch_min_area(ctx, patch[k], xlag)) x[k] = xlag[k];
  }
  return x;
}

std::vector<double> relax(const MotionContext& ctx, const std::vector<Vec2>& xn,
                          const std::vector<Vec2>& xlag, const std::vector<Vec2>& xrez,
                          const RelaxSpec& spec, std::vector<Vec2>& xnp1) {
  const Discretization& d = *ctx.d;
  const GlobalSubnodes& gsn = *ctx.gsn;
  std::vector<double> omega(gsn.count, 0.0);

  if (spec.kind == RelaxSpec::Kind::Lagrange) {
    xnp1 = xlag;
    return omega;
  }
  if (spec.kind == RelaxSpec::Kind::Constant) {
    xnp1.resize(gsn.count);
    for (int k = 0; k < gsn.count; ++k) {
      omega[k] = std::clamp(spec.omega0, 0.0, 1.0);
      xnp1[k] = xlag[k] + omega[k] * (xrez[k] - xlag[k]);
    }
    return omega;
  }

  // deformation-based: sigma_k = max ||F_s - I||_F over incident sub-cells
  std::vector<double> sigma(gsn.count, 0.0);
  for (int c = 0; c < ctx.mesh->n_cells(); ++c)
    for (int s = 0; s < d.S; ++s) {
      const auto& sc = d.sg.cells[s];
      Mat2 pn, pl;
      pn.col(0) = gsn.presented(xn, c, sc[1]) - gsn.presented(xn, c, sc[0]);
      pn.col(1) = gsn.presented(xn, c, sc[2]) - gsn.presented(xn, c, sc[0]);
      pl.col(0) = gsn.presented(xlag, c, sc[1]) - gsn.presented(xlag, c, sc[0]);
      pl.col(1) = gsn.presented(xlag, c, sc[2]) - gsn.presented(xlag, c, sc[0]);
      const double sig = (pl * pn.inverse() - Mat2::Identity()).norm();
      for (int v = 0; v < 3; ++v) {
        const int g = gsn.gid[c][sc[v]];
        sigma[g] = std::max(sigma[g], sig);
      }
    }
  xnp1.resize(gsn.count);
  for (int k = 0; k < gsn.count; ++k) {
    omega[k] = std::clamp(sigma[k] / (sigma[k] + 0.1), 0.0, 1.0);
    xnp1[k] = xlag[k] + omega[k] * (xrez[k] - xlag[k]);
  }
  return omega;
}

bool snapshot_valid(const MotionContext& ctx, const std::vector<Vec2>& x) {
  const Discretization& d = *ctx.d;
  const GlobalSubnodes& gsn = *ctx.gsn;
  for (int c = 0; c < ctx.mesh->n_cells(); ++c)
    for (const auto& sc : d.sg.cells) {
      const double a = triangle_area(gsn.presented(x, c, sc[0]), gsn.presented(x, c, sc[1]),
                                     gsn.presented(x, c, sc[2]));
      if (!(a > 0.0)) return false;
    }
  return true;
}

}  // namespace aledg
