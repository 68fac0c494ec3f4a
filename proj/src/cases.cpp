#include "aledg/cases.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace aledg {

double kidder_focalisation_time() {
  // gamma = 2, s0 = 1: tau^2 = (gamma-1)(r_e^2 - r_i^2) / (2 (c_e^2 - c_i^2))
  const double gamma = 2.0, s0 = 1.0;
  const double ri = 0.9, re = 1.0, rho_i = 1.0, rho_e = 2.0;
  const double ci2 = gamma * s0 * std::pow(rho_i, gamma - 1.0);
  const double ce2 = gamma * s0 * std::pow(rho_e, gamma - 1.0);
  return std::sqrt((gamma - 1.0) * (re * re - ri * ri) / (2.0 * (ce2 - ci2)));
}

namespace {

double pick(double override_value, double fallback) {
  return override_value >= 0.0 ? override_value : fallback;
}

CaseSetup make_vortex(const SimulationConfig& cfg) {
  CaseSetup cs;
  cs.name = "vortex";
  cs.options.gas.gamma = pick(cfg.gamma, 1.4);
  cs.t_end = 0.1;

  const int nx = cfg.nx > 0 ? cfg.nx : 40;
  int ny = cfg.ny > 0 ? cfg.ny : int(std::lround(nx * 2.0 / std::sqrt(3.0)));
  if (ny % 2) ++ny;
  BoxSpec spec;
  spec.nx = nx;
  spec.ny = ny;
  spec.x0 = spec.y0 = 0.0;
  spec.x1 = spec.y1 = 10.0;
  spec.periodic_x = spec.periodic_y = true;
  spec.iso = true;
  cs.mesh = generate_structured_mesh(spec);

  const double gamma = cs.options.gas.gamma;
  const double eps = 5.0;
  auto state_at = [gamma, eps](const Vec2& x, double t) {
    Vec2 dx = x - Vec2(5.0 + t, 5.0 + t);
    for (int d = 0; d < 2; ++d) dx[d] -= 10.0 * std::round(dx[d] / 10.0);
    const double r2 = dx.squaredNorm();
    const double dT = -(gamma - 1.0) * eps * eps / (8.0 * gamma * M_PI * M_PI) *
                      std::exp(1.0 - r2);
    const double rho = std::pow(1.0 + dT, 1.0 / (gamma - 1.0));
    const double p = std::pow(1.0 + dT, gamma / (gamma - 1.0));
    const double swirl = eps / (2.0 * M_PI) * std::exp(0.5 * (1.0 - r2));
    const Vec2 v(1.0 - dx[1] * swirl, 1.0 + dx[0] * swirl);
    GasModel gm;
    gm.gamma = gamma;
    return prim_to_cons(rho, v, p, gm);
  };
  cs.initial = [state_at](const Vec2& x) { return state_at(x, 0.0); };
  cs.exact = state_at;
  return cs;
}

CaseSetup make_explosion(const SimulationConfig& cfg) {
  CaseSetup cs;
  cs.name = "explosion";
  cs.options.gas.gamma = pick(cfg.gamma, 1.4);
  cs.t_end = 0.25;
  const int rings = cfg.nx > 0 ? cfg.nx : 24;
  cs.mesh = generate_disc_mesh(rings, 1.0,
                               cfg.walls ? BoundaryTag::SlipWall : BoundaryTag::Transmissive);
  const GasModel gm = cs.options.gas;
  cs.initial = [gm](const Vec2& x) {
    const bool inner = x.norm() <= 0.5;
    return prim_to_cons(inner ? 1.0 : 0.125, Vec2::Zero(), inner ? 1.0 : 0.1, gm);
  };
  return cs;
}

CaseSetup make_saltzman(const SimulationConfig& cfg) {
  CaseSetup cs;
  cs.name = "saltzman";
  cs.options.gas.gamma = pick(cfg.gamma, 5.0 / 3.0);
  cs.options.gas.mu = std::max(cfg.mu, 0.0);
  cs.options.gas.prandtl = pick(cfg.prandtl, 0.75);
  cs.t_end = 0.6;

  BoxSpec spec;
  spec.nx = cfg.nx > 0 ? cfg.nx : 100;
  spec.ny = cfg.ny > 0 ? cfg.ny : 10;
  spec.x0 = 0.0;
  spec.x1 = 1.0;
  spec.y0 = 0.0;
  spec.y1 = 0.1;
  spec.left = BoundaryTag::MovingWall;
  spec.right = BoundaryTag::SlipWall;
  spec.top = BoundaryTag::SlipWall;
  spec.bottom = BoundaryTag::SlipWall;
  spec.warp = [](const Vec2& p) {
    return Vec2((0.1 - p[1]) * std::sin(M_PI * p[0]), 0.0);
  };
  cs.mesh = generate_structured_mesh(spec);

  const GasModel gm = cs.options.gas;
  cs.initial = [gm](const Vec2&) { return prim_to_cons(1.0, Vec2::Zero(), 1e-4, gm); };
  cs.hooks.wall_velocity = [](const Vec2&, double) { return Vec2(1.0, 0.0); };
  return cs;
}

CaseSetup make_kidder(const SimulationConfig& cfg) {
  CaseSetup cs;
  cs.name = "kidder";
  cs.options.gas.gamma = pick(cfg.gamma, 2.0);
  cs.options.gas.r_gas = 1.0;
  const double tau = kidder_focalisation_time();
  cs.t_end = std::sqrt(3.0) / 2.0 * tau;

  const int nr = cfg.nx > 0 ? cfg.nx : 10;
  const int nth = cfg.ny > 0 ? cfg.ny : 40;
  cs.mesh = generate_annulus_mesh(nr, nth, 0.9, 1.0, 0.0, M_PI / 2.0,
                                  BoundaryTag::ExactDirichlet, BoundaryTag::ExactDirichlet,
                                  BoundaryTag::SlipWall);

  const double gamma = cs.options.gas.gamma;
  const double s0 = 1.0, ri = 0.9, re = 1.0, rho_i = 1.0, rho_e = 2.0;
  GasModel gm = cs.options.gas;
  auto rho0 = [=](double r) {
    const double w = (re * re - r * r) / (re * re - ri * ri);
    return std::pow(w * std::pow(rho_i, gamma - 1.0) +
                        (1.0 - w) * std::pow(rho_e, gamma - 1.0),
                    1.0 / (gamma - 1.0));
  };
  auto exact = [=](const Vec2& x, double t) {
    const double h = std::sqrt(std::max(1.0 - t * t / (tau * tau), 1e-14));
    const double hdot = -t / (tau * tau * h);
    const double R = x.norm();
    const double r = R / h;
    const double rho = std::pow(h, -2.0 / (gamma - 1.0)) * rho0(r);
    const double p = s0 * std::pow(rho, gamma);
    const Vec2 v = (hdot / h) * x;
    return prim_to_cons(rho, v, p, gm);
  };
  cs.initial = [exact](const Vec2& x) { return exact(x, 0.0); };
  cs.exact = exact;
  cs.hooks.dirichlet = exact;
  return cs;
}

CaseSetup make_sedov(const SimulationConfig& cfg) {
  CaseSetup cs;
  cs.name = "sedov";
  cs.options.gas.gamma = pick(cfg.gamma, 1.4);
  cs.t_end = 1.0;

  BoxSpec spec;
  spec.nx = cfg.nx > 0 ? cfg.nx : 30;
  spec.ny = cfg.ny > 0 ? cfg.ny : 30;
  spec.x0 = spec.y0 = 0.0;
  spec.x1 = spec.y1 = 1.2;
  spec.left = spec.right = spec.bottom = spec.top = BoundaryTag::SlipWall;
  cs.mesh = generate_structured_mesh(spec);

  const GasModel gm = cs.options.gas;
  cs.initial = [gm](const Vec2&) { return prim_to_cons(1.0, Vec2::Zero(), 1e-6, gm); };
  cs.post_init = [gm](Solver& solver) {
    // deposit the total energy in the cell containing the origin
    int origin = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int c = 0; c < solver.mesh().n_cells(); ++c) {
      const double d = solver.cell_barycenter(c).norm();
      if (d < best) {
        best = d;
        origin = c;
      }
    }
    const double e_tot = 0.244816, alpha = 4.0;
    const double v_or = solver.cell_area(origin);
    const double p_or = (gm.gamma - 1.0) * 1.0 * e_tot / (alpha * v_or);
    solver.set_cell_state(origin, prim_to_cons(1.0, Vec2::Zero(), p_or, gm));
  };
  return cs;
}

CaseSetup make_taylor_green(const SimulationConfig& cfg) {
  CaseSetup cs;
  cs.name = "taylor_green";
  cs.options.gas.gamma = pick(cfg.gamma, 1.4);
  cs.options.gas.mu = pick(cfg.mu, 0.1);
  cs.options.gas.prandtl = pick(cfg.prandtl, 0.75);
  cs.t_end = 1.0;

  const int nx = cfg.nx > 0 ? cfg.nx : 24;
  int ny = cfg.ny > 0 ? cfg.ny : int(std::lround(nx * 2.0 / std::sqrt(3.0)));
  if (ny % 2) ++ny;
  BoxSpec spec;
  spec.nx = nx;
  spec.ny = ny;
  spec.x0 = spec.y0 = 0.0;
  spec.x1 = spec.y1 = 2.0 * M_PI;
  spec.periodic_x = spec.periodic_y = true;
  spec.iso = true;
  cs.mesh = generate_structured_mesh(spec);

  GasModel gm = cs.options.gas;
  const double nu = gm.mu / 1.0;
  const double C = 100.0 / gm.gamma;
  auto exact = [gm, nu, C](const Vec2& x, double t) {
    const double f = std::exp(-2.0 * nu * t);
    const double u = std::sin(x[0]) * std::cos(x[1]) * f;
    const double v = -std::cos(x[0]) * std::sin(x[1]) * f;
    const double p = C + 0.25 * (std::cos(2 * x[0]) + std::cos(2 * x[1])) * f * f;
    return prim_to_cons(1.0, Vec2(u, v), p, gm);
  };
  cs.initial = [exact](const Vec2& x) { return exact(x, 0.0); };
  cs.exact = exact;
  return cs;
}

CaseSetup make_freestream(const SimulationConfig& cfg) {
  CaseSetup cs;
  cs.name = "freestream";
  cs.options.gas.gamma = pick(cfg.gamma, 1.4);
  cs.t_end = 1.0;

  const int nx = cfg.nx > 0 ? cfg.nx : 8;
  const int ny = cfg.ny > 0 ? cfg.ny : nx;
  BoxSpec spec;
  spec.nx = nx;
  spec.ny = ny;
  spec.periodic_x = spec.periodic_y = true;

  // random interior perturbation, reproducible through the seed
  std::mt19937 rng(cfg.seed + 12345u);
  std::uniform_real_distribution<double> uni(-0.18, 0.18);
  const double hx = 1.0 / nx, hy = 1.0 / ny;
  spec.warp = [=](const Vec2&) mutable { return Vec2(uni(rng) * hx, uni(rng) * hy); };
  cs.mesh = generate_structured_mesh(spec);

  const GasModel gm = cs.options.gas;
  auto exact = [gm](const Vec2&, double) {
    return prim_to_cons(1.0, Vec2(0.7, 0.3), 1.0, gm);
  };
  cs.initial = [exact](const Vec2& x) { return exact(x, 0.0); };
  cs.exact = exact;
  return cs;
}

}  // namespace

CaseSetup build_case(const SimulationConfig& cfg) {
  CaseSetup cs;
  if (cfg.case_name == "vortex") cs = make_vortex(cfg);
  else if (cfg.case_name == "explosion") cs = make_explosion(cfg);
  else if (cfg.case_name == "saltzman") cs = make_saltzman(cfg);
  else if (cfg.case_name == "kidder") cs = make_kidder(cfg);
  else if (cfg.case_name == "sedov") cs = make_sedov(cfg);
  else if (cfg.case_name == "taylor_green") cs = make_taylor_green(cfg);
  else if (cfg.case_name == "freestream") cs = make_freestream(cfg);
  else throw std::runtime_error("unknown case: " + cfg.case_name);

  if (!cfg.mesh_file.empty()) cs.mesh = load_mesh(cfg.mesh_file);
  if (cfg.t_end > 0) cs.t_end = cfg.t_end;
  cs.options.order = cfg.order;
  cs.options.cfl = cfg.cfl;
  if (cfg.mu >= 0) cs.options.gas.mu = cfg.mu;
  if (cfg.prandtl > 0) cs.options.gas.prandtl = cfg.prandtl;

  if (cfg.motion == "lagrangian") cs.options.motion = MotionMode::Lagrangian;
  else if (cfg.motion == "eulerian") cs.options.motion = MotionMode::Eulerian;
  else throw std::runtime_error("unknown motion mode: " + cfg.motion);

  if (cfg.relax == "deformation") cs.options.relax.kind = RelaxSpec::Kind::Deformation;
  else if (cfg.relax == "constant") cs.options.relax.kind = RelaxSpec::Kind::Constant;
  else if (cfg.relax == "lagrange") cs.options.relax.kind = RelaxSpec::Kind::Lagrange;
  else throw std::runtime_error("unknown relax mode: " + cfg.relax);
  cs.options.relax.omega0 = cfg.omega;
  return cs;
}

}  // namespace aledg
