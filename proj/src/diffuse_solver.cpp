#include "nsac/diffuse_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <tuple>

#include "nsac/errors.hpp"
#include "nsac/numerics.hpp"

namespace nsac {

namespace {

// Index helpers with ghost handling. Periodic wraps; walls mirror c (Neumann)
// and reflect tangential velocity (no slip).
struct Access {
  const GridSpec& g;
  bool per;
  std::ptrdiff_t nx, ny;

  explicit Access(const GridSpec& grid)
      : g(grid), per(grid.periodic()), nx(static_cast<std::ptrdiff_t>(grid.nx)),
        ny(static_cast<std::ptrdiff_t>(grid.ny)) {}

  static std::size_t wrap(std::ptrdiff_t i, std::ptrdiff_t n) { return static_cast<std::size_t>(((i % n) + n) % n); }

  double c(const ScalarField2D& f, std::ptrdiff_t i, std::ptrdiff_t j) const {
    if (per) return f(wrap(i, nx), wrap(j, ny));
    return f(static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(i, 0, nx - 1)),
             static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(j, 0, ny - 1)));
  }

  // u on face x = i h, i in [0, nx]; j in [-1, ny].
  double u(const MacVelocity& v, std::ptrdiff_t i, std::ptrdiff_t j) const {
    if (per) return v.u(wrap(i, nx), wrap(j, ny));
    if (i <= 0 || i >= nx) return 0.0;
    if (j < 0) return -v.u(static_cast<std::size_t>(i), 0);
    if (j >= ny) return -v.u(static_cast<std::size_t>(i), static_cast<std::size_t>(ny - 1));
    return v.u(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  }

  // v on face y = j h, j in [0, ny]; i in [-1, nx].
  double v(const MacVelocity& w, std::ptrdiff_t i, std::ptrdiff_t j) const {
    if (per) return w.v(wrap(i, nx), wrap(j, ny));
    if (j <= 0 || j >= ny) return 0.0;
    if (i < 0) return -w.v(0, static_cast<std::size_t>(j));
    if (i >= nx) return -w.v(static_cast<std::size_t>(nx - 1), static_cast<std::size_t>(j));
    return w.v(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  }
};

double max_abs(const ScalarField2D& f) {
  double m = 0.0;
  for (double x : f.values()) m = std::max(m, std::abs(x));
  return m;
}

ScalarField2D flux_divergence(const GridSpec& g, const MacVelocity& vel, const ScalarField2D& c) {
  const Access a(g);
  const double ih = 1.0 / g.h();
  ScalarField2D out(g);
  for (std::ptrdiff_t j = 0; j < a.ny; ++j) {
    for (std::ptrdiff_t i = 0; i < a.nx; ++i) {
      const double cc = a.c(c, i, j);
      const double fr = a.u(vel, i + 1, j) * 0.5 * (cc + a.c(c, i + 1, j));
      const double fl = a.u(vel, i, j) * 0.5 * (cc + a.c(c, i - 1, j));
      const double ft = a.v(vel, i, j + 1) * 0.5 * (cc + a.c(c, i, j + 1));
      const double fb = a.v(vel, i, j) * 0.5 * (cc + a.c(c, i, j - 1));
      out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = (fr - fl + ft - fb) * ih;
    }
  }
  return out;
}

}  // namespace

double viscosity(double c, double nu_plus, double nu_minus) noexcept {
  return nu_minus + (nu_plus - nu_minus) * std::clamp(0.5 * (c + 1.0), 0.0, 1.0);
}

double lambda_eps(const DiffuseState& state, const Potential& potential) {
  std::vector<double> fp(state.c.size());
  for (std::size_t k = 0; k < fp.size(); ++k) fp[k] = potential.df(state.c[k]);
  return pairwise_sum(fp) / static_cast<double>(fp.size()) / state.eps;
}

DiffuseSolver::DiffuseSolver(const GridSpec& grid, DiffuseParams params)
    : grid_(grid), params_(std::move(params)), solver_(grid) {
  if (params_.mode == VelocityMode::Prescribed && !params_.prescribed)
    throw Error(ErrorCode::BadConfig, "prescribed velocity mode needs a velocity field");
  if (!(params_.nu_plus >= 0.0) || !(params_.nu_minus >= 0.0))
    throw Error(ErrorCode::BadConfig, "viscosities must be non-negative");
  s_stab_ = params_.s_stab.value_or(params_.potential.max_abs_d2f_on_wells());
  if (!(s_stab_ >= 0.0)) throw Error(ErrorCode::BadConfig, "stabilisation constant must be non-negative");
}

double DiffuseSolver::max_dt(const DiffuseState& state) const {
  const double h = grid_.h();
  double lim = s_stab_ > 0.0 ? params_.c_ac * state.eps * state.eps / s_stab_ : std::numeric_limits<double>::infinity();
  double vmax = 0.0;
  if (params_.mode == VelocityMode::Prescribed)
    vmax = sample_velocity(grid_, [&](const Vec2& x) { return (*params_.prescribed)(x, state.t); }).max_abs();
  else if (params_.mode == VelocityMode::NavierStokes)
    vmax = state.v.max_abs();
  if (vmax > 0.0) lim = std::min(lim, params_.c_adv * h / vmax);
  if (params_.mode == VelocityMode::NavierStokes) {
    const double nu_max = std::max(params_.nu_plus, params_.nu_minus);
    lim = std::min(lim, params_.c_diff * h * h * std::min(1.0, nu_max > 0.0 ? 1.0 / nu_max : 1.0));
  }
  return lim;
}

MacVelocity DiffuseSolver::project(const MacVelocity& vel, ScalarField2D* pressure_potential) {
  auto div = divergence(grid_, vel);
  for (auto& x : div.values()) x = -x;
  const auto phi = solver_.solve(0.0, div);
  MacVelocity out = vel;
  subtract_gradient(grid_, phi, 1.0, out);
  const double after = max_abs(divergence(grid_, out));
  const double scale = std::max(1.0, out.max_abs() / grid_.h());
  if (!(after <= 1e-10 * scale)) throw Error(ErrorCode::ProjectionDiverged, "projection left a divergence above 1e-10");
  if (pressure_potential) *pressure_potential = phi;
  return out;
}

MacVelocity DiffuseSolver::momentum_rhs(const DiffuseState& s) const {
  const Access a(grid_);
  const double h = grid_.h(), ih = 1.0 / h;
  const double eps = s.eps;
  const auto& c = s.c;
  const auto& w = s.v;
  const double np = params_.nu_plus, nm = params_.nu_minus;
  const auto lap = laplacian(grid_, c);
  auto nu_cell = [&](std::ptrdiff_t i, std::ptrdiff_t j) { return viscosity(a.c(c, i, j), np, nm); };
  auto nu_corner = [&](std::ptrdiff_t i, std::ptrdiff_t j) {
    return 0.25 * (nu_cell(i - 1, j - 1) + nu_cell(i, j - 1) + nu_cell(i - 1, j) + nu_cell(i, j));
  };
  // Shear stress at corner (i h, j h).
  auto txy = [&](std::ptrdiff_t i, std::ptrdiff_t j) {
    return nu_corner(i, j) * ((a.u(w, i, j) - a.u(w, i, j - 1)) * ih + (a.v(w, i, j) - a.v(w, i - 1, j)) * ih);
  };
  auto txx = [&](std::ptrdiff_t i, std::ptrdiff_t j) { return 2.0 * nu_cell(i, j) * (a.u(w, i + 1, j) - a.u(w, i, j)) * ih; };
  auto tyy = [&](std::ptrdiff_t i, std::ptrdiff_t j) { return 2.0 * nu_cell(i, j) * (a.v(w, i, j + 1) - a.v(w, i, j)) * ih; };

  MacVelocity rhs(grid_);
  const std::ptrdiff_t i0 = a.per ? 0 : 1;
  for (std::ptrdiff_t j = 0; j < a.ny; ++j) {
    for (std::ptrdiff_t i = i0; i < a.nx; ++i) {
      const double uc = a.u(w, i, j);
      const double vbar = 0.25 * (a.v(w, i - 1, j) + a.v(w, i, j) + a.v(w, i - 1, j + 1) + a.v(w, i, j + 1));
      const double conv = uc * (a.u(w, i + 1, j) - a.u(w, i - 1, j)) * 0.5 * ih +
                          vbar * (a.u(w, i, j + 1) - a.u(w, i, j - 1)) * 0.5 * ih;
      const double visc = (txx(i, j) - txx(i - 1, j)) * ih + (txy(i, j + 1) - txy(i, j)) * ih;
      const double lapf = 0.5 * (a.c(lap, i - 1, j) + a.c(lap, i, j));
      const double force = -eps * lapf * (a.c(c, i, j) - a.c(c, i - 1, j)) * ih;
      rhs.u(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = -conv + visc + force;
    }
  }
  const std::ptrdiff_t j0 = a.per ? 0 : 1;
  for (std::ptrdiff_t j = j0; j < a.ny; ++j) {
    for (std::ptrdiff_t i = 0; i < a.nx; ++i) {
      const double vc = a.v(w, i, j);
      const double ubar = 0.25 * (a.u(w, i, j - 1) + a.u(w, i + 1, j - 1) + a.u(w, i, j) + a.u(w, i + 1, j));
      const double conv = ubar * (a.v(w, i + 1, j) - a.v(w, i - 1, j)) * 0.5 * ih +
                          vc * (a.v(w, i, j + 1) - a.v(w, i, j - 1)) * 0.5 * ih;
      const double visc = (tyy(i, j) - tyy(i, j - 1)) * ih + (txy(i + 1, j) - txy(i, j)) * ih;
      const double lapf = 0.5 * (a.c(lap, i, j - 1) + a.c(lap, i, j));
      const double force = -eps * lapf * (a.c(c, i, j) - a.c(c, i, j - 1)) * ih;
      rhs.v(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = -conv + visc + force;
    }
  }
  return rhs;
}

std::pair<DiffuseState, Diagnostics> DiffuseSolver::step(const DiffuseState& state, double dt) {
  if (!state.c.matches(grid_) || !state.v.u.matches(grid_) || !state.v.v.matches(grid_))
    throw Error(ErrorCode::GridMismatch, "state does not match the solver grid");
  if (!(dt > 0.0)) throw Error(ErrorCode::BadConfig, "dt must be positive");
  if (!(state.eps > 0.0)) throw Error(ErrorCode::BadConfig, "eps must be positive");
  const double lim = max_dt(state);
  if (dt > lim * (1.0 + 1e-12)) throw Error(ErrorCode::CFLViolation, "dt exceeds the stability limit");

  DiffuseState next = state;
  MacVelocity vel = state.v;
  if (params_.mode == VelocityMode::Prescribed) {
    vel = project(sample_velocity(grid_, [&](const Vec2& x) { return (*params_.prescribed)(x, state.t); }));
  } else if (params_.mode == VelocityMode::Zero) {
    vel = MacVelocity(grid_);
  }

  const double e2 = state.eps * state.eps;
  const std::size_t n = grid_.cells();
  std::vector<double> fp(n);
  for (std::size_t k = 0; k < n; ++k) fp[k] = params_.potential.df(state.c[k]);
  const double fmean = pairwise_sum(fp) / static_cast<double>(n);
  const double alpha = 1.0 / dt + s_stab_ / e2;
  ScalarField2D rhs(grid_);
  const bool moving = params_.mode != VelocityMode::Zero;
  const ScalarField2D conv = moving ? flux_divergence(grid_, vel, state.c) : ScalarField2D(grid_);
  for (std::size_t k = 0; k < n; ++k) rhs[k] = alpha * state.c[k] - conv[k] - (fp[k] - fmean) / e2;
  next.c = solver_.solve(alpha, rhs);

  if (params_.mode == VelocityMode::NavierStokes) {
    const auto r = momentum_rhs(state);
    MacVelocity star = state.v;
    for (std::size_t k = 0; k < n; ++k) {
      star.u[k] += dt * r.u[k];
      star.v[k] += dt * r.v[k];
    }
    ScalarField2D phi;
    vel = project(star, &phi);
    for (auto& x : phi.values()) x /= dt;
    next.p = std::move(phi);
  }
  next.v = vel;
  next.t = state.t + dt;
  auto d = diagnostics(next);
  return {std::move(next), std::move(d)};
}

Diagnostics DiffuseSolver::diagnostics(const DiffuseState& s) const {
  const GridSpec& g = grid_;
  const std::size_t n = g.cells();
  const double eps = s.eps, h = g.h(), area = g.cell_area();
  Diagnostics d;
  d.t = s.t;
  d.mass = integrate(g, s.c);
  d.max_abs_c = max_abs(s.c);
  std::vector<double> f(n), fp(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto e = params_.potential.eval(s.c[k]);
    f[k] = e.f;
    fp[k] = e.df;
  }
  const double fmean = pairwise_sum(fp) / static_cast<double>(n);
  d.lambda_eps = fmean / eps;
  d.energy = kinetic_energy(g, s.v) + gradient_energy(g, s.c, eps) + pairwise_sum(f) * area / eps;

  const auto lap = laplacian(g, s.c);
  ScalarField2D mu(g);
  std::vector<double> mu2(n);
  for (std::size_t k = 0; k < n; ++k) {
    mu[k] = -eps * lap[k] + (fp[k] - fmean) / eps;
    mu2[k] = mu[k] * mu[k];
  }
  double visc = 0.0;
  if (s.v.max_abs() > 0.0) {
    const Access a(g);
    const double ih = 1.0 / h;
    const double np = params_.nu_plus, nm = params_.nu_minus;
    std::vector<double> cell(n);
    for (std::ptrdiff_t j = 0; j < a.ny; ++j)
      for (std::ptrdiff_t i = 0; i < a.nx; ++i) {
        const double dxx = (a.u(s.v, i + 1, j) - a.u(s.v, i, j)) * ih;
        const double dyy = (a.v(s.v, i, j + 1) - a.v(s.v, i, j)) * ih;
        cell[static_cast<std::size_t>(j * a.nx + i)] = 2.0 * viscosity(a.c(s.c, i, j), np, nm) * (dxx * dxx + dyy * dyy);
      }
    const std::ptrdiff_t kx = a.per ? a.nx - 1 : a.nx, ky = a.per ? a.ny - 1 : a.ny;
    std::vector<double> corner;
    corner.reserve(static_cast<std::size_t>((kx + 1) * (ky + 1)));
    for (std::ptrdiff_t j = 0; j <= ky; ++j)
      for (std::ptrdiff_t i = 0; i <= kx; ++i) {
        const double dxy = 0.5 * ((a.u(s.v, i, j) - a.u(s.v, i, j - 1)) * ih + (a.v(s.v, i, j) - a.v(s.v, i - 1, j)) * ih);
        const double nu = 0.25 * (viscosity(a.c(s.c, i - 1, j - 1), np, nm) + viscosity(a.c(s.c, i, j - 1), np, nm) +
                                  viscosity(a.c(s.c, i - 1, j), np, nm) + viscosity(a.c(s.c, i, j), np, nm));
        double wgt = 1.0;
        if (!a.per) {
          if (i == 0 || i == a.nx) wgt *= 0.5;
          if (j == 0 || j == a.ny) wgt *= 0.5;
        }
        corner.push_back(wgt * 4.0 * nu * dxy * dxy);
      }
    visc = (pairwise_sum(cell) + pairwise_sum(corner)) * area;
  }
  d.dissipation = visc + pairwise_sum(mu2) * area / eps;
  d.max_div = max_abs(divergence(g, s.v));
  if (params_.keep_mu) d.mu_field = std::move(mu);
  return d;
}

DiffuseState init_well_prepared(const GridSpec& grid, const Interface& gamma, double eps, const ProfileTable& table,
                                int order, std::optional<double> lambda0, const std::optional<VelocityField>& velocity) {
  ApproxOptions o;
  o.order = order;
  o.lambda0 = lambda0;
  auto approx = build_approx_solution(grid, gamma, eps, table, o);
  DiffuseState s;
  s.grid = grid;
  s.c = std::move(approx.c_A);
  s.v = MacVelocity(grid);
  s.p = ScalarField2D(grid);
  s.eps = eps;
  if (velocity) {
    DiffuseParams params;
    DiffuseSolver solver(grid, params);
    s.v = solver.project(sample_velocity(grid, [&](const Vec2& x) { return (*velocity)(x, 0.0); }));
  }
  return s;
}

namespace {

using EdgeKey = std::tuple<int, std::size_t, std::size_t>;  // (0 horizontal | 1 vertical, i, j)

struct Segment {
  EdgeKey from, to;
};

}  // namespace

std::vector<ZeroLevelComponent> extract_zero_level(const DiffuseState& state, std::size_t samples) {
  const GridSpec& g = state.grid;
  const auto& c = state.c;
  const std::size_t nx = g.nx, ny = g.ny;
  const double h = g.h();
  const bool per = g.periodic();
  bool pos = false, neg = false;
  for (double x : c.values()) (x > 0.0 ? pos : neg) = true;
  if (!(pos && neg)) throw Error(ErrorCode::NoInterface, "c has no sign change");

  std::map<EdgeKey, Vec2> points;
  auto crossing = [&](const EdgeKey& key) -> Vec2 {
    if (auto it = points.find(key); it != points.end()) return it->second;
    const auto [dir, i, j] = key;
    const std::size_t i1 = dir == 0 ? (i + 1) % nx : i, j1 = dir == 1 ? (j + 1) % ny : j;
    const double va = c(i, j), vb = c(i1, j1);
    const double t = va / (va - vb);
    Vec2 p = g.center(i, j);
    if (dir == 0) p.x() += t * h; else p.y() += t * h;
    if (per) {
      p.x() = std::fmod(p.x(), g.lx);
      p.y() = std::fmod(p.y(), g.ly);
    }
    points.emplace(key, p);
    return p;
  };

  std::vector<Segment> segs;
  const std::size_t sx = per ? nx : nx - 1, sy = per ? ny : ny - 1;
  for (std::size_t j = 0; j < sy; ++j) {
    for (std::size_t i = 0; i < sx; ++i) {
      const std::size_t ip = (i + 1) % nx, jp = (j + 1) % ny;
      const double v[4] = {c(i, j), c(ip, j), c(ip, jp), c(i, jp)};
      const EdgeKey e[4] = {{0, i, j}, {1, ip, j}, {0, i, jp}, {1, i, j}};
      std::vector<int> starts, ends;
      for (int k = 0; k < 4; ++k) {
        const bool a = v[k] > 0.0, b = v[(k + 1) % 4] > 0.0;
        if (a && !b) starts.push_back(k);
        if (!a && b) ends.push_back(k);
      }
      if (starts.empty()) continue;
      if (starts.size() == 1) {
        segs.push_back({e[starts[0]], e[ends[0]]});
      } else {
        const bool centre_pos = 0.25 * (v[0] + v[1] + v[2] + v[3]) > 0.0;
        // starts are the edges leaving + corners in CCW order; ends follow the next + corner
        const int s0 = starts[0], s1 = starts[1];
        const int e_after0 = (s0 + 1) % 4, e_after1 = (s1 + 1) % 4;
        const int e_before0 = (s0 + 3) % 4, e_before1 = (s1 + 3) % 4;
        if (centre_pos) {
          segs.push_back({e[s0], e[e_after0]});
          segs.push_back({e[s1], e[e_after1]});
        } else {
          segs.push_back({e[s0], e[e_before0]});
          segs.push_back({e[s1], e[e_before1]});
        }
      }
    }
  }

  std::map<EdgeKey, std::size_t> by_start;
  std::map<EdgeKey, bool> is_end;
  for (std::size_t k = 0; k < segs.size(); ++k) {
    by_start[segs[k].from] = k;
    is_end[segs[k].to] = true;
  }
  std::vector<bool> used(segs.size(), false);
  std::vector<ZeroLevelComponent> out;

  auto unwrap = [&](const Vec2& prev, Vec2 p) {
    if (!per) return p;
    p.x() += g.lx * std::round((prev.x() - p.x()) / g.lx);
    p.y() += g.ly * std::round((prev.y() - p.y()) / g.ly);
    return p;
  };

  auto trace = [&](std::size_t first) {
    ZeroLevelComponent comp;
    std::size_t k = first;
    comp.points.push_back(crossing(segs[k].from));
    while (true) {
      used[k] = true;
      const EdgeKey next = segs[k].to;
      const Vec2 p = unwrap(comp.points.back(), crossing(next));
      auto it = by_start.find(next);
      if (next == segs[first].from) {
        comp.closed = true;
        comp.wraps = (p - comp.points.front()).norm() > 0.5 * h;
        break;
      }
      comp.points.push_back(p);
      if (it == by_start.end() || used[it->second]) break;
      k = it->second;
    }
    return comp;
  };

  for (std::size_t k = 0; k < segs.size(); ++k)
    if (!used[k] && !is_end.count(segs[k].from)) out.push_back(trace(k));
  for (std::size_t k = 0; k < segs.size(); ++k)
    if (!used[k]) out.push_back(trace(k));

  for (auto& comp : out) {
    if (!comp.closed || comp.wraps) continue;
    std::vector<Vec2> pts;
    for (const auto& p : comp.points)
      if (pts.empty() || (p - pts.back()).norm() > 1e-9 * h) pts.push_back(p);
    while (pts.size() > 1 && (pts.back() - pts.front()).norm() <= 1e-9 * h) pts.pop_back();
    if (pts.size() < 4) continue;
    const Orientation o = spline_signed_area(pts) > 0.0 ? Orientation::PlusInside : Orientation::PlusOutside;
    try {
      comp.curve = Curve::from_points(pts, o, samples ? samples : std::max<std::size_t>(16, pts.size()));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateCurve) throw;
    }
  }
  return out;
}

}  // namespace nsac
