#include "nsac/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nsac/errors.hpp"
#include "nsac/numerics.hpp"

namespace nsac {

namespace {

constexpr double kFdStep = 1e-5;

Vec2 velocity_at(const std::optional<VelocityField>& v, const Vec2& x, double t) {
  return v ? (*v)(x, t) : Vec2::Zero();
}

double default_normal_velocity(const std::optional<VelocityField>& v, double hbar,
                               const TubeCoords& foot, double t) {
  return foot.normal.dot(velocity_at(v, foot.foot, t)) + foot.curvature - hbar;
}

struct Bracket {
  double at_point;
  double on_gamma;
  double normal_derivative;
};

Bracket bracket(const TubeCoords& tc, const Vec2& x, double lambda0, double sigma, double hbar,
                const G0Options& opt) {
  const double V = opt.V ? opt.V(tc.component, tc.s) : default_normal_velocity(opt.v, hbar, tc, opt.t);
  const double k = tc.curvature;
  const double vn_x = tc.normal.dot(velocity_at(opt.v, x, opt.t));
  const double vn_0 = tc.normal.dot(velocity_at(opt.v, tc.foot, opt.t));
  const double shift = (2.0 / sigma) * lambda0;
  Bracket b;
  b.at_point = -V + vn_x + k / (1.0 - tc.r * k) - shift;
  b.on_gamma = -V + vn_0 + k - shift;
  double dvn = 0.0;
  if (opt.v) {
    const Vec2 plus = tc.foot + kFdStep * tc.normal, minus = tc.foot - kFdStep * tc.normal;
    dvn = tc.normal.dot(velocity_at(opt.v, plus, opt.t) - velocity_at(opt.v, minus, opt.t)) / (2.0 * kFdStep);
  }
  b.normal_derivative = dvn + k * k;
  return b;
}

double hbar_of(const Interface& gamma) { return gamma.mean_curvature(); }

}  // namespace

double mean_normal_velocity(const Interface& gamma, const std::optional<VelocityField>& v, double t) {
  if (!v || gamma.is_line()) return 0.0;
  double num = 0.0, den = 0.0;
  for (const auto& c : gamma.curves()) {
    const double ds = 1.0 / static_cast<double>(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
      const double w = c.speeds()[i] * ds;
      num += c.normals()[i].dot((*v)(c[i], t)) * w;
      den += w;
    }
  }
  return num / den;
}

double compute_lambda0(const Interface& gamma, const std::optional<VelocityField>& v, double sigma, double t) {
  return 0.5 * sigma * (gamma.mean_curvature() - mean_normal_velocity(gamma, v, t));
}

std::vector<double> compute_g0(const Interface& gamma, double lambda0, double sigma, std::span<const Vec2> points,
                               const G0Options& options) {
  const double hbar = hbar_of(gamma);
  std::vector<double> out(points.size());
  for (std::size_t k = 0; k < points.size(); ++k) {
    const auto tc = gamma.project(points[k], std::numeric_limits<double>::infinity());
    const auto b = bracket(tc, points[k], lambda0, sigma, hbar, options);
    if (std::abs(b.on_gamma) > 1e-4)
      throw Error(ErrorCode::BracketNotVanishing, "g0 bracket does not vanish on Gamma; inconsistent V, H or lambda0");
    const double d = tc.r;
    if (std::abs(d) <= 1e-10)
      out[k] = -b.normal_derivative;
    else if (std::abs(d) < options.band)
      out[k] = -(b.at_point - b.on_gamma) / d;
    else
      out[k] = -b.at_point / d;
  }
  return out;
}

std::vector<std::vector<double>> g0_on_gamma(const Interface& gamma, double lambda0, double sigma,
                                             const G0Options& options) {
  std::vector<std::vector<double>> out;
  for (const auto& c : gamma.curves()) {
    std::vector<double> vals(c.size());
    const double hbar = hbar_of(gamma);
    for (std::size_t i = 0; i < c.size(); ++i) {
      TubeCoords tc;
      tc.s = static_cast<double>(i) / static_cast<double>(c.size());
      tc.foot = c[i];
      tc.normal = c.normals()[i];
      tc.curvature = c.curvatures()[i];
      tc.component = out.size();
      const auto b = bracket(tc, c[i], lambda0, sigma, hbar, options);
      if (std::abs(b.on_gamma) > 1e-4)
        throw Error(ErrorCode::BracketNotVanishing, "g0 bracket does not vanish on Gamma; inconsistent V, H or lambda0");
      vals[i] = -b.normal_derivative;
    }
    out.push_back(std::move(vals));
  }
  return out;
}

ApproxSolution build_approx_solution(const GridSpec& grid, const Interface& gamma, double eps,
                                     const ProfileTable& table, const ApproxOptions& options) {
  grid.validate();
  if (options.order != 0 && options.order != 1) throw Error(ErrorCode::BadConfig, "order must be 0 or 1");
  if (!(eps > 0.0)) throw Error(ErrorCode::BadConfig, "eps must be positive");
  if (options.order == 1 && !table.has_theta1()) throw Error(ErrorCode::ShapeMismatch, "order 1 needs theta1");
  const double h = grid.h();
  if (h > 0.5 * eps * (1.0 + 1e-12))
    throw Error(ErrorCode::ResolutionTooCoarse, "grid spacing exceeds eps/2");
  const double delta = options.delta.value_or(gamma.tube_half_width(grid.lx, grid.ly));
  if (eps > delta / 5.0 * (1.0 + 1e-6)) throw Error(ErrorCode::TubeTooNarrow, "eps exceeds delta/5");

  ApproxSolution a;
  a.grid = grid;
  a.eps = eps;
  a.order = options.order;
  a.delta = delta;
  a.lambda0 = options.lambda0.value_or(compute_lambda0(gamma, std::nullopt, table.sigma));
  a.components.theta1 = options.order == 1;
  a.components.height_shift = static_cast<bool>(options.h);
  a.c_A = ScalarField2D(grid);
  a.distance = ScalarField2D(grid);
  a.normal_x = ScalarField2D(grid);
  a.normal_y = ScalarField2D(grid);

  const double f2p = table.potential.d2f(1.0), f2m = table.potential.d2f(-1.0);
  const double corr = options.order == 1 ? eps * a.lambda0 : 0.0;
  for (std::size_t j = 0; j < grid.ny; ++j) {
    for (std::size_t i = 0; i < grid.nx; ++i) {
      const Vec2 x = grid.center(i, j);
      const auto tc = gamma.project(x, delta);
      const double d = tc.r;
      a.distance(i, j) = d;
      a.normal_x(i, j) = tc.normal.x();
      a.normal_y(i, j) = tc.normal.y();
      const double bulk = d > 0.0 ? 1.0 + corr / f2p : -1.0 + corr / f2m;
      const double z = cutoff_zeta(delta, d);
      double c = bulk;
      if (z > 0.0) {
        const double rho = d / eps - (options.h ? options.h(tc.component, tc.s) : 0.0);
        double inner = table.theta0_at(rho);
        if (options.order == 1) inner += corr * table.theta1_at(rho);
        c = z * inner + (1.0 - z) * bulk;
      }
      a.c_A(i, j) = c;
    }
  }

  for (std::size_t k = 0; k < gamma.curves().size(); ++k) {
    const auto& cv = gamma.curves()[k];
    std::vector<double> hv(cv.size(), 0.0);
    if (options.h)
      for (std::size_t i = 0; i < cv.size(); ++i) hv[i] = options.h(k, static_cast<double>(i) / cv.size());
    a.h_used.push_back(std::move(hv));
  }
  // g0 is only defined when lambda0 is consistent with the interface law.
  G0Options g0opt;
  g0opt.band = 10.0 * h;
  const double hbar = gamma.mean_curvature();
  if (std::abs(hbar - (2.0 / table.sigma) * a.lambda0) <= 1e-4) a.g0_on_gamma = g0_on_gamma(gamma, a.lambda0, table.sigma, g0opt);
  return a;
}

TimeDerivativeData TimeDerivativeData::stationary(const ApproxSolution& a, double dt_fd) {
  return {a.c_A, a.c_A, dt_fd};
}

ResidualNorms residual_norms(const ApproxSolution& approx, const Potential& potential,
                             const std::optional<TimeDerivativeData>& motion, const std::optional<VelocityField>& v,
                             double t, double lambda1) {
  if (!motion) throw Error(ErrorCode::MissingMotion, "time derivative of c_A needs two snapshots or a motion");
  const auto& g = approx.grid;
  if (!motion->before.matches(g) || !motion->after.matches(g))
    throw Error(ErrorCode::GridMismatch, "motion snapshots do not match the grid");
  if (!(motion->dt_fd > 0.0)) throw Error(ErrorCode::BadConfig, "dt_fd must be positive");
  const double eps = approx.eps;
  const double lam = approx.lambda0 + eps * lambda1;
  const auto& c = approx.c_A;
  const auto lap = laplacian(g, c);
  const double h = g.h();
  const bool per = g.periodic();
  const std::size_t nx = g.nx, ny = g.ny;

  std::vector<double> all(g.cells()), tube, outside;
  double linf = 0.0;
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const std::size_t k = j * nx + i;
      double s = (motion->after[k] - motion->before[k]) / (2.0 * motion->dt_fd);
      if (v) {
        const Vec2 w = (*v)(g.center(i, j), t);
        auto at = [&](std::ptrdiff_t ii, std::ptrdiff_t jj) {
          const auto n_x = static_cast<std::ptrdiff_t>(nx), n_y = static_cast<std::ptrdiff_t>(ny);
          if (per) return c(static_cast<std::size_t>((ii + n_x) % n_x), static_cast<std::size_t>((jj + n_y) % n_y));
          return c(static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(ii, 0, n_x - 1)),
                   static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(jj, 0, n_y - 1)));
        };
        const auto ii = static_cast<std::ptrdiff_t>(i), jj = static_cast<std::ptrdiff_t>(j);
        const double cx = (at(ii + 1, jj) - at(ii - 1, jj)) / (2.0 * h);
        const double cy = (at(ii, jj + 1) - at(ii, jj - 1)) / (2.0 * h);
        s += w.x() * cx + w.y() * cy;
      }
      s += -lap[k] + potential.df(c[k]) / (eps * eps) - lam / eps;
      all[k] = s * s;
      linf = std::max(linf, std::abs(s));
      if (std::abs(approx.distance[k]) < 2.0 * approx.delta)
        tube.push_back(std::abs(s));
      else
        outside.push_back(s * s);
    }
  }
  const double area = g.cell_area();
  ResidualNorms r;
  r.l2_omega = std::sqrt(pairwise_sum(all) * area);
  r.l1_tube = pairwise_sum(tube) * area;
  r.l2_outside = std::sqrt(pairwise_sum(outside) * area);
  r.linf = linf;
  return r;
}

HCoefficients h_coefficients(const Interface& gamma, std::size_t component, double lambda0, double sigma,
                             const std::optional<VelocityField>& v, double t) {
  if (component >= gamma.curves().size()) throw Error(ErrorCode::NoInterface, "no such interface component");
  const auto& c = gamma.curves()[component];
  const std::size_t n = c.size();
  G0Options opt;
  opt.v = v;
  opt.t = t;
  const auto g0 = g0_on_gamma(gamma, lambda0, sigma, opt)[component];
  const double hbar = gamma.mean_curvature();
  auto coeffs = HCoefficients::zeros(n, c.length());
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 w = velocity_at(v, c[i], t);
    coeffs.g0[i] = g0[i];
    coeffs.kappa[i] = c.curvatures()[i];
    coeffs.V[i] = c.normals()[i].dot(w) + c.curvatures()[i] - hbar;
    coeffs.v_tan[i] = c.tangents()[i].dot(w);
  }
  return coeffs;
}

}  // namespace nsac
