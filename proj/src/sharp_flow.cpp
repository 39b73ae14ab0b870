#include "nsac/sharp_flow.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/numeric/odeint.hpp>

#include "nsac/errors.hpp"
#include "nsac/numerics.hpp"

namespace nsac {

namespace {

using Points = std::vector<Vec2>;

struct StageGeometry {
  Points normal;
  std::vector<double> kappa;
  std::vector<double> weight;  // -d(spline area)/d(normal displacement) per sample
};

StageGeometry stage_geometry(const Points& p) {
  const std::size_t n = p.size();
  StageGeometry g;
  g.normal.resize(n);
  g.kappa.resize(n);
  g.weight.resize(n);
  const auto dp = spline_area_operator(p);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& pm2 = p[(i + n - 2) % n];
    const Vec2& pm1 = p[(i + n - 1) % n];
    const Vec2& pp1 = p[(i + 1) % n];
    const Vec2& pp2 = p[(i + 2) % n];
    const Vec2 d1 = (pm2 - 8.0 * pm1 + 8.0 * pp1 - pp2) / 12.0;
    const Vec2 d2 = (-pm2 + 16.0 * pm1 - 30.0 * p[i] + 16.0 * pp1 - pp2) / 12.0;
    const double sp = d1.norm();
    if (!(sp > 0.0)) throw Error(ErrorCode::DegenerateCurve, "vanishing tangent");
    g.normal[i] = rot90(d1 / sp);
    g.kappa[i] = cross(d1, d2) / (sp * sp * sp);
    g.weight[i] = g.normal[i].dot(rot90(dp[i]));
  }
  return g;
}

std::vector<Points> velocities(const std::vector<Points>& curves, double t, const std::optional<VelocityField>& v,
                               bool plain) {
  std::vector<StageGeometry> geo;
  geo.reserve(curves.size());
  double num = 0.0, den = 0.0;
  for (const auto& p : curves) {
    geo.push_back(stage_geometry(p));
    for (std::size_t i = 0; i < p.size(); ++i) {
      num += geo.back().kappa[i] * geo.back().weight[i];
      den += geo.back().weight[i];
    }
  }
  const double hbar = plain ? 0.0 : num / den;
  std::vector<Points> out(curves.size());
  for (std::size_t k = 0; k < curves.size(); ++k) {
    const auto& p = curves[k];
    out[k].resize(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      double V = geo[k].kappa[i] - hbar;
      if (v) V += geo[k].normal[i].dot((*v)(p[i], t));
      out[k][i] = V * geo[k].normal[i];
    }
  }
  return out;
}

std::vector<Points> axpy(const std::vector<Points>& x, double a, const std::vector<Points>& y) {
  auto r = x;
  for (std::size_t k = 0; k < r.size(); ++k)
    for (std::size_t i = 0; i < r[k].size(); ++i) r[k][i] += a * y[k][i];
  return r;
}

}  // namespace

SharpState SharpState::from_curves(std::vector<Curve> curves, std::optional<VelocityField> velocity) {
  if (curves.empty()) throw Error(ErrorCode::NoInterface, "front tracking needs at least one curve");
  SharpState s;
  s.curves = std::move(curves);
  s.velocity = std::move(velocity);
  s.enclosed_area = s.total_area();
  return s;
}

double SharpState::total_length() const {
  double l = 0.0;
  for (const auto& c : curves) l += c.length();
  return l;
}

double SharpState::total_area() const {
  double a = 0.0;
  for (const auto& c : curves) a += c.enclosed_area();
  return a;
}

double mean_curvature(const std::vector<Curve>& curves) {
  double num = 0.0, den = 0.0;
  for (const auto& c : curves) {
    const auto g = stage_geometry(c.samples());
    for (std::size_t i = 0; i < c.size(); ++i) {
      num += g.kappa[i] * g.weight[i];
      den += g.weight[i];
    }
  }
  return num / den;
}

double max_stable_dt(const SharpState& state, const SharpStepOptions& options) {
  double ds = std::numeric_limits<double>::infinity();
  for (const auto& c : state.curves) ds = std::min(ds, c.length() / static_cast<double>(c.size()));
  return options.stability_factor * ds * ds;
}

SharpState vpmcf_step(const SharpState& state, double dt, const SharpStepOptions& options) {
  if (!(dt > 0.0)) throw Error(ErrorCode::BadConfig, "time step must be positive");
  if (dt > max_stable_dt(state, options) * (1.0 + 1e-12))
    throw Error(ErrorCode::StepTooLarge, "dt exceeds the explicit curvature-flow limit");

  std::vector<Points> x0;
  for (const auto& c : state.curves) x0.push_back(c.samples());
  const double t = state.t;
  const auto& v = state.velocity;
  const auto k1 = velocities(x0, t, v, options.plain_mcf);
  const auto k2 = velocities(axpy(x0, 0.5 * dt, k1), t + 0.5 * dt, v, options.plain_mcf);
  const auto k3 = velocities(axpy(x0, 0.5 * dt, k2), t + 0.5 * dt, v, options.plain_mcf);
  const auto k4 = velocities(axpy(x0, dt, k3), t + dt, v, options.plain_mcf);

  SharpState next;
  next.t = t + dt;
  next.velocity = state.velocity;
  for (std::size_t k = 0; k < x0.size(); ++k) {
    Points p = x0[k];
    for (std::size_t i = 0; i < p.size(); ++i)
      p[i] += dt / 6.0 * (k1[k][i] + 2.0 * k2[k][i] + 2.0 * k3[k][i] + k4[k][i]);
    if (!polygon_is_simple(p)) throw Error(ErrorCode::StepTooLarge, "curve self-intersects after the step");
    const auto& old = state.curves[k];
    const double signed_before = old.signed_area();
    double signed_after = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) signed_after += 0.5 * cross(p[i], p[(i + 1) % p.size()]);
    if (signed_before * signed_after <= 0.0) throw Error(ErrorCode::StepTooLarge, "curve inverted during the step");
    next.curves.push_back(resample_arclength(Curve::from_equal_arclength(std::move(p), old.orientation()), old.size()));
  }
  next.enclosed_area = next.total_area();
  return next;
}

std::vector<double> circle_oracle(const std::vector<double>& radii, double t_end) {
  if (radii.empty()) throw Error(ErrorCode::BadConfig, "circle oracle needs at least one radius");
  for (double r : radii)
    if (!(r > 0.0)) throw Error(ErrorCode::BadConfig, "radii must be positive");
  if (t_end < 0.0) throw Error(ErrorCode::BadConfig, "t_end must be non-negative");
  const std::size_t k = radii.size();
  if (t_end == 0.0) return radii;

  // State a_i = R_i^2 / 2, so da_i/dt = R_i dR_i/dt = -1 + k R_i / sum R_j stays bounded as R_i -> 0.
  namespace odeint = boost::numeric::odeint;
  using State = std::vector<double>;
  State a(k);
  for (std::size_t i = 0; i < k; ++i) a[i] = 0.5 * radii[i] * radii[i];
  auto rhs = [k](const State& x, State& dx, double) {
    double sum = 0.0;
    std::vector<double> r(k);
    for (std::size_t i = 0; i < k; ++i) {
      r[i] = std::sqrt(2.0 * std::max(x[i], 0.0));
      sum += r[i];
    }
    for (std::size_t i = 0; i < k; ++i) dx[i] = -1.0 + static_cast<double>(k) * r[i] / sum;
  };
  auto stepper = odeint::make_controlled(1e-13, 1e-13, odeint::runge_kutta_dopri5<State>());
  double t = 0.0, dt = std::min(1e-4, t_end);
  while (t < t_end) {
    dt = std::min(dt, t_end - t);
    State trial = a;
    double tt = t, h = dt;
    if (stepper.try_step(rhs, trial, tt, h) == odeint::success) {
      for (double x : trial)
        if (!(x > 0.0)) throw Error(ErrorCode::CircleVanished, "a circle shrinks to a point before t_end");
      a = std::move(trial);
      t = tt;
    }
    dt = h;
    if (dt < 1e-14) throw Error(ErrorCode::CircleVanished, "a circle shrinks to a point before t_end");
  }
  std::vector<double> out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = std::sqrt(2.0 * a[i]);
  return out;
}

HCoefficients HCoefficients::zeros(std::size_t n, double length) {
  HCoefficients c;
  c.g0.assign(n, 0.0);
  c.V.assign(n, 0.0);
  c.kappa.assign(n, 0.0);
  c.v_tan.assign(n, 0.0);
  c.drift.assign(n, 0.0);
  c.length = length;
  return c;
}

std::vector<HFieldState> h_equation_solve(const HFieldState& init, double t_end, const HForcing& forcing,
                                          const HCoefficientProvider& coefficients, const HSolveOptions& options) {
  const std::size_t n = init.h.size();
  if (n < 3) throw Error(ErrorCode::ShapeMismatch, "h needs at least 3 grid points");
  if (!(options.dt > 0.0)) throw Error(ErrorCode::BadConfig, "time step must be positive");
  if (options.record_every == 0) throw Error(ErrorCode::BadConfig, "record_every must be positive");
  const double ds = 1.0 / static_cast<double>(n);
  const double dt = options.dt;
  const double sigma = options.sigma;

  auto check = [n](const HCoefficients& c) {
    for (const auto* v : {&c.g0, &c.V, &c.kappa, &c.v_tan, &c.drift})
      if (v->size() != n) throw Error(ErrorCode::ShapeMismatch, "coefficient array does not match the h grid");
    if (!(c.length > 0.0)) throw Error(ErrorCode::DegenerateCurve, "curve length must be positive");
  };

  std::vector<HFieldState> out;
  HFieldState cur = init;
  cur.coefficients = coefficients(cur.t);
  check(cur.coefficients);
  out.push_back(cur);

  const auto steps = static_cast<std::size_t>(std::ceil((t_end - init.t) / dt - 1e-9));
  std::vector<double> lo(n), di(n), up(n), rhs(n), F(n), dh(n), b(n);
  for (std::size_t step = 0; step < steps; ++step) {
    const double t = cur.t;
    const double h_dt = std::min(dt, t_end - t);
    const auto& c = cur.coefficients;
    const double a = 1.0 / (c.length * c.length);
    const double period_gap = std::abs(forcing(0.0, t) - forcing(1.0, t));
    if (period_gap > 1e-10 * std::max(1.0, std::abs(forcing(0.0, t))))
      throw Error(ErrorCode::NonPeriodicInput, "forcing is not periodic in s");

    double adv = 0.0, react = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      b[i] = c.v_tan[i] / c.length;  // v . grad_Gamma h = (v.tau / L) dh/ds
      adv = std::max(adv, std::abs(b[i] + c.drift[i]));
      react = std::max(react, std::abs(c.g0[i]));
      F[i] = forcing(static_cast<double>(i) * ds, t);
      dh[i] = (cur.h[(i + 1) % n] - cur.h[(i + n - 1) % n]) / (2.0 * ds);
    }
    if (h_dt * adv > ds || h_dt * react > 1.0)
      throw Error(ErrorCode::CFLViolation, "explicit advection/reaction step violates the CFL bound");

    std::vector<double> lam_terms(n);
    for (std::size_t i = 0; i < n; ++i)
      lam_terms[i] = (c.V[i] * c.kappa[i] + c.g0[i]) * cur.h[i] + b[i] * dh[i] + F[i];
    const double lambda = 0.5 * sigma * ds * pairwise_sum(lam_terms);

    // (h^{n+1} - h^n)/dt + (b + w) D_s h^n - a D2 h^{n+1} + g h^n = -F + (2/sigma) lambda
    const double ih2 = a / (ds * ds);
    for (std::size_t i = 0; i < n; ++i) {
      lo[i] = up[i] = -h_dt * ih2;
      di[i] = 1.0 + 2.0 * h_dt * ih2;
      rhs[i] = cur.h[i] +
               h_dt * (-(b[i] + c.drift[i]) * dh[i] - c.g0[i] * cur.h[i] - F[i] + (2.0 / sigma) * lambda);
    }
    HFieldState next;
    next.h = solve_cyclic_tridiagonal(lo, di, up, rhs);
    next.lambda = lambda;
    next.t = t + h_dt;

    std::vector<double> constraint(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double Dt = (next.h[i] - cur.h[i]) / h_dt + c.drift[i] * dh[i];
      constraint[i] = c.V[i] * c.kappa[i] * cur.h[i] - Dt;
    }
    next.constraint_residual = std::abs(ds * pairwise_sum(constraint));
    next.coefficients = coefficients(next.t);
    check(next.coefficients);
    cur = std::move(next);
    if ((step + 1) % options.record_every == 0 || step + 1 == steps) out.push_back(cur);
  }
  return out;
}

}  // namespace nsac
