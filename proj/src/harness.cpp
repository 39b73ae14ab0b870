#include "nsac/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

#include "nsac/errors.hpp"
#include "nsac/field_io.hpp"
#include "nsac/numerics.hpp"

namespace nsac {

namespace {

double sq(double x) { return x * x; }

std::size_t wrap_index(std::ptrdiff_t i, std::size_t n, bool periodic) {
  const auto m = static_cast<std::ptrdiff_t>(n);
  if (periodic) return static_cast<std::size_t>(((i % m) + m) % m);
  return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(i, 0, m - 1));
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  const double t = len2 > 0.0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
  return (p - (a + t * ab)).norm();
}

Interface scenario_interface(const ExperimentConfig& cfg, double t) {
  switch (cfg.scenario) {
    case Scenario::StationaryCircle:
      return Interface::from_curves({Curve::circle(cfg.centers[0], cfg.radii[0], cfg.curve_samples)});
    case Scenario::TwoCircles: {
      const auto radii = circle_oracle(cfg.radii, t);
      std::vector<Curve> curves;
      for (std::size_t k = 0; k < radii.size(); ++k)
        curves.push_back(Curve::circle(cfg.centers[k], radii[k], cfg.curve_samples));
      return Interface::from_curves(std::move(curves));
    }
    case Scenario::FlatInterface:
      return Interface::vertical_line(0.5 * cfg.lx, cfg.ly);
    case Scenario::CoupledNSAC:
      return Interface::from_curves({Curve::ellipse(cfg.centers[0], cfg.axis_a, cfg.axis_b, cfg.curve_samples)});
  }
  throw Error(ErrorCode::BadConfig, "unknown scenario");
}

bool has_reference(const ExperimentConfig& cfg) {
  return cfg.initial_curve.empty() && cfg.scenario != Scenario::CoupledNSAC;
}
bool is_circles(const ExperimentConfig& cfg) {
  return cfg.initial_curve.empty() &&
         (cfg.scenario == Scenario::StationaryCircle || cfg.scenario == Scenario::TwoCircles);
}

SharpState advance_sharp(SharpState s, double dt) {
  const double t_end = s.t + dt;
  while (s.t < t_end - 1e-15 * std::max(1.0, t_end)) {
    const double h = std::min(max_stable_dt(s), t_end - s.t);
    s = vpmcf_step(s, h);
  }
  return s;
}

ApproxSolution reference(const ExperimentConfig& cfg, const GridSpec& grid, const Interface& gamma, double eps,
                         const ProfileTable& table) {
  ApproxOptions o;
  o.order = cfg.order;
  o.lambda0 = cfg.lambda0 ? *cfg.lambda0 : compute_lambda0(gamma, std::nullopt, table.sigma);
  return build_approx_solution(grid, gamma, eps, table, o);
}

double circle_radius_error(const ExperimentConfig& cfg, const DiffuseState& state, double t) {
  const auto radii = cfg.scenario == Scenario::TwoCircles ? circle_oracle(cfg.radii, t)
                                                           : std::vector<double>{cfg.radii[0]};
  const auto level = extract_zero_level(state);
  double worst = 0.0;
  for (std::size_t k = 0; k < radii.size(); ++k) {
    double best_dist = std::numeric_limits<double>::infinity(), r_eff = 0.0;
    for (const auto& comp : level) {
      if (!comp.closed) continue;
      Vec2 centroid = Vec2::Zero();
      for (const auto& p : comp.points) centroid += p;
      centroid /= static_cast<double>(comp.points.size());
      const double dist = (centroid - cfg.centers[k]).norm();
      if (dist < best_dist) {
        best_dist = dist;
        r_eff = std::sqrt(std::abs(spline_signed_area(comp.points)) / std::numbers::pi);
      }
    }
    const double err = std::isfinite(best_dist) ? std::abs(r_eff - radii[k]) / radii[k] : 1.0;
    worst = std::max(worst, err);
  }
  return worst;
}

std::string eps_tag(double eps) {
  std::ostringstream os;
  os << "eps_" << std::setprecision(6) << eps;
  return os.str();
}

void max_into(ErrorEntry& a, const ErrorEntry& b) {
  a.l2_omega = std::max(a.l2_omega, b.l2_omega);
  a.l2_outside = std::max(a.l2_outside, b.l2_outside);
  a.grad_tan_tube = std::max(a.grad_tan_tube, b.grad_tan_tube);
  a.grad_normal_tube = std::max(a.grad_normal_tube, b.grad_normal_tube);
  a.h1 = std::max(a.h1, b.h1);
  a.h2 = std::max(a.h2, b.h2);
}

std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

EpsRecord run_one(const ExperimentConfig& cfg, double eps, const ProfileTable& table,
                  const std::filesystem::path& dir) {
  const GridSpec grid = cfg.grid_for(eps);
  DiffuseParams params;
  params.potential = cfg.potential;
  params.nu_plus = cfg.nu_plus;
  params.nu_minus = cfg.nu_minus;
  if (cfg.scenario == Scenario::CoupledNSAC) params.mode = VelocityMode::NavierStokes;
  DiffuseSolver solver(grid, params);

  const Interface gamma0 = initial_interface(cfg);
  ApproxSolution approx = reference(cfg, grid, gamma0, eps, table);

  DiffuseState state;
  state.grid = grid;
  state.c = approx.c_A;
  state.v = MacVelocity(grid);
  state.p = ScalarField2D(grid);
  state.eps = eps;

  double dt = cfg.dt_for(eps);
  if (cfg.dt == 0.0 && params.mode == VelocityMode::NavierStokes) dt = std::min(dt, 0.9 * solver.max_dt(state));
  std::size_t nsteps = cfg.steps;
  if (nsteps == 0) {
    nsteps = static_cast<std::size_t>(std::ceil(cfg.t_end / dt - 1e-9));
    dt = cfg.t_end / static_cast<double>(nsteps);
  }
  const double t_final = dt * static_cast<double>(nsteps);

  EpsRecord rec;
  rec.eps = eps;
  rec.nx = grid.nx;
  rec.dt = dt;
  rec.steps = nsteps;
  rec.lambda0 = approx.lambda0;

  CsvWriter diag_csv(dir / "diagnostics.csv", {"t", "mass", "energy", "lambda_eps", "dissipation"});
  std::optional<CsvWriter> err_csv;
  if (has_reference(cfg))
    err_csv.emplace(dir / "errors.csv", std::vector<std::string>{"t", "l2_omega", "l2_outside", "grad_tan_tube",
                                                                 "grad_normal_tube", "h1", "h2", "hausdorff"});

  const Diagnostics d0 = solver.diagnostics(state);
  const double mass0 = d0.mass;
  const double mass_scale = std::max(std::abs(mass0), 1e-300);
  double energy_prev = d0.energy;
  double lambda_sum = 0.0;
  std::size_t lambda_count = 0;
  auto write_diag = [&](const Diagnostics& d) {
    diag_csv.row(std::vector<double>{d.t, d.mass, d.energy, d.lambda_eps, d.dissipation});
  };
  auto sample_errors = [&](double t) {
    if (!err_csv) return;
    if (cfg.scenario == Scenario::TwoCircles && t > 0.0) approx = reference(cfg, grid, scenario_interface(cfg, t), eps, table);
    const auto e = compute_error_norms(state.c, approx);
    const double hd = hausdorff_distance(extract_zero_level(state), scenario_interface(cfg, t));
    max_into(rec.sup, e);
    rec.hausdorff_sup = std::max(rec.hausdorff_sup, hd);
    rec.hausdorff_final = hd;
    err_csv->row(std::vector<double>{t, e.l2_omega, e.l2_outside, e.grad_tan_tube, e.grad_normal_tube, e.h1, e.h2, hd});
  };

  write_diag(d0);
  sample_errors(0.0);
  for (std::size_t n = 1; n <= nsteps; ++n) {
    auto [next, d] = solver.step(state, dt);
    state = std::move(next);
    rec.mass_drift = std::max(rec.mass_drift, std::abs(d.mass - mass0) / mass_scale);
    rec.energy_increase = std::max(rec.energy_increase, d.energy - energy_prev);
    rec.energy_excess = std::max(rec.energy_excess, d.energy - d0.energy);
    rec.max_div = std::max(rec.max_div, d.max_div);
    energy_prev = d.energy;
    if (state.t >= 0.5 * t_final - 1e-12 * t_final) {
      lambda_sum += d.lambda_eps;
      ++lambda_count;
    }
    if (n % cfg.output_every == 0 || n == nsteps) write_diag(d);
    if (n % cfg.sample_every == 0 || n == nsteps) sample_errors(state.t);
  }
  rec.lambda_plateau = lambda_count ? lambda_sum / static_cast<double>(lambda_count) : 0.0;
  if (is_circles(cfg)) rec.radius_rel_error = circle_radius_error(cfg, state, state.t);
  if (cfg.snapshots) write_snapshot(dir / "final.nsac", Snapshot::from_state(state));
  return rec;
}

}  // namespace

std::vector<Curve> read_curve_file(const std::filesystem::path& path, std::size_t samples) {
  const auto rows = read_csv(path);
  std::vector<std::vector<Vec2>> pts;
  for (const auto& r : rows) {
    if (r.size() != 3 || r[0] < 0.0 || r[0] != std::floor(r[0]))
      throw Error(ErrorCode::BadConfig, "curve rows must be component,x,y");
    const auto k = static_cast<std::size_t>(r[0]);
    if (k > pts.size()) throw Error(ErrorCode::BadConfig, "curve components must be numbered consecutively");
    if (k == pts.size()) pts.emplace_back();
    pts[k].emplace_back(r[1], r[2]);
  }
  if (pts.empty()) throw Error(ErrorCode::BadConfig, "curve file has no vertices");
  std::vector<Curve> curves;
  for (auto& p : pts) curves.push_back(Curve::from_points(std::move(p), Orientation::PlusInside, samples));
  return curves;
}

void write_curve_file(const std::filesystem::path& path, const std::vector<Curve>& curves) {
  CsvWriter w(path, {"component", "x", "y"});
  for (std::size_t k = 0; k < curves.size(); ++k)
    for (const auto& p : curves[k].samples()) w.row(std::vector<double>{static_cast<double>(k), p.x(), p.y()});
}

Interface initial_interface(const ExperimentConfig& cfg) {
  if (!cfg.initial_curve.empty()) return Interface::from_curves(read_curve_file(cfg.initial_curve, cfg.curve_samples));
  return scenario_interface(cfg, 0.0);
}

SharpRunResult run_sharp(const ExperimentConfig& cfg) {
  cfg.validate();
  const Interface gamma = initial_interface(cfg);
  if (gamma.is_line()) throw Error(ErrorCode::BadConfig, "front tracking needs closed curves");
  std::filesystem::create_directories(cfg.out_dir);
  SharpRunResult res;
  res.final_state = SharpState::from_curves(gamma.curves());
  auto& s = res.final_state;
  res.initial_area = s.total_area();
  CsvWriter csv(cfg.out_dir / "sharp.csv", {"t", "length", "area", "H_bar"});
  auto record = [&] {
    csv.row(std::vector<double>{s.t, s.total_length(), s.total_area(), mean_curvature(s.curves)});
    res.max_area_drift = std::max(res.max_area_drift, std::abs(s.total_area() - res.initial_area) / res.initial_area);
  };
  auto snapshot = [&] {
    std::ostringstream name;
    name << "curves_" << std::setw(6) << std::setfill('0') << res.steps << ".csv";
    write_curve_file(cfg.out_dir / name.str(), s.curves);
  };
  record();
  snapshot();
  const double t_end = cfg.steps > 0 && cfg.dt > 0.0 ? cfg.dt * static_cast<double>(cfg.steps) : cfg.t_end;
  while (s.t < t_end - 1e-12 * t_end) {
    const double dt = std::min(cfg.dt > 0.0 ? cfg.dt : max_stable_dt(s), t_end - s.t);
    s = vpmcf_step(s, dt);
    ++res.steps;
    record();
    if (res.steps % cfg.output_every == 0) snapshot();
  }
  if (res.steps % cfg.output_every != 0) snapshot();
  return res;
}

std::vector<AsymptoticsRow> run_asymptotics(const ExperimentConfig& cfg, const ProfileTable& table, double dt_fd) {
  cfg.validate();
  std::filesystem::create_directories(cfg.out_dir);
  const Interface gamma0 = initial_interface(cfg);
  Interface gamma_mid = gamma0, gamma_after = gamma0;
  if (!gamma0.is_line()) {
    const auto mid = advance_sharp(SharpState::from_curves(gamma0.curves()), dt_fd);
    gamma_mid = Interface::from_curves(mid.curves);
    gamma_after = Interface::from_curves(advance_sharp(mid, dt_fd).curves);
  }
  const double lambda0 = cfg.lambda0 ? *cfg.lambda0 : compute_lambda0(gamma_mid, std::nullopt, table.sigma);
  CsvWriter csv(cfg.out_dir / "asymptotics.csv",
                {"eps", "nx", "order", "lambda0", "l2_omega", "l1_tube", "l2_outside", "linf"});
  std::vector<AsymptoticsRow> rows;
  for (double eps : cfg.eps_list) {
    const GridSpec grid = cfg.grid_for(eps);
    ApproxOptions o;
    o.order = cfg.order;
    o.lambda0 = lambda0;
    const auto approx = build_approx_solution(grid, gamma_mid, eps, table, o);
    TimeDerivativeData motion;
    motion.dt_fd = dt_fd;
    motion.before = build_approx_solution(grid, gamma0, eps, table, o).c_A;
    motion.after = build_approx_solution(grid, gamma_after, eps, table, o).c_A;
    AsymptoticsRow row{eps, grid.nx, lambda0, residual_norms(approx, cfg.potential, motion, std::nullopt, dt_fd)};
    csv.row(std::vector<double>{eps, static_cast<double>(grid.nx), static_cast<double>(cfg.order), lambda0,
                                row.residual.l2_omega, row.residual.l1_tube, row.residual.l2_outside,
                                row.residual.linf});
    DiffuseState st;
    st.grid = grid;
    st.c = approx.c_A;
    st.v = MacVelocity(grid);
    st.p = ScalarField2D(grid);
    st.t = dt_fd;
    st.eps = eps;
    const auto dir = cfg.out_dir / eps_tag(eps);
    std::filesystem::create_directories(dir);
    write_snapshot(dir / "c_A.nsac", Snapshot::from_state(st));
    rows.push_back(row);
  }
  return rows;
}

ErrorEntry compute_error_norms(const ScalarField2D& c_eps, const ApproxSolution& approx) {
  const GridSpec& g = approx.grid;
  if (!c_eps.matches(g) || !approx.c_A.matches(g)) throw Error(ErrorCode::GridMismatch, "field does not match c_A");
  ScalarField2D u(g);
  for (std::size_t k = 0; k < u.size(); ++k) u[k] = c_eps[k] - approx.c_A[k];
  const ScalarField2D lap = laplacian(g, u);
  const double h = g.h(), area = g.cell_area();
  const bool per = g.periodic();
  double s_omega = 0, s_out = 0, s_tan = 0, s_nor = 0, s_h1 = 0, s_h2 = 0;
  for (std::size_t j = 0; j < g.ny; ++j) {
    const auto jj = static_cast<std::ptrdiff_t>(j);
    for (std::size_t i = 0; i < g.nx; ++i) {
      const auto ii = static_cast<std::ptrdiff_t>(i);
      const double ux = (u(wrap_index(ii + 1, g.nx, per), j) - u(wrap_index(ii - 1, g.nx, per), j)) / (2 * h);
      const double uy = (u(i, wrap_index(jj + 1, g.ny, per)) - u(i, wrap_index(jj - 1, g.ny, per))) / (2 * h);
      const double v2 = sq(u(i, j));
      s_omega += v2;
      s_h1 += ux * ux + uy * uy;
      s_h2 += sq(lap(i, j));
      if (std::abs(approx.distance(i, j)) < approx.delta) {
        const double dn = ux * approx.normal_x(i, j) + uy * approx.normal_y(i, j);
        s_nor += dn * dn;
        s_tan += std::max(0.0, ux * ux + uy * uy - dn * dn);
      } else {
        s_out += v2;
      }
    }
  }
  ErrorEntry e;
  e.l2_omega = std::sqrt(s_omega * area);
  e.l2_outside = std::sqrt(s_out * area);
  e.grad_tan_tube = std::sqrt(s_tan * area);
  e.grad_normal_tube = approx.eps * std::sqrt(s_nor * area);
  e.h1 = std::sqrt(s_h1 * area);
  e.h2 = std::sqrt(s_h2 * area);
  return e;
}

double hausdorff_distance(const std::vector<ZeroLevelComponent>& level, const Interface& gamma) {
  if (level.empty()) throw Error(ErrorCode::NoInterface, "no zero-level components");
  double d = 0.0;
  for (const auto& comp : level)
    for (const auto& p : comp.points) d = std::max(d, std::abs(gamma.project(p, 1.0).r));
  if (gamma.is_line()) return d;
  for (const auto& curve : gamma.curves()) {
    for (const auto& q : curve.samples()) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& comp : level) {
        const auto& pts = comp.points;
        if (pts.size() == 1) best = std::min(best, (q - pts[0]).norm());
        const std::size_t nseg = comp.closed || comp.wraps ? pts.size() : pts.size() - 1;
        for (std::size_t k = 0; k < nseg; ++k)
          best = std::min(best, point_segment_distance(q, pts[k], pts[(k + 1) % pts.size()]));
      }
      d = std::max(d, best);
    }
  }
  return d;
}

RateFit fit_rate(std::span<const double> eps, std::span<const double> errors) {
  if (eps.size() != errors.size()) throw Error(ErrorCode::ShapeMismatch, "eps and errors differ in length");
  if (eps.size() < 3) throw Error(ErrorCode::BadConfig, "a rate fit needs at least three points");
  std::vector<double> x, y;
  for (std::size_t k = 0; k < eps.size(); ++k) {
    if (!(eps[k] > 0.0) || !(errors[k] > 0.0)) throw Error(ErrorCode::NonPositiveError, "log of a non-positive value");
    x.push_back(std::log(eps[k]));
    y.push_back(std::log(errors[k]));
  }
  const auto fit = least_squares(x, y);
  return {fit.slope, fit.intercept, fit.r2, fit.slope_stderr};
}

std::vector<std::string> eps_record_header() {
  return {"eps",           "nx",           "dt",           "steps",          "l2_omega",        "l2_outside",
          "grad_tan_tube", "grad_normal_tube", "h1",       "h2",             "hausdorff_sup",   "hausdorff_final",
          "lambda_plateau", "lambda0",     "mass_drift",   "energy_increase", "energy_excess",  "max_div",
          "radius_rel_error"};
}

std::vector<double> eps_record_values(const EpsRecord& r) {
  return {r.eps,
          static_cast<double>(r.nx),
          r.dt,
          static_cast<double>(r.steps),
          r.sup.l2_omega,
          r.sup.l2_outside,
          r.sup.grad_tan_tube,
          r.sup.grad_normal_tube,
          r.sup.h1,
          r.sup.h2,
          r.hausdorff_sup,
          r.hausdorff_final,
          r.lambda_plateau,
          r.lambda0,
          r.mass_drift,
          r.energy_increase,
          r.energy_excess,
          r.max_div,
          r.radius_rel_error};
}

EpsRecord eps_record_from_values(std::span<const double> v) {
  if (v.size() != eps_record_header().size()) throw Error(ErrorCode::ShapeMismatch, "summary row has the wrong width");
  EpsRecord r;
  std::size_t k = 0;
  r.eps = v[k++];
  r.nx = static_cast<std::size_t>(v[k++]);
  r.dt = v[k++];
  r.steps = static_cast<std::size_t>(v[k++]);
  r.sup.l2_omega = v[k++];
  r.sup.l2_outside = v[k++];
  r.sup.grad_tan_tube = v[k++];
  r.sup.grad_normal_tube = v[k++];
  r.sup.h1 = v[k++];
  r.sup.h2 = v[k++];
  r.hausdorff_sup = v[k++];
  r.hausdorff_final = v[k++];
  r.lambda_plateau = v[k++];
  r.lambda0 = v[k++];
  r.mass_drift = v[k++];
  r.energy_increase = v[k++];
  r.energy_excess = v[k++];
  r.max_div = v[k++];
  r.radius_rel_error = v[k++];
  return r;
}

ErrorReport run_experiment(const ExperimentConfig& cfg, const ProfileTable& table) {
  cfg.validate();
  std::filesystem::create_directories(cfg.out_dir);
  ErrorReport report;
  for (double eps : cfg.eps_list) {
    ExperimentConfig single = cfg;
    single.eps_list = {eps};
    single.grid = cfg.grid_for(eps).nx;
    const std::string fp = single.fingerprint();
    const auto dir = cfg.out_dir / eps_tag(eps);
    const auto fp_path = dir / "fingerprint.txt", summary = dir / "summary.csv";
    if (std::filesystem::exists(fp_path) && std::filesystem::exists(summary) && read_text(fp_path) == fp) {
      const auto rows = read_csv(summary);
      if (rows.size() == 1) {
        report.records.push_back(eps_record_from_values(rows[0]));
        continue;
      }
    }
    std::filesystem::create_directories(dir);
    std::filesystem::remove(fp_path);
    const EpsRecord rec = run_one(single, eps, table, dir);
    CsvWriter(summary, eps_record_header()).row(eps_record_values(rec));
    std::ofstream(fp_path) << fp;
    report.records.push_back(rec);
  }

  CsvWriter rep(cfg.out_dir / "report.csv", eps_record_header());
  for (const auto& r : report.records) rep.row(eps_record_values(r));

  CsvWriter rates(cfg.out_dir / "rates.csv", {"quantity", "rate", "intercept", "r2", "rate_stderr"});
  if (has_reference(cfg) && report.records.size() >= 3) {
    std::vector<double> e, l2, hd;
    for (const auto& r : report.records) {
      e.push_back(r.eps);
      l2.push_back(r.sup.l2_omega);
      hd.push_back(r.hausdorff_sup);
    }
    auto emit = [&](const std::string& name, const RateFit& f) {
      rates.row(std::vector<std::string>{name, format_double(f.rate), format_double(f.intercept), format_double(f.r2),
                                         format_double(f.rate_stderr)});
    };
    try {
      report.l2_rate = fit_rate(e, l2);
      emit("l2_omega", *report.l2_rate);
    } catch (const Error& err) {
      if (err.code() != ErrorCode::NonPositiveError) throw;
    }
    try {
      report.hausdorff_rate = fit_rate(e, hd);
      emit("hausdorff", *report.hausdorff_rate);
    } catch (const Error& err) {
      if (err.code() != ErrorCode::NonPositiveError) throw;
    }
  }
  return report;
}

}  // namespace nsac
