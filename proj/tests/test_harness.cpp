#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "nsac/errors.hpp"
#include "nsac/field_io.hpp"
#include "nsac/harness.hpp"

using namespace nsac;
using std::numbers::pi;
namespace fs = std::filesystem;

namespace {

const ProfileTable& table() {
  static const ProfileTable t = build_profiles(Potential::standard_quartic());
  return t;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::SingularSystem;
}

const ApproxSolution& circle_approx() {
  static const ApproxSolution a = [] {
    const GridSpec g{128, 128, 1.0, 1.0, BoundaryCondition::Periodic};
    const auto gamma = Interface::from_curves({Curve::circle({0.5, 0.5}, 0.25, 256)});
    ApproxOptions o;
    o.order = 1;
    return build_approx_solution(g, gamma, 0.02, table(), o);
  }();
  return a;
}

ScalarField2D shifted(const ApproxSolution& a, const std::function<double(const Vec2&)>& fn) {
  ScalarField2D c = a.c_A;
  for (std::size_t j = 0; j < a.grid.ny; ++j)
    for (std::size_t i = 0; i < a.grid.nx; ++i) c(i, j) += fn(a.grid.center(i, j));
  return c;
}

ExperimentConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

}  // namespace

TEST(ErrorNorms, ZeroForExactMatch) {
  const auto& a = circle_approx();
  const auto e = compute_error_norms(a.c_A, a);
  EXPECT_EQ(e.l2_omega, 0.0);
  EXPECT_EQ(e.h1, 0.0);
  EXPECT_EQ(e.h2, 0.0);
}

TEST(ErrorNorms, ConstantOffsetIsPureBulk) {
  const auto& a = circle_approx();
  const auto e = compute_error_norms(shifted(a, [](const Vec2&) { return 0.3; }), a);
  EXPECT_NEAR(e.l2_omega, 0.3, 1e-12);
  EXPECT_LT(e.l2_outside, e.l2_omega);
  EXPECT_NEAR(e.h1, 0.0, 1e-10);
  EXPECT_NEAR(e.grad_tan_tube, 0.0, 1e-10);
  EXPECT_NEAR(e.grad_normal_tube, 0.0, 1e-12);
  EXPECT_NEAR(e.h2, 0.0, 1e-8);
}

TEST(ErrorNorms, SmoothPerturbationMatchesContinuousNorms) {
  const auto& a = circle_approx();
  const auto e = compute_error_norms(shifted(a, [](const Vec2& x) { return std::sin(2 * pi * x.x()); }), a);
  EXPECT_NEAR(e.l2_omega, std::sqrt(0.5), 1e-10);
  EXPECT_NEAR(e.h1, 2 * pi * std::sqrt(0.5), 2e-3 * 2 * pi);
  EXPECT_NEAR(e.h2, 4 * pi * pi * std::sqrt(0.5), 2e-3 * 4 * pi * pi);
}

TEST(ErrorNorms, RadialPerturbationSplitsIntoNormalPart) {
  const auto& a = circle_approx();
  const auto e = compute_error_norms(shifted(a, [](const Vec2& x) { return 0.01 * (x - Vec2(0.5, 0.5)).norm(); }), a);
  EXPECT_LT(e.grad_tan_tube, 1e-3 * e.grad_normal_tube / a.eps);
  // |grad u| = 0.01 on the annulus 0.15 < r < 0.35 (delta = 0.1).
  EXPECT_NEAR(e.grad_normal_tube, a.eps * 0.01 * std::sqrt(pi * (0.35 * 0.35 - 0.15 * 0.15)), 0.02 * e.grad_normal_tube);
}

TEST(ErrorNorms, RampAcrossFlatInterfaceIsPurelyNormal) {
  const GridSpec g{64, 64, 1.0, 1.0, BoundaryCondition::WallNeumannNoSlip};
  ApproxOptions o;
  o.order = 1;
  const auto a = build_approx_solution(g, Interface::vertical_line(0.5, 1.0), 0.04, table(), o);
  const double slope = 0.7;
  const auto e = compute_error_norms(shifted(a, [&](const Vec2& x) { return slope * x.x(); }), a);
  double tube_area = 0.0;
  for (std::size_t k = 0; k < a.distance.size(); ++k)
    if (std::abs(a.distance[k]) < a.delta) tube_area += g.cell_area();
  EXPECT_LE(e.grad_tan_tube, 1e-10);
  EXPECT_NEAR(e.grad_normal_tube, a.eps * slope * std::sqrt(tube_area), 1e-10);
}

TEST(ErrorNorms, TriangleInequality) {
  const auto& a = circle_approx();
  const auto u = shifted(a, [](const Vec2& x) { return 0.1 * std::cos(2 * pi * x.y()); });
  ApproxSolution b = a;
  b.c_A = shifted(a, [](const Vec2& x) { return 0.05 * std::sin(4 * pi * x.x()); });
  const auto total = compute_error_norms(u, a), first = compute_error_norms(u, b), second = compute_error_norms(b.c_A, a);
  EXPECT_LE(total.l2_omega, first.l2_omega + second.l2_omega + 1e-14);
  EXPECT_LE(total.h1, first.h1 + second.h1 + 1e-12);
  EXPECT_LE(total.grad_tan_tube, first.grad_tan_tube + second.grad_tan_tube + 1e-12);
}

TEST(ErrorNorms, GridMismatch) {
  EXPECT_EQ(code_of([] { compute_error_norms(ScalarField2D(4, 4), circle_approx()); }), ErrorCode::GridMismatch);
}

TEST(Hausdorff, OffsetCircle) {
  const auto gamma = Interface::from_curves({Curve::circle({0.5, 0.5}, 0.25, 256)});
  ZeroLevelComponent comp;
  comp.closed = true;
  for (int k = 0; k < 400; ++k) {
    const double th = 2 * pi * k / 400;
    comp.points.emplace_back(0.5 + 0.26 * std::cos(th), 0.5 + 0.26 * std::sin(th));
  }
  EXPECT_NEAR(hausdorff_distance({comp}, gamma), 0.01, 1e-5);
}

TEST(Hausdorff, MissingComponentIsSeen) {
  const auto gamma = Interface::from_curves(
      {Curve::circle({0.25, 0.5}, 0.1, 128), Curve::circle({0.75, 0.5}, 0.1, 128)});
  ZeroLevelComponent comp;
  comp.closed = true;
  for (int k = 0; k < 200; ++k) {
    const double th = 2 * pi * k / 200;
    comp.points.emplace_back(0.25 + 0.1 * std::cos(th), 0.5 + 0.1 * std::sin(th));
  }
  EXPECT_NEAR(hausdorff_distance({comp}, gamma), 0.5, 1e-3);
  EXPECT_EQ(code_of([&] { hausdorff_distance({}, gamma); }), ErrorCode::NoInterface);
}

TEST(RateFit, ExactPowerLaw) {
  const std::vector<double> eps{0.08, 0.04, 0.02};
  const std::vector<double> err{3 * std::pow(0.08, 1.5), 3 * std::pow(0.04, 1.5), 3 * std::pow(0.02, 1.5)};
  const auto f = fit_rate(eps, err);
  EXPECT_NEAR(f.rate, 1.5, 1e-12);
  EXPECT_NEAR(std::exp(f.intercept), 3.0, 1e-10);
  EXPECT_NEAR(f.r2, 1.0, 1e-12);
}

TEST(RateFit, NoisyDataLowersFit) {
  const std::vector<double> eps{0.08, 0.04, 0.02, 0.01};
  const std::vector<double> err{0.08, 0.05, 0.01, 0.01};
  const auto f = fit_rate(eps, err);
  EXPECT_LT(f.r2, 0.95);
  EXPECT_GT(f.rate_stderr, 0.0);
}

TEST(RateFit, NoisyPowerLaw) {
  std::mt19937 rng(11);
  std::normal_distribution<double> noise(0.0, 0.01);
  const std::vector<double> eps{0.08, 0.04, 0.02, 0.01};
  std::vector<double> err;
  for (double e : eps) err.push_back(std::pow(e, 1.5) * (1.0 + noise(rng)));
  const auto f = fit_rate(eps, err);
  EXPECT_GE(f.rate, 1.4);
  EXPECT_LE(f.rate, 1.6);
}

TEST(RateFit, LinearWithIntercept) {
  const std::vector<double> eps{0.1, 0.05, 0.025};
  const auto f = fit_rate(eps, std::vector<double>{0.3, 0.15, 0.075});
  EXPECT_NEAR(f.rate, 1.0, 1e-12);
  EXPECT_NEAR(f.intercept, std::log(3.0), 1e-12);
}

TEST(RateFit, Errors) {
  const std::vector<double> eps{0.08, 0.04, 0.02};
  EXPECT_EQ(code_of([&] { fit_rate(eps, std::vector<double>{1.0, 0.0, 1.0}); }), ErrorCode::NonPositiveError);
  EXPECT_EQ(code_of([&] { fit_rate(std::vector<double>{0.1, 0.05}, std::vector<double>{1.0, 0.5}); }),
            ErrorCode::BadConfig);
}

TEST(Config, ParsesAllKinds) {
  const auto c = parse(R"(# comment
scenario = "two_circles"
eps_list = [0.04, 0.02]
lx = 2
ly = 1
bc = "periodic"
centers = [0.5, 0.5, 1.5, 0.5]
radii = [0.2, 0.3]
t_end = 0.1
dt = 1e-5
order = 0
lambda0 = 1.5
potential = "standard"
nu_plus = 1
nu_minus = 0.1
snapshots = false
out = "results"
)");
  EXPECT_EQ(c.scenario, Scenario::TwoCircles);
  ASSERT_EQ(c.eps_list.size(), 2u);
  EXPECT_EQ(c.eps_list[1], 0.02);
  EXPECT_EQ(c.bc, BoundaryCondition::Periodic);
  ASSERT_EQ(c.centers.size(), 2u);
  EXPECT_EQ(c.centers[1].x(), 1.5);
  EXPECT_EQ(c.order, 0);
  EXPECT_EQ(*c.lambda0, 1.5);
  EXPECT_EQ(c.nu_minus, 0.1);
  EXPECT_FALSE(c.snapshots);
  EXPECT_EQ(c.out_dir, fs::path("results"));
  EXPECT_EQ(c.dt_for(0.02), 1e-5);
}

TEST(Config, RejectsBadInput) {
  EXPECT_EQ(code_of([] { parse("unknown_key = 1\n"); }), ErrorCode::BadConfig);
  EXPECT_EQ(code_of([] { parse("lx = abc\n"); }), ErrorCode::BadConfig);
  EXPECT_EQ(code_of([] { parse("eps = -0.1\n"); }), ErrorCode::BadConfig);
  EXPECT_EQ(code_of([] { parse("order = 2\n"); }), ErrorCode::BadConfig);
  EXPECT_EQ(code_of([] { parse("scenario = \"square\"\n"); }), ErrorCode::BadConfig);
  EXPECT_EQ(code_of([] { parse("centers = [1, 2, 3]\n"); }), ErrorCode::BadConfig);
  EXPECT_EQ(code_of([] { parse("grid = 10\neps = 0.02\n"); }), ErrorCode::ResolutionTooCoarse);
  EXPECT_EQ(code_of([] { parse("potential = [0, 1, 0, 0, 0]\n"); }), ErrorCode::InvalidPotential);
}

TEST(Config, GridRule) {
  auto c = parse("eps_list = [0.08, 0.02]\nlx = 4\nly = 4\n");
  EXPECT_EQ(c.grid_for(0.08).nx, 200u);
  EXPECT_EQ(c.grid_for(0.02).nx, 800u);
  c.grid_exponent = 0.5;
  EXPECT_EQ(c.grid_for(0.08).nx, 200u);
  EXPECT_EQ(c.grid_for(0.02).nx, 1600u);
  EXPECT_EQ(c.grid_for(0.04).nx, 576u);
  c.ly = 2;
  EXPECT_EQ(c.grid_for(0.02).ny, 800u);
  EXPECT_EQ(c.dt_for(0.02), 0.25 * 0.02 * 0.02);
}

TEST(Config, FingerprintTracksFields) {
  const auto a = parse("eps = 0.02\n"), b = parse("eps = 0.02\nt_end = 0.06\n");
  EXPECT_EQ(a.fingerprint(), parse("eps = 0.02\n").fingerprint());
  EXPECT_NE(a.fingerprint(), b.fingerprint());
}

class SmallRun : public ::testing::Test {
 protected:
  fs::path dir = fs::temp_directory_path() / "nsac_harness_run";
  ExperimentConfig cfg = [this] {
    auto c = parse("eps = 0.02\ngrid = 128\nsteps = 20\nsample_every = 10\noutput_every = 5\n");
    c.out_dir = dir;
    return c;
  }();

  void SetUp() override { fs::remove_all(dir); }
};

TEST_F(SmallRun, WritesArtifactsAndConservesMass) {
  const auto rep = run_experiment(cfg, table());
  ASSERT_EQ(rep.records.size(), 1u);
  const auto& r = rep.records[0];
  EXPECT_EQ(r.nx, 128u);
  EXPECT_EQ(r.steps, 20u);
  EXPECT_LE(r.mass_drift, 1e-12);
  EXPECT_LE(r.energy_increase, 1e-10);
  EXPECT_GT(r.sup.l2_omega, 0.0);
  EXPECT_LT(r.hausdorff_sup, 0.01);
  const auto sub = dir / "eps_0.02";
  EXPECT_EQ(read_csv(sub / "diagnostics.csv").size(), 5u);
  EXPECT_EQ(read_csv(sub / "errors.csv").size(), 3u);
  const auto snap = read_snapshot(sub / "final.nsac");
  EXPECT_EQ(snap.nx, 128u);
  EXPECT_NEAR(snap.t, 20 * 0.25 * 0.02 * 0.02, 1e-15);
  EXPECT_FALSE(rep.l2_rate.has_value());
}

TEST_F(SmallRun, ResumesAndIsDeterministic) {
  const auto first = run_experiment(cfg, table());
  const auto summary = dir / "eps_0.02" / "summary.csv";
  const auto stamp = fs::last_write_time(summary);
  const auto again = run_experiment(cfg, table());
  EXPECT_EQ(fs::last_write_time(summary), stamp);
  EXPECT_EQ(eps_record_values(again.records[0]), eps_record_values(first.records[0]));

  fs::remove_all(dir);
  const auto fresh = run_experiment(cfg, table());
  EXPECT_EQ(eps_record_values(fresh.records[0]), eps_record_values(first.records[0]));

  cfg.steps = 10;
  const auto changed = run_experiment(cfg, table());
  EXPECT_EQ(changed.records[0].steps, 10u);
}

TEST(CurveFile, RoundTripAndErrors) {
  const auto dir = fs::temp_directory_path() / "nsac_curve_file";
  fs::create_directories(dir);
  const std::vector<Curve> curves{Curve::circle({0.3, 0.5}, 0.1, 64), Curve::ellipse({0.7, 0.5}, 0.15, 0.1, 64)};
  write_curve_file(dir / "c.csv", curves);
  const auto back = read_curve_file(dir / "c.csv");
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].size(), 64u);
  EXPECT_NEAR(back[0].enclosed_area(), curves[0].enclosed_area(), 1e-12);
  EXPECT_NEAR(back[1].length(), curves[1].length(), 1e-12);
  std::ofstream(dir / "bad.csv") << "component,x,y\n2,0,0\n";
  EXPECT_EQ(code_of([&] { read_curve_file(dir / "bad.csv"); }), ErrorCode::BadConfig);
}

TEST(SharpRun, CircleStaysPutAndWritesTrace) {
  auto cfg = parse("radii = [0.25]\nt_end = 0.01\noutput_every = 1000000\n");
  cfg.out_dir = fs::temp_directory_path() / "nsac_sharp_run";
  fs::remove_all(cfg.out_dir);
  const auto res = run_sharp(cfg);
  EXPECT_NEAR(res.final_state.t, 0.01, 1e-15);
  EXPECT_LE(res.max_area_drift, 1e-6);
  const auto rows = read_csv(cfg.out_dir / "sharp.csv");
  ASSERT_EQ(rows.size(), res.steps + 1);
  EXPECT_NEAR(rows.back()[3], 4.0, 1e-4);
  EXPECT_TRUE(fs::exists(cfg.out_dir / "curves_000000.csv"));
  const auto line = parse("scenario = \"flat_interface\"\n");
  EXPECT_EQ(code_of([&] { run_sharp(line); }), ErrorCode::BadConfig);
}

TEST(AsymptoticsRun, OrderOneReducesResidual) {
  auto cfg = parse("eps = 0.02\ngrid = 128\norder = 0\n");
  cfg.out_dir = fs::temp_directory_path() / "nsac_asymptotics_run";
  fs::remove_all(cfg.out_dir);
  const auto r0 = run_asymptotics(cfg, table());
  cfg.order = 1;
  const auto r1 = run_asymptotics(cfg, table());
  EXPECT_NEAR(r1[0].lambda0, 4.0 / 3.0, 1e-4);
  EXPECT_LT(r1[0].residual.l2_omega, r0[0].residual.l2_omega);
  const auto snap = read_snapshot(cfg.out_dir / "eps_0.02" / "c_A.nsac");
  EXPECT_EQ(snap.nx, 128u);
  EXPECT_EQ(read_csv(cfg.out_dir / "asymptotics.csv").size(), 1u);
}
