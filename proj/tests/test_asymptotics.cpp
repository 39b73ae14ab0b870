#include <cmath>
#include <functional>
#include <vector>

#include <gtest/gtest.h>

#include "nsac/asymptotics.hpp"
#include "nsac/errors.hpp"

using namespace nsac;

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
  return ErrorCode::BadConfig;
}

Interface circle(double R = 0.25, std::size_t n = 256) {
  return Interface::from_curves({Curve::circle({0.5, 0.5}, R, n)});
}

GridSpec unit_grid(std::size_t n) { return {n, n, 1.0, 1.0, BoundaryCondition::WallNeumannNoSlip}; }

}  // namespace

TEST(Lambda0, UnitCircle) {
  const auto g = Interface::from_curves({Curve::circle({0, 0}, 1.0, 256)});
  EXPECT_NEAR(compute_lambda0(g, std::nullopt, 2.0 / 3.0), 1.0 / 3.0, 1e-7);
}

TEST(Lambda0, DivergenceFreeFlowHasZeroMeanNormalVelocity) {
  const auto g = Interface::from_curves({Curve::ellipse({0.3, -0.2}, 1.0, 0.6, 256)});
  VelocityField v = [](const Vec2& x, double) { return Vec2(std::sin(x.y()) + 0.3, std::cos(2 * x.x())); };
  EXPECT_LE(std::abs(mean_normal_velocity(g, v)), 1e-8);
  EXPECT_NEAR(compute_lambda0(g, v, 2.0 / 3.0), compute_lambda0(g, std::nullopt, 2.0 / 3.0), 1e-8);
}

TEST(G0, CircleMatchesClosedForm) {
  const double R = 0.5, sigma = 2.0 / 3.0;
  const auto g = Interface::from_curves({Curve::circle({0, 0}, R, 512)});
  const double lambda0 = compute_lambda0(g, std::nullopt, sigma);
  G0Options opt;
  opt.band = 0.05;
  std::vector<Vec2> pts;
  for (double r : {0.1, 0.3, 0.46, 0.49, 0.4999, 0.5, 0.5001, 0.52, 0.6, 0.9}) pts.emplace_back(r * 0.6, r * 0.8);
  const auto g0 = compute_g0(g, lambda0, sigma, pts, opt);
  for (std::size_t k = 0; k < pts.size(); ++k)
    EXPECT_NEAR(g0[k], -1.0 / (R * pts[k].norm()), 2e-5 / (R * pts[k].norm())) << pts[k].norm();
  const auto on = g0_on_gamma(g, lambda0, sigma, opt);
  for (double x : on[0]) EXPECT_NEAR(x, -1.0 / (R * R), 1e-5);
}

TEST(G0, StraightLineIsZero) {
  const auto g = Interface::vertical_line(0.5, 1.0);
  G0Options opt;
  opt.band = 0.05;
  std::vector<Vec2> pts{{0.1, 0.3}, {0.49, 0.5}, {0.5, 0.2}, {0.8, 0.9}};
  for (double x : compute_g0(g, 0.0, 2.0 / 3.0, pts, opt)) EXPECT_NEAR(x, 0.0, 1e-12);
}

TEST(G0, ContinuousAcrossBand) {
  const auto g = Interface::from_curves({Curve::ellipse({0, 0}, 1.0, 0.7, 512)});
  const double sigma = 2.0 / 3.0, lambda0 = compute_lambda0(g, std::nullopt, sigma);
  G0Options opt;
  opt.band = 0.05;
  std::vector<Vec2> pts{Vec2(0, 0.7 + 0.05 - 1e-9), Vec2(0, 0.7 + 0.05 + 1e-9)};
  const auto g0 = compute_g0(g, lambda0, sigma, pts, opt);
  EXPECT_NEAR(g0[0], g0[1], 1e-4);
}

TEST(G0, InconsistentLambdaThrows) {
  const auto g = circle();
  G0Options opt;
  std::vector<Vec2> pts{{0.5, 0.6}};
  EXPECT_EQ(code_of([&] { compute_g0(g, 1.0, 2.0 / 3.0, pts, opt); }), ErrorCode::BracketNotVanishing);
}

TEST(ApproxSolution, CentreCornerAndProfile) {
  const double eps = 0.02;
  const auto grid = unit_grid(128);
  const auto g = circle();
  const auto a = build_approx_solution(grid, g, eps, table());
  EXPECT_NEAR(a.c_A(64, 64), 1.0, 1e-12);
  EXPECT_NEAR(a.c_A(0, 0), -1.0, 1e-12);
  EXPECT_NEAR(a.lambda0, 2.0 / 3.0 / 2.0 / 0.25, 1e-6);
  for (std::size_t i = 64; i < 128; ++i) {
    const double d = a.distance(i, 64);
    if (std::abs(d) < a.delta) EXPECT_NEAR(a.c_A(i, 64), std::tanh(d / (2 * eps)), 1e-7);
  }
  ASSERT_EQ(a.g0_on_gamma.size(), 1u);
  EXPECT_NEAR(a.g0_on_gamma[0][0], -16.0, 1e-3);
}

TEST(ApproxSolution, OrderOneTermIsLinear) {
  const double eps = 0.02, lambda0 = 0.7;
  const auto grid = unit_grid(128);
  const auto g = circle();
  ApproxOptions o0, o1;
  o0.lambda0 = lambda0;
  o1.lambda0 = lambda0;
  o1.order = 1;
  const auto a0 = build_approx_solution(grid, g, eps, table(), o0);
  const auto a1 = build_approx_solution(grid, g, eps, table(), o1);
  EXPECT_TRUE(a1.g0_on_gamma.empty());
  for (std::size_t i = 0; i < 128; ++i) {
    const double d = a1.distance(i, 64);
    const double diff = (a1.c_A(i, 64) - a0.c_A(i, 64)) / (eps * lambda0);
    if (std::abs(d) < a1.delta)
      EXPECT_NEAR(diff, std::pow(std::tanh(d / (2 * eps)), 2), 1e-6);
    else if (std::abs(d) > 2 * a1.delta)
      EXPECT_NEAR(diff, 1.0, 1e-12);
  }
}

TEST(ApproxSolution, HeightShiftMovesLevelSet) {
  const double eps = 0.02;
  const auto grid = unit_grid(128);
  const auto g = circle();
  ApproxOptions o;
  o.h = [](std::size_t, double) { return 1.0; };
  const auto a = build_approx_solution(grid, g, eps, table(), o);
  EXPECT_TRUE(a.components.height_shift);
  for (std::size_t i = 64; i < 128; ++i) {
    const double d = a.distance(i, 64);
    if (std::abs(d) < a.delta) EXPECT_NEAR(a.c_A(i, 64), std::tanh((d / eps - 1.0) / 2), 1e-7);
  }
}

TEST(ApproxSolution, RejectsCoarseGridAndNarrowTube) {
  const auto g = circle();
  EXPECT_EQ(code_of([&] { build_approx_solution(unit_grid(64), g, 0.02, table()); }), ErrorCode::ResolutionTooCoarse);
  ApproxOptions o;
  o.delta = 0.05;
  EXPECT_EQ(code_of([&] { build_approx_solution(unit_grid(256), g, 0.02, table(), o); }), ErrorCode::TubeTooNarrow);
}

TEST(Residual, OrderOneBeatsOrderZero) {
  const double eps = 0.02;
  const auto grid = unit_grid(256);
  const auto g = circle();
  ApproxOptions o1;
  o1.order = 1;
  const auto a0 = build_approx_solution(grid, g, eps, table());
  const auto a1 = build_approx_solution(grid, g, eps, table(), o1);
  const auto r0 = residual_norms(a0, table().potential, TimeDerivativeData::stationary(a0));
  const auto r1 = residual_norms(a1, table().potential, TimeDerivativeData::stationary(a1));
  EXPECT_LE(r1.l2_omega, 0.5 * r0.l2_omega);
  EXPECT_LE(r1.l2_outside, 0.05 * r0.l2_outside);
}

TEST(Residual, NeedsMotion) {
  const auto a = build_approx_solution(unit_grid(128), circle(), 0.02, table());
  EXPECT_EQ(code_of([&] { residual_norms(a, table().potential, std::nullopt); }), ErrorCode::MissingMotion);
}

TEST(HCoefficients, CircleAtRest) {
  const double R = 0.25;
  const auto g = circle(R, 128);
  const auto c = h_coefficients(g, 0, compute_lambda0(g, std::nullopt, 2.0 / 3.0), 2.0 / 3.0);
  EXPECT_NEAR(c.length, 2 * M_PI * R, 1e-6);
  for (std::size_t i = 0; i < 128; ++i) {
    EXPECT_NEAR(c.V[i], 0.0, 1e-6);
    EXPECT_NEAR(c.kappa[i], 1.0 / R, 1e-5);
    EXPECT_NEAR(c.g0[i], -1.0 / (R * R), 1e-3);
  }
}
