#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include "nsac/errors.hpp"
#include "nsac/geometry.hpp"

using namespace nsac;
using std::numbers::pi;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::BadConfig;
}

double ellipse_perimeter(double a, double b) {
  auto g = [&](double t) { return std::hypot(a * std::sin(t), b * std::cos(t)); };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(g, 0.0, 2.0 * pi, 15, 1e-15);
}

}  // namespace

TEST(Curve, CircleLengthCurvatureAndNormals) {
  const Vec2 c(0.3, -0.2);
  const auto circ = Curve::circle(c, 0.5, 256);
  EXPECT_NEAR(circ.length(), pi, 1e-8);
  EXPECT_NEAR(circ.signed_area(), 0.25 * pi, 1e-8);
  for (std::size_t i = 0; i < circ.size(); ++i) {
    EXPECT_NEAR(circ.curvatures()[i], 2.0, 1e-6);
    EXPECT_NEAR((circ[i] - c).norm(), 0.5, 1e-12);
    EXPECT_NEAR(circ.normals()[i].dot((c - circ[i]).normalized()), 1.0, 1e-9);
  }
  const auto out = Curve::circle(c, 0.5, 256, Orientation::PlusOutside);
  for (double k : out.curvatures()) EXPECT_NEAR(k, -2.0, 1e-6);
  EXPECT_LT(out.signed_area(), 0.0);
}

TEST(Curve, EllipsePerimeterAndVertexCurvature) {
  const auto e = Curve::ellipse(Vec2::Zero(), 2.0, 1.0, 512);
  EXPECT_NEAR(e.length(), ellipse_perimeter(2.0, 1.0), 1e-8);
  EXPECT_LE(e.spacing_deviation(), 1e-4);
  double kmax = 0.0, kmin = 1e9;
  for (double t = 0.0; t < 1.0; t += 1e-4) {
    kmax = std::max(kmax, e.curvature_at(t));
    kmin = std::min(kmin, e.curvature_at(t));
  }
  EXPECT_NEAR(kmax, 2.0, 1e-5);
  EXPECT_NEAR(kmin, 0.25, 1e-5);
  EXPECT_NEAR(e.max_abs_curvature(), 2.0, 1e-3);
}

TEST(Curve, TotalCurvatureIsTwoPi) {
  const auto e = Curve::ellipse(Vec2(1.0, 1.0), 0.7, 0.3, 300);
  double tot = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) tot += e.curvatures()[i] * e.speeds()[i] / static_cast<double>(e.size());
  EXPECT_NEAR(tot, 2 * pi, 2e-5);
}

TEST(Curve, RigidMotionInvariance) {
  const auto e = Curve::ellipse(Vec2::Zero(), 1.0, 0.6, 200);
  const auto m = e.rotated(0.7).translated(Vec2(3.0, -1.0));
  EXPECT_NEAR(m.length(), e.length(), 1e-12);
  EXPECT_NEAR(m.signed_area(), e.signed_area(), 1e-12);
  for (std::size_t i = 0; i < e.size(); ++i) EXPECT_NEAR(m.curvatures()[i], e.curvatures()[i], 1e-9);
}

TEST(Curve, ResampleRoundTrip) {
  const auto circ = Curve::circle(Vec2::Zero(), 1.0, 200);
  const auto up = resample_arclength(circ, 300);
  const auto back = resample_arclength(up, 200);
  EXPECT_EQ(up.size(), 300u);
  EXPECT_LE(up.spacing_deviation(), 1e-8);
  for (std::size_t i = 0; i < back.size(); ++i) EXPECT_NEAR(back[i].norm(), 1.0, 1e-8);
  EXPECT_NEAR(back.length(), circ.length(), 1e-7);
}

TEST(Curve, FromPointsFixesOrientation) {
  std::vector<Vec2> cw;
  for (int i = 0; i < 64; ++i) cw.emplace_back(std::cos(-2 * pi * i / 64), std::sin(-2 * pi * i / 64));
  const auto c = Curve::from_points(cw, Orientation::PlusInside, 128);
  EXPECT_GT(c.signed_area(), 0.0);
  EXPECT_GT(c.curvatures()[0], 0.0);
}

TEST(Curve, RejectsDegenerateInput) {
  std::vector<Vec2> eight;
  for (int i = 0; i < 64; ++i) {
    const double t = 2 * pi * i / 64;
    eight.emplace_back(std::sin(t), std::sin(t) * std::cos(t));
  }
  EXPECT_EQ(code_of([&] { Curve::from_points(eight, Orientation::PlusInside, 64); }), ErrorCode::DegenerateCurve);
  EXPECT_EQ(code_of([&] { Curve::circle(Vec2::Zero(), 1e-13, 64); }), ErrorCode::DegenerateCurve);
  EXPECT_EQ(code_of([&] { resample_arclength(Curve::circle(Vec2::Zero(), 1.0, 64), 8); }),
            ErrorCode::DegenerateCurve);
}

TEST(Projection, CircleOracle) {
  const auto circ = Curve::circle(Vec2::Zero(), 1.0, 128);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> rad(0.5, 1.5), ang(0.0, 2 * pi);
  for (int k = 0; k < 200; ++k) {
    const double r = rad(rng), t = ang(rng);
    const Vec2 x(r * std::cos(t), r * std::sin(t));
    const auto tc = signed_distance_and_project(circ, x, 0.3);
    EXPECT_NEAR(tc.r, 1.0 - r, 1e-7);
    EXPECT_NEAR((tc.foot - x / r).norm(), 0.0, 2e-6);
    EXPECT_NEAR(tc.normal.dot(-x / r), 1.0, 1e-9);
    EXPECT_EQ(tc.inside_tube, std::abs(1.0 - r) < 0.6);
    EXPECT_NEAR(tc.curvature, 1.0, 1e-6);
  }
}

TEST(Projection, RoundTripFromFoot) {
  const auto e = Curve::ellipse(Vec2::Zero(), 1.0, 0.7, 256);
  for (double s = 0.01; s < 1.0; s += 0.07) {
    for (double r : {-0.2, -0.05, 0.0, 0.1, 0.3}) {
      const Vec2 x = e.position(s) + r * rot90(e.derivative(s).normalized());
      const auto tc = signed_distance_and_project(e, x, 0.2);
      EXPECT_NEAR(tc.r, r, 1e-9);
      EXPECT_NEAR(std::remainder(tc.s - s, 1.0), 0.0, 1e-9);
    }
  }
}

TEST(Projection, CenterOfCircle) {
  const auto circ = Curve::circle(Vec2::Zero(), 1.0, 128);
  EXPECT_NEAR(signed_distance_and_project(circ, Vec2::Zero(), 0.3).r, 1.0, 1e-7);
  EXPECT_EQ(code_of([&] { signed_distance_and_project(circ, Vec2::Zero(), 0.3, true); }),
            ErrorCode::AmbiguousProjection);
}

TEST(Projection, StretchedRhoOutsideTube) {
  const auto circ = Curve::circle(Vec2::Zero(), 1.0, 128);
  const auto near = signed_distance_and_project(circ, Vec2(0.9, 0.0), 0.1);
  EXPECT_NEAR(stretched_rho(near, 0.01, [](double) { return 2.0; }), 8.0, 1e-7);
  const auto far = signed_distance_and_project(circ, Vec2(0.5, 0.0), 0.1);
  EXPECT_EQ(code_of([&] { stretched_rho(far, 0.01, nullptr); }), ErrorCode::OutsideTube);
}

TEST(TubeIntegral, AreaIdentities) {
  const auto circ = Curve::circle(Vec2::Zero(), 1.0, 128);
  EXPECT_NEAR(tube_integrate(circ, 0.2, [](double, double) { return 1.0; }), 0.8 * pi, 1e-6);
  EXPECT_NEAR(tube_integrate(circ, 0.2, [](double r, double) { return r * r; }), 2 * pi * 2 * 0.008 / 3, 1e-8);
  const auto e = Curve::ellipse(Vec2::Zero(), 1.0, 0.6, 400);
  EXPECT_NEAR(tube_integrate(e, 0.1, [](double, double) { return 1.0; }), 0.2 * e.length(), 1e-7);
  EXPECT_EQ(code_of([&] { tube_integrate(circ, 1.0, [](double, double) { return 1.0; }); }), ErrorCode::TubeTooWide);
}

TEST(Cutoff, ValuesAndDerivative) {
  const double d = 0.1;
  EXPECT_EQ(cutoff_zeta(d, 0.05), 1.0);
  EXPECT_EQ(cutoff_zeta(d, -0.1), 1.0);
  EXPECT_EQ(cutoff_zeta(d, 0.2), 0.0);
  EXPECT_NEAR(cutoff_zeta(d, 0.15), 0.5, 1e-15);
  double bound = 0.0;
  for (double z = -0.25; z <= 0.25; z += 1e-4) {
    const double fd = (cutoff_zeta(d, z + 1e-7) - cutoff_zeta(d, z - 1e-7)) / 2e-7;
    EXPECT_NEAR(cutoff_zeta_derivative(d, z), fd, 1e-5);
    bound = std::max(bound, std::abs(z * cutoff_zeta_derivative(d, z)));
  }
  EXPECT_LE(bound, 4.0);
}

TEST(Interface, TwoCircles) {
  const auto g = Interface::from_curves({Curve::circle(Vec2(0.3, 0.3), 0.2, 128), Curve::circle(Vec2(0.75, 0.7), 0.1, 128)});
  EXPECT_NEAR(g.total_length(), 2 * pi * 0.3, 1e-7);
  EXPECT_NEAR(g.mean_curvature(), 2.0 / 0.3, 1e-5);
  const double gap = std::hypot(0.45, 0.4) - 0.3;
  EXPECT_NEAR(g.component_gap(), gap, 2e-3);
  EXPECT_NEAR(g.tube_half_width(1.0, 1.0), std::min({0.04, 0.1 / 2.5, g.component_gap() / 4}), 1e-6);
  const auto tc = g.project(Vec2(0.75, 0.85), 0.05);
  EXPECT_EQ(tc.component, 1u);
  EXPECT_NEAR(tc.r, -0.05, 1e-9);
  EXPECT_EQ(code_of([] { Interface::from_curves({}); }), ErrorCode::NoInterface);
}

TEST(Interface, VerticalLine) {
  const auto g = Interface::vertical_line(0.5, 1.0);
  const auto tc = g.project(Vec2(0.3, 0.25), 0.1);
  EXPECT_NEAR(tc.r, 0.2, 1e-15);
  EXPECT_NEAR(tc.s, 0.25, 1e-15);
  EXPECT_EQ(g.mean_curvature(), 0.0);
  EXPECT_EQ(g.distance_to_box(2.0, 1.0), 0.5);
}
