#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "nsac/errors.hpp"
#include "nsac/numerics.hpp"
#include "nsac/profiles.hpp"

using namespace nsac;

namespace {

const ProfileTable& standard_table() {
  static const ProfileTable t = build_profiles(Potential::standard_quartic(), 20.0, 0.01);
  return t;
}

std::vector<double> theta1_rhs(const ProfileTable& t) {
  std::vector<double> r(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) r[i] = 1.0 - (2.0 / t.sigma) * t.theta0_prime[i];
  return r;
}

double max_interior(const std::vector<double>& v, std::size_t skip) {
  double m = 0.0;
  for (std::size_t i = skip; i + skip < v.size(); ++i) m = std::max(m, std::abs(v[i]));
  return m;
}

}  // namespace

TEST(Theta0, CenterValuesAndLimits) {
  const auto& t = standard_table();
  const std::size_t m = t.center();
  EXPECT_EQ(t.rho[m], 0.0);
  EXPECT_EQ(t.theta0[m], 0.0);
  EXPECT_DOUBLE_EQ(t.theta0_prime[m], 0.5);
  EXPECT_NEAR(t.theta0.back(), 1.0, std::exp(-t.alpha * t.L / 2.0));
  EXPECT_NEAR(t.theta0.front(), -1.0, std::exp(-t.alpha * t.L / 2.0));
  for (std::size_t j = 0; j <= m; ++j) EXPECT_EQ(t.theta0[m + j], -t.theta0[m - j]);
  for (std::size_t i = 1; i < t.size(); ++i) EXPECT_GT(t.theta0[i], t.theta0[i - 1]);
}

TEST(Theta0, OdeResidualAndIntegrals) {
  const auto& t = standard_table();
  EXPECT_LE(t.theta0_residual, 1e-9);
  EXPECT_NEAR(trapezoid(t.theta0_prime, t.drho), 2.0, 1e-8);
  std::vector<double> sq(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) sq[i] = t.theta0_prime[i] * t.theta0_prime[i];
  EXPECT_NEAR(trapezoid(sq, t.drho), t.sigma, 1e-8);
  EXPECT_NEAR(t.sigma, 2.0 / 3.0, 1e-10);
}

TEST(Theta0, TailDecayRate) {
  const auto& t = standard_table();
  std::vector<double> x, y;
  for (std::size_t i = t.center(); i < t.size(); ++i) {
    if (t.rho[i] < 5.0) continue;
    x.push_back(t.rho[i]);
    y.push_back(std::log(1.0 - t.theta0[i]));
  }
  const auto fit = least_squares(x, y);
  EXPECT_GE(-fit.slope, 0.9 * t.alpha);
}

TEST(Theta0, UserPolynomialIntegratesFirstIntegral) {
  // 4 f_standard = (c^2-1)^2 / 2 has the profile tanh(rho).
  const auto pot = Potential::user_polynomial(std::vector<double>{0.5, 0.0, -1.0, 0.0, 0.5});
  const auto t = solve_theta0(pot, 20.0, 0.01);
  double err = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) err = std::max(err, std::abs(t.theta0[i] - std::tanh(t.rho[i])));
  EXPECT_LE(err, 1e-10);
  EXPECT_NEAR(t.sigma, 4.0 / 3.0, 1e-10);
  EXPECT_LE(t.theta0_residual, 1e-6);
}

TEST(Theta0, RejectsBadResolution) {
  EXPECT_THROW(solve_theta0(Potential::standard_quartic(), 5.0, 0.01), Error);
  EXPECT_THROW(solve_theta0(Potential::standard_quartic(), 20.0, 0.1), Error);
}

TEST(Theta1, MatchesClosedForm) {
  // For the standard quartic L[1] = f''(theta0) = 1 - 3 theta0', so
  // 1 - 2 theta0' = tanh^2(rho/2) solves L v = 1 - 3 theta0' with v(0) = 0.
  const auto& t = standard_table();
  double err = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double th = std::tanh(0.5 * t.rho[i]);
    err = std::max(err, std::abs(t.theta1[i] - th * th));
  }
  EXPECT_LE(err, 1e-7);
}

TEST(Theta1, FarFieldEvennessAndOrthogonality) {
  const auto& t = standard_table();
  EXPECT_NEAR(t.theta1.back(), 1.0, 1e-4);
  EXPECT_NEAR(t.theta1.front(), 1.0, 1e-4);
  EXPECT_EQ(t.theta1[t.center()], 0.0);
  for (std::size_t j = 0; j <= t.center(); ++j)
    EXPECT_NEAR(t.theta1[t.center() + j], t.theta1[t.center() - j], 1e-10);
  std::vector<double> ortho(t.size());
  for (std::size_t i = 0; i < t.size(); ++i)
    ortho[i] = t.theta0_prime[i] * t.theta0_prime[i] * t.potential.d3f(t.theta0[i]) * t.theta1[i];
  EXPECT_NEAR(trapezoid(ortho, t.drho), 0.0, 1e-8);
  EXPECT_LE(t.theta1_residual, 1e-6);
}

TEST(LinearizedOperator, KnownImages) {
  const auto& t = standard_table();
  const double h2 = t.drho * t.drho;
  EXPECT_LE(max_interior(apply_linearized(t, t.theta0_prime), 1), 0.1 * h2);
  auto l1 = apply_linearized(t, t.theta1);
  const auto rhs = theta1_rhs(t);
  for (std::size_t i = 0; i < l1.size(); ++i) l1[i] -= rhs[i];
  EXPECT_LE(max_interior(l1, 1), 0.2 * h2);
  const std::vector<double> zero(t.size(), 0.0);
  EXPECT_EQ(max_interior(apply_linearized(t, zero), 0), 0.0);
  EXPECT_THROW(apply_linearized(t, std::vector<double>(3, 0.0)), Error);
}

TEST(LinearizedOperator, DiscreteSelfAdjointness) {
  const auto& t = standard_table();
  std::vector<double> u(t.size()), v(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    u[i] = std::exp(-t.rho[i] * t.rho[i]);
    v[i] = t.rho[i] * std::exp(-0.5 * (t.rho[i] - 1.0) * (t.rho[i] - 1.0));
  }
  const auto lu = apply_linearized(t, u), lv = apply_linearized(t, v);
  std::vector<double> a(t.size()), b(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    a[i] = lu[i] * v[i];
    b[i] = u[i] * lv[i];
  }
  EXPECT_LE(std::abs(trapezoid(a, t.drho) - trapezoid(b, t.drho)), 1e-8);
}

TEST(LinearizedOperator, ResidualConvergesAtSecondOrder) {
  const auto pot = Potential::standard_quartic();
  auto residuals = [&](double drho) {
    const auto t = build_profiles(pot, 20.0, drho);
    auto l1 = apply_linearized(t, t.theta1);
    const auto rhs = theta1_rhs(t);
    for (std::size_t i = 0; i < l1.size(); ++i) l1[i] -= rhs[i];
    std::vector<double> r0(t.size(), 0.0);
    for (std::size_t i = 1; i + 1 < t.size(); ++i)
      r0[i] = -(t.theta0[i - 1] - 2 * t.theta0[i] + t.theta0[i + 1]) / (drho * drho) + pot.df(t.theta0[i]);
    return std::pair{max_interior(r0, 1), max_interior(l1, 1)};
  };
  const auto [a0, a1] = residuals(0.02);
  const auto [b0, b1] = residuals(0.01);
  EXPECT_GE(std::log2(a0 / b0), 1.9);
  EXPECT_GE(std::log2(a1 / b1), 1.9);
}

TEST(Solvability, Examples) {
  const auto& t = standard_table();
  EXPECT_NEAR(check_solvability(t, theta1_rhs(t)), 0.0, 1e-8);
  std::vector<double> dd(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) dd[i] = t.potential.df(t.theta0[i]);  // theta0''
  EXPECT_NEAR(check_solvability(t, dd), 0.0, 1e-10);
  EXPECT_NEAR(check_solvability(t, t.theta0_prime), t.sigma, 1e-8);
}

TEST(C1, LinearInLambda0) {
  const auto& t = standard_table();
  const auto zero = solve_c1(t, 0.0);
  for (double v : zero.c1) EXPECT_EQ(v, 0.0);
  const auto third = solve_c1(t, 1.0 / 3.0);
  EXPECT_NEAR(third.c1.back(), 1.0 / 3.0, 1e-4);
  EXPECT_NEAR(third.c1.front(), 1.0 / 3.0, 1e-4);
  EXPECT_LE(third.c1_residual, 1e-6);
  for (std::size_t j = 0; j <= t.center(); ++j)
    EXPECT_NEAR(third.c1[t.center() + j], third.c1[t.center() - j], 1e-10);
}

TEST(ProfileTable, HermiteInterpolation) {
  const auto& t = standard_table();
  for (double r = -19.9; r < 19.9; r += 0.0137) {
    const double th = std::tanh(0.5 * r);
    EXPECT_NEAR(t.theta0_at(r), th, 1e-10);
    EXPECT_NEAR(t.theta0_prime_at(r), 0.5 * (1 - th * th), 1e-10);
    EXPECT_NEAR(t.theta1_at(r), th * th, 1e-7);
  }
  EXPECT_NEAR(t.theta0_at(35.0), 1.0, 1e-12);
  EXPECT_NEAR(t.theta0_at(-35.0), -1.0, 1e-12);
  EXPECT_EQ(t.theta1_at(40.0), 1.0);
}
