#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "nsac/errors.hpp"
#include "nsac/potential.hpp"
#include "nsac/profiles.hpp"

using namespace nsac;

TEST(Potential, EvalAtWellAndCenter) {
  const auto pot = Potential::standard_quartic();
  const auto w = pot.eval(1.0);
  EXPECT_EQ(w.f, 0.0);
  EXPECT_EQ(w.df, 0.0);
  EXPECT_DOUBLE_EQ(w.d2f, 1.0);
  EXPECT_DOUBLE_EQ(w.d3f, 3.0);
  const auto c = pot.eval(0.0);
  EXPECT_DOUBLE_EQ(c.f, 0.125);
  EXPECT_EQ(c.df, 0.0);
  EXPECT_DOUBLE_EQ(c.d2f, -0.5);
  EXPECT_EQ(c.d3f, 0.0);
  EXPECT_DOUBLE_EQ(pot.df(0.5), -0.1875);
  EXPECT_EQ(pot.df(-1.0), 0.0);
  EXPECT_GT(pot.d2f(-1.0), 0.0);
}

TEST(Potential, ParityOnRandomSamples) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  const auto pot = Potential::standard_quartic();
  auto close = [](double a, double b) { return std::abs(a - b) <= 1e-13 * std::max({1.0, std::abs(a), std::abs(b)}); };
  for (int k = 0; k < 1000; ++k) {
    const double c = dist(rng);
    const auto p = pot.eval(c), m = pot.eval(-c);
    EXPECT_TRUE(close(p.f, m.f));
    EXPECT_TRUE(close(p.df, -m.df));
    EXPECT_TRUE(close(p.d2f, m.d2f));
    EXPECT_TRUE(close(p.d3f, -m.d3f));
  }
}

TEST(Potential, UserPolynomialMatchesStandardQuartic) {
  const std::vector<double> coeffs{0.125, 0.0, -0.25, 0.0, 0.125};
  const auto user = Potential::user_polynomial(coeffs);
  const auto std_q = Potential::standard_quartic();
  for (double c = -2.0; c <= 2.0; c += 0.01) {
    EXPECT_NEAR(user.f(c), std_q.f(c), 1e-14);
    EXPECT_NEAR(user.df(c), std_q.df(c), 1e-14);
    EXPECT_NEAR(user.d2f(c), std_q.d2f(c), 1e-14);
    EXPECT_NEAR(user.d3f(c), std_q.d3f(c), 1e-14);
  }
}

TEST(Potential, RejectsInvalidPolynomials) {
  EXPECT_THROW(Potential::user_polynomial(std::vector<double>{0.125, 0.1, -0.25, 0.0, 0.125}), Error);
  EXPECT_THROW(Potential::user_polynomial(std::vector<double>{0.125, 0.0, -0.25, 0.0, 0.125, 0.01}), Error);
  EXPECT_THROW(Potential::user_polynomial(std::vector<double>{-0.125, 0.0, 0.25, 0.0, -0.125}), Error);
  EXPECT_THROW(Potential::user_polynomial(std::vector<double>{0.2, 0.0, -0.25, 0.0, 0.125}), Error);
  EXPECT_THROW(Potential::user_polynomial(std::vector<double>{}), Error);
  try {
    Potential::user_polynomial(std::vector<double>{0.0, 0.0, 1.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidPotential);
  }
}

TEST(Potential, SigmaOfStandardQuartic) {
  EXPECT_NEAR(sigma_from_potential(Potential::standard_quartic()), 2.0 / 3.0, 1e-8);
}

TEST(Potential, SigmaScalesWithSquareRootOfPotential) {
  const auto four = Potential::user_polynomial(std::vector<double>{0.5, 0.0, -1.0, 0.0, 0.5});
  EXPECT_NEAR(sigma_from_potential(four), 2.0 * sigma_from_potential(Potential::standard_quartic()), 1e-10);
}

TEST(Potential, SigmaAgreesWithProfileSideIntegral) {
  const auto pot = Potential::standard_quartic();
  const auto table = solve_theta0(pot, 20.0, 0.01);
  std::vector<double> sq(table.size());
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = table.theta0_prime[i] * table.theta0_prime[i];
  EXPECT_NEAR(trapezoid(sq, table.drho), sigma_from_potential(pot), 1e-8);
}

TEST(Potential, StabilisationConstant) {
  EXPECT_DOUBLE_EQ(Potential::standard_quartic().max_abs_d2f_on_wells(), 1.0);
  EXPECT_DOUBLE_EQ(Potential::standard_quartic().decay_rate(), 1.0);
}
