#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "nsac/errors.hpp"
#include "nsac/numerics.hpp"

using namespace nsac;

TEST(Numerics, PairwiseSumIsOrderStableOnSmallInputs) {
  std::vector<double> v(1000);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 1.0 / static_cast<double>(i + 1);
  double ref = 0.0;
  for (std::size_t i = v.size(); i-- > 0;) ref += v[i];
  EXPECT_NEAR(pairwise_sum(v), ref, 1e-13);
  EXPECT_EQ(pairwise_sum(std::vector<double>{}), 0.0);
}

TEST(Numerics, GaussLegendreIsExactForPolynomials) {
  const auto [x, w] = gauss_legendre(8, -1.0, 3.0);
  for (int k = 0; k <= 15; ++k) {
    double q = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) q += w[i] * std::pow(x[i], k);
    const double exact = (std::pow(3.0, k + 1) - std::pow(-1.0, k + 1)) / (k + 1);
    EXPECT_NEAR(q, exact, 1e-12 * std::max(1.0, std::abs(exact)));
  }
}

TEST(Numerics, TridiagonalMatchesDense) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (bool cyclic : {false, true}) {
    const std::size_t n = 17;
    std::vector<double> lo(n), di(n), up(n), b(n);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
      lo[i] = u(rng);
      up[i] = u(rng);
      di[i] = 4.0 + u(rng);
      b[i] = u(rng);
      rhs[i] = b[i];
      A(i, i) = di[i];
      if (i > 0) A(i, i - 1) = lo[i];
      if (i + 1 < n) A(i, i + 1) = up[i];
    }
    if (cyclic) {
      A(0, n - 1) = lo[0];
      A(n - 1, 0) = up[n - 1];
    }
    const Eigen::VectorXd ref = A.partialPivLu().solve(rhs);
    const auto x = cyclic ? solve_cyclic_tridiagonal(lo, di, up, b) : solve_tridiagonal(lo, di, up, b);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(x[i], ref[i], 1e-12);
  }
}

TEST(Numerics, LeastSquaresRecoversLine) {
  std::vector<double> x{1, 2, 3, 4, 5}, y;
  for (double v : x) y.push_back(2.5 * v - 1.0);
  const auto fit = least_squares(x, y);
  EXPECT_NEAR(fit.slope, 2.5, 1e-14);
  EXPECT_NEAR(fit.intercept, -1.0, 1e-13);
  EXPECT_NEAR(fit.r2, 1.0, 1e-14);
  EXPECT_THROW(least_squares(std::vector<double>{1.0}, std::vector<double>{1.0}), Error);
}
