#include "nsac/profiles.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Sparse>
#include <boost/numeric/odeint.hpp>

#include "nsac/errors.hpp"
#include "nsac/numerics.hpp"

namespace nsac {

namespace {

// Second-derivative stencils (weights for offsets -k..k, times 1/h^2).
constexpr double kD2Order4[5] = {-1.0 / 12.0, 4.0 / 3.0, -5.0 / 2.0, 4.0 / 3.0, -1.0 / 12.0};
constexpr double kD2Order6[7] = {1.0 / 90.0, -3.0 / 20.0, 3.0 / 2.0, -49.0 / 18.0,
                                 3.0 / 2.0,  -3.0 / 20.0, 1.0 / 90.0};

template <std::size_t K>
double second_difference(std::span<const double> v, std::size_t i, const double (&w)[K], double h) {
  constexpr std::ptrdiff_t half = K / 2;
  double acc = 0.0;
  for (std::ptrdiff_t k = -half; k <= half; ++k) acc += w[k + half] * v[i + k];
  return acc / (h * h);
}

std::vector<double> theta1_rhs(const ProfileTable& t) {
  std::vector<double> rhs(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) rhs[i] = 1.0 - (2.0 / t.sigma) * t.theta0_prime[i];
  return rhs;
}

double hermite(double y0, double y1, double d0, double d1, double t, double h) {
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * h * d0 + (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * h * d1;
}

}  // namespace

double trapezoid(std::span<const double> values, double spacing) {
  if (values.size() < 2) return 0.0;
  std::vector<double> w(values.begin(), values.end());
  w.front() *= 0.5;
  w.back() *= 0.5;
  return spacing * pairwise_sum(w);
}

ProfileTable solve_theta0(const Potential& pot, double L, double drho) {
  if (L < 10.0) throw Error(ErrorCode::BadConfig, "profile truncation L must be >= 10");
  if (drho > 0.05 || drho <= 0.0) throw Error(ErrorCode::ResolutionTooCoarse, "drho must lie in (0, 0.05]");

  for (int k = 1; k < 2000; ++k) {
    const double s = -1.0 + 2.0 * k / 2000.0;
    if (pot.f(s) <= 0.0) throw Error(ErrorCode::NoHeteroclinic, "f must be positive between the wells");
  }

  ProfileTable t;
  t.potential = pot;
  const auto m = static_cast<std::size_t>(std::llround(L / drho));
  t.drho = drho;
  t.L = static_cast<double>(m) * drho;
  t.alpha = pot.decay_rate();
  t.sigma = sigma_from_potential(pot);
  const std::size_t n = 2 * m + 1;
  t.rho.resize(n);
  t.theta0.resize(n);
  t.theta0_prime.resize(n);
  for (std::size_t i = 0; i < n; ++i) t.rho[i] = (static_cast<double>(i) - static_cast<double>(m)) * drho;

  if (pot.kind() == Potential::Kind::StandardQuartic) {
    for (std::size_t i = 0; i < n; ++i) {
      const double th = std::tanh(0.5 * t.rho[i]);
      t.theta0[i] = th;
      t.theta0_prime[i] = 0.5 * (1.0 - th * th);
    }
  } else {
    namespace odeint = boost::numeric::odeint;
    using State = double;
    auto rhs = [&pot](const State& th, State& dth, double) { dth = std::sqrt(2.0 * std::max(pot.f(th), 0.0)); };
    std::vector<double> times(t.rho.begin() + static_cast<std::ptrdiff_t>(m), t.rho.end());
    State th = 0.0;
    std::size_t k = m;
    auto stepper = odeint::make_controlled(1e-15, 1e-14, odeint::runge_kutta_fehlberg78<State>());
    odeint::integrate_times(stepper, rhs, th, times.begin(), times.end(), drho * 0.1,
                            [&](const State& x, double) { t.theta0[k++] = std::min(x, 1.0); });
    for (std::size_t j = 1; j <= m; ++j) t.theta0[m - j] = -t.theta0[m + j];
    t.theta0[m] = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      t.theta0_prime[i] = std::sqrt(2.0 * std::max(pot.f(t.theta0[i]), 0.0));
  }

  double res = 0.0;
  for (std::size_t i = 3; i + 3 < n; ++i) {
    const double r = -second_difference(t.theta0, i, kD2Order6, drho) + pot.df(t.theta0[i]);
    res = std::max(res, std::abs(r));
  }
  t.theta0_residual = res;
  return t;
}

ProfileTable solve_theta1(const Potential& pot, ProfileTable t) {
  if (t.theta0.empty()) throw Error(ErrorCode::ShapeMismatch, "theta0 missing");
  const std::size_t n = t.size();
  const std::size_t m = t.center();
  const double h = t.drho;
  const double far = 1.0 / pot.well_curvature();
  const auto rhs = theta1_rhs(t);

  // Unknowns theta1(j*h), j = 1..m-1; theta1(0) = 0 pins the kernel direction.
  const std::size_t nu = m - 1;
  auto value_at = [&](std::ptrdiff_t j, const Eigen::VectorXd* x) -> double {
    if (j < 0) j = -j;
    if (j == 0) return 0.0;
    if (j >= static_cast<std::ptrdiff_t>(m)) return far;
    return x ? (*x)[j - 1] : 0.0;
  };
  std::vector<Eigen::Triplet<double>> trip;
  Eigen::VectorXd b(nu);
  for (std::size_t row = 0; row < nu; ++row) {
    const auto j = static_cast<std::ptrdiff_t>(row + 1);
    b[row] = rhs[m + row + 1];
    trip.emplace_back(row, row, pot.d2f(t.theta0[m + row + 1]));
    for (std::ptrdiff_t k = -2; k <= 2; ++k) {
      const double w = -kD2Order4[k + 2] / (h * h);
      std::ptrdiff_t jj = j + k;
      if (jj < 0) jj = -jj;  // even reflection
      if (jj == 0) continue;
      if (jj >= static_cast<std::ptrdiff_t>(m)) {
        b[row] -= w * far;
        continue;
      }
      trip.emplace_back(row, jj - 1, w);
    }
  }
  Eigen::SparseMatrix<double> A(nu, nu);
  A.setFromTriplets(trip.begin(), trip.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) throw Error(ErrorCode::SingularSystem, "theta1 system factorisation failed");
  const Eigen::VectorXd x = lu.solve(b);
  if (lu.info() != Eigen::Success || !x.allFinite())
    throw Error(ErrorCode::SingularSystem, "theta1 system solve failed");

  t.theta1.assign(n, 0.0);
  for (std::size_t j = 0; j <= m; ++j) {
    const double v = value_at(static_cast<std::ptrdiff_t>(j), &x);
    t.theta1[m + j] = v;
    t.theta1[m - j] = v;
  }

  t.theta1_prime.assign(n, 0.0);
  for (std::size_t i = 2; i + 2 < n; ++i)
    t.theta1_prime[i] = (t.theta1[i - 2] - 8.0 * t.theta1[i - 1] + 8.0 * t.theta1[i + 1] - t.theta1[i + 2]) / (12.0 * h);

  t.theta1_residual = linearized_residual_high_order(t, t.theta1, rhs);
  return t;
}

double linearized_residual_high_order(const ProfileTable& t, std::span<const double> v, std::span<const double> rhs) {
  if (v.size() != t.size() || rhs.size() != t.size()) throw Error(ErrorCode::ShapeMismatch, "array/grid size mismatch");
  double res = 0.0;
  for (std::size_t i = 2; i + 2 < t.size(); ++i) {
    const double r = -second_difference(v, i, kD2Order4, t.drho) + t.potential.d2f(t.theta0[i]) * v[i] - rhs[i];
    res = std::max(res, std::abs(r));
  }
  return res;
}

std::vector<double> apply_linearized(const ProfileTable& t, std::span<const double> v) {
  const std::size_t n = t.size();
  if (v.size() != n) throw Error(ErrorCode::ShapeMismatch, "array/grid size mismatch");
  if (n < 4) throw Error(ErrorCode::ShapeMismatch, "grid too small");
  const double ih2 = 1.0 / (t.drho * t.drho);
  std::vector<double> out(n);
  for (std::size_t i = 1; i + 1 < n; ++i) out[i] = -(v[i - 1] - 2.0 * v[i] + v[i + 1]) * ih2;
  out[0] = -(2.0 * v[0] - 5.0 * v[1] + 4.0 * v[2] - v[3]) * ih2;
  out[n - 1] = -(2.0 * v[n - 1] - 5.0 * v[n - 2] + 4.0 * v[n - 3] - v[n - 4]) * ih2;
  for (std::size_t i = 0; i < n; ++i) out[i] += t.potential.d2f(t.theta0[i]) * v[i];
  return out;
}

double check_solvability(const ProfileTable& t, std::span<const double> h) {
  if (h.size() != t.size()) throw Error(ErrorCode::ShapeMismatch, "array/grid size mismatch");
  std::vector<double> prod(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) prod[i] = h[i] * t.theta0_prime[i];
  return trapezoid(prod, t.drho);
}

ProfileTable solve_c1(ProfileTable t, double lambda0) {
  if (!t.has_theta1()) throw Error(ErrorCode::ShapeMismatch, "theta1 missing");
  t.lambda0 = lambda0;
  t.c1.resize(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) t.c1[i] = lambda0 * t.theta1[i];
  auto rhs = theta1_rhs(t);
  for (double& r : rhs) r *= lambda0;
  t.c1_residual = linearized_residual_high_order(t, t.c1, rhs);
  return t;
}

ProfileTable build_profiles(const Potential& pot, double L, double drho) {
  return solve_theta1(pot, solve_theta0(pot, L, drho));
}

double ProfileTable::theta1_far() const { return 1.0 / potential.well_curvature(); }

double ProfileTable::theta0_at(double r) const {
  if (r >= L) return theta0.back() + (1.0 - theta0.back()) * (1.0 - std::exp(-alpha * (r - L)));
  if (r <= -L) return theta0.front() - (1.0 + theta0.front()) * (1.0 - std::exp(-alpha * (-L - r)));
  const double u = (r + L) / drho;
  auto k = static_cast<std::size_t>(u);
  if (k >= size() - 1) k = size() - 2;
  const double s = u - static_cast<double>(k);
  return hermite(theta0[k], theta0[k + 1], theta0_prime[k], theta0_prime[k + 1], s, drho);
}

double ProfileTable::theta0_prime_at(double r) const {
  if (std::abs(r) >= L) return 0.0;
  const double u = (r + L) / drho;
  auto k = static_cast<std::size_t>(u);
  if (k >= size() - 1) k = size() - 2;
  const double s = u - static_cast<double>(k);
  // theta0'' = f'(theta0) along the profile
  return hermite(theta0_prime[k], theta0_prime[k + 1], potential.df(theta0[k]), potential.df(theta0[k + 1]), s, drho);
}

double ProfileTable::theta1_at(double r) const {
  if (std::abs(r) >= L) return theta1_far();
  const double u = (r + L) / drho;
  auto k = static_cast<std::size_t>(u);
  if (k >= size() - 1) k = size() - 2;
  const double s = u - static_cast<double>(k);
  return hermite(theta1[k], theta1[k + 1], theta1_prime[k], theta1_prime[k + 1], s, drho);
}

}  // namespace nsac
