#include "nsac/spectral_check.hpp"

#include <algorithm>
#include <cmath>

#include "nsac/errors.hpp"
#include "nsac/numerics.hpp"

namespace nsac {

std::vector<double> LinearizedOperator1D::apply(std::span<const double> u) const {
  const std::size_t n = size();
  if (u.size() != n) throw Error(ErrorCode::ShapeMismatch, "vector length does not match the operator");
  const double ih2 = 1.0 / (hx * hx);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double lap = 0.0;
    if (i > 0) lap += u[i] - u[i - 1];
    if (i + 1 < n) lap += u[i] - u[i + 1];
    out[i] = lap * ih2 + potential[i] * u[i];
  }
  return out;
}

double LinearizedOperator1D::inner(std::span<const double> u, std::span<const double> v) const {
  std::vector<double> t(u.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = u[i] * v[i];
  return pairwise_sum(t) * hx;
}

LinearizedOperator1D assemble_linearized_1d(const ProfileTable& table, double eps, double hx, int order,
                                            double lambda0, double delta) {
  if (!(eps > 0.0) || !(hx > 0.0) || !(delta > 0.0)) throw Error(ErrorCode::BadConfig, "eps, hx, delta must be positive");
  if (order != 0 && order != 1) throw Error(ErrorCode::BadConfig, "order must be 0 or 1");
  if (hx > 0.25 * eps * (1.0 + 1e-12)) throw Error(ErrorCode::ResolutionTooCoarse, "hx exceeds eps/4");
  if (order == 1 && !table.has_theta1()) throw Error(ErrorCode::ShapeMismatch, "order 1 needs theta1");
  const auto n = static_cast<std::size_t>(std::ceil(4.0 * delta / hx - 1e-9));
  LinearizedOperator1D op;
  op.eps = eps;
  op.delta = delta;
  op.hx = 4.0 * delta / static_cast<double>(n);
  op.r.resize(n);
  op.potential.resize(n);
  const auto& pot = table.potential;
  const double corr = order == 1 ? eps * lambda0 : 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = -2.0 * delta + (static_cast<double>(i) + 0.5) * op.hx;
    const double z = cutoff_zeta(delta, r);
    const double bulk = r > 0.0 ? 1.0 + corr / pot.d2f(1.0) : -1.0 + corr / pot.d2f(-1.0);
    double c = bulk;
    if (z > 0.0) {
      double inner = table.theta0_at(r / eps);
      if (order == 1) inner += corr * table.theta1_at(r / eps);
      c = z * inner + (1.0 - z) * bulk;
    }
    op.r[i] = r;
    op.potential[i] = pot.d2f(c) / (eps * eps);
  }
  return op;
}

Eigenpair smallest_eigenpair(const LinearizedOperator1D& op, double rel_tol, std::size_t max_iter) {
  const std::size_t n = op.size();
  if (n < 3) throw Error(ErrorCode::ShapeMismatch, "operator too small");
  const double ih2 = 1.0 / (op.hx * op.hx);
  const double vmin = *std::min_element(op.potential.begin(), op.potential.end());
  const double vmax = *std::max_element(op.potential.begin(), op.potential.end());
  // Gershgorin: every eigenvalue is >= vmin, so A - shift is SPD.
  const double shift = vmin - std::max(1.0, 0.1 * (vmax - vmin));

  std::vector<double> lower(n, -ih2), upper(n, -ih2), diag(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double nb = (i > 0 ? 1.0 : 0.0) + (i + 1 < n ? 1.0 : 0.0);
    diag[i] = nb * ih2 + op.potential[i] - shift;
  }

  // Start from a smooth bump centred on the layer.
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = std::exp(-std::pow(op.r[i] / (2.0 * op.eps), 2)) + 1e-3;
  auto normalise = [&](std::vector<double>& x) {
    const double nrm = std::sqrt(op.inner(x, x));
    for (double& v : x) v /= nrm;
  };
  normalise(u);
  double lambda = op.inner(u, op.apply(u));
  for (std::size_t it = 1; it <= max_iter; ++it) {
    auto next = solve_tridiagonal(lower, diag, upper, u);
    normalise(next);
    u = std::move(next);
    const double prev = lambda;
    lambda = op.inner(u, op.apply(u));
    const double scale = std::max(std::abs(lambda), 1.0);
    if (std::abs(lambda - prev) <= rel_tol * scale) {
      // Fix the sign so the mode is positive at the layer.
      const std::size_t mid = n / 2;
      if (u[mid] < 0.0)
        for (double& v : u) v = -v;
      return {lambda, std::move(u), it};
    }
  }
  throw Error(ErrorCode::NoConvergence, "inverse iteration did not converge");
}

double overlap_with_theta0_prime(const LinearizedOperator1D& op, const ProfileTable& table,
                                 std::span<const double> u) {
  std::vector<double> w(op.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = table.theta0_prime_at(op.r[i] / op.eps);
  const double nw = std::sqrt(op.inner(w, w)), nu = std::sqrt(op.inner(u, u));
  return std::abs(op.inner(u, w)) / (nw * nu);
}

double sweep_spacing(double eps) { return std::min(0.25 * eps, eps * eps / 8.0); }

std::vector<SpectralRow> spectral_sweep(const ProfileTable& table, std::span<const double> eps_values, int order,
                                        double lambda0, double delta) {
  std::vector<SpectralRow> rows;
  for (double eps : eps_values) {
    const auto op = assemble_linearized_1d(table, eps, sweep_spacing(eps), order, lambda0, delta);
    const auto pair = smallest_eigenpair(op);
    rows.push_back({eps, pair.value, overlap_with_theta0_prime(op, table, pair.vector), op.hx});
  }
  return rows;
}

TubeQuadrature make_tube_quadrature(const Curve& curve, double delta, std::size_t nr, double extent) {
  if (extent < 0.0) extent = delta;
  if (extent > 2.0 * delta * (1.0 + 1e-12)) throw Error(ErrorCode::OutsideTube, "quadrature extends beyond Gamma(2 delta)");
  if (extent * curve.max_abs_curvature() >= 1.0)
    throw Error(ErrorCode::TubeTooWide, "tube half-width reaches the focal set (J <= 0)");
  TubeQuadrature q;
  q.delta = delta;
  q.extent = extent;
  std::tie(q.r, q.w) = gauss_legendre(nr, -extent, extent);
  const std::size_t n = curve.size();
  q.s.resize(n);
  q.speed_ds.resize(n);
  q.jacobian.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(nr));
  for (std::size_t i = 0; i < n; ++i) {
    q.s[i] = static_cast<double>(i) / static_cast<double>(n);
    q.speed_ds[i] = curve.speeds()[i] / static_cast<double>(n);
    for (std::size_t j = 0; j < nr; ++j)
      q.jacobian(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1.0 - q.r[j] * curve.curvatures()[i];
  }
  return q;
}

ModeDecomposition tube_mode_decompose(const Eigen::MatrixXd& psi, const TubeQuadrature& quad, double eps,
                                      const ProfileTable& table, std::span<const double> h) {
  const auto n = static_cast<Eigen::Index>(quad.s.size()), nr = static_cast<Eigen::Index>(quad.r.size());
  if (psi.rows() != n || psi.cols() != nr) throw Error(ErrorCode::ShapeMismatch, "psi does not match the quadrature");
  if (!h.empty() && h.size() != quad.s.size()) throw Error(ErrorCode::ShapeMismatch, "h does not match the quadrature");
  if (!(eps > 0.0)) throw Error(ErrorCode::BadConfig, "eps must be positive");
  std::vector<double> sq(table.theta0_prime.size());
  for (std::size_t k = 0; k < sq.size(); ++k) sq[k] = table.theta0_prime[k] * table.theta0_prime[k];
  const double beta = 1.0 / std::sqrt(trapezoid(sq, table.drho));
  const double amp = beta / std::sqrt(eps);

  ModeDecomposition out;
  out.Z.resize(static_cast<std::size_t>(n));
  out.mode.resize(n, nr);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double hs = h.empty() ? 0.0 : h[static_cast<std::size_t>(i)];
    double pm = 0.0, mm = 0.0;
    for (Eigen::Index j = 0; j < nr; ++j) {
      const double m = amp * table.theta0_prime_at(quad.r[static_cast<std::size_t>(j)] / eps - hs);
      out.mode(i, j) = m;
      const double wj = quad.w[static_cast<std::size_t>(j)] * quad.jacobian(i, j);
      pm += psi(i, j) * m * wj;
      mm += m * m * wj;
    }
    const double z = mm > 0.0 ? pm / mm : 0.0;
    out.Z[static_cast<std::size_t>(i)] = z;
    out.mode.row(i) *= z;
  }
  out.psi_R = psi - out.mode;
  return out;
}

double tube_norm2(const Eigen::MatrixXd& psi, const TubeQuadrature& quad) {
  std::vector<double> rows(quad.s.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < quad.r.size(); ++j) {
      const auto ii = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j);
      acc += psi(ii, jj) * psi(ii, jj) * quad.w[j] * quad.jacobian(ii, jj);
    }
    rows[i] = acc * quad.speed_ds[i];
  }
  return pairwise_sum(rows);
}

}  // namespace nsac
