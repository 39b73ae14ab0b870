#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace nsac {

/// Deterministic pairwise (tree) summation; the result depends only on the
/// input order, never on threading.
double pairwise_sum(std::span<const double> values);

/// Gauss-Legendre nodes and weights on [a, b].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(std::size_t n, double a, double b);

/// Solves the periodic tridiagonal system
///   lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i]   (indices mod n)
/// by the Sherman-Morrison reduction to two Thomas sweeps.
std::vector<double> solve_cyclic_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                                             std::span<const double> upper, std::span<const double> rhs);

/// Thomas algorithm for a non-periodic tridiagonal system (lower[0], upper[n-1] unused).
std::vector<double> solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                                      std::span<const double> upper, std::span<const double> rhs);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double slope_stderr = 0.0;
};

/// Ordinary least squares y = slope * x + intercept.
LinearFit least_squares(std::span<const double> x, std::span<const double> y);

}  // namespace nsac
