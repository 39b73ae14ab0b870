#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nsac/potential.hpp"

namespace nsac {

/// Transversal layer structure sampled on a uniform grid rho_i = -L + i*drho.
///
/// theta0 is the optimal (heteroclinic) profile, theta1 the bounded even
/// solution of  -theta1'' + f''(theta0) theta1 = 1 - (2/sigma) theta0'
/// pinned by theta1(0) = 0, and c1 = lambda0 * theta1 the first inner
/// coefficient for a given lambda0.
struct ProfileTable {
  Potential potential;
  double L = 0.0;
  double drho = 0.0;
  double alpha = 0.0;  ///< min sqrt(f''(+-1))
  double sigma = 0.0;

  std::vector<double> rho;
  std::vector<double> theta0;
  std::vector<double> theta0_prime;
  std::vector<double> theta1;        ///< empty until solve_theta1
  std::vector<double> theta1_prime;  ///< 4th-order finite differences of theta1
  std::vector<double> c1;            ///< empty until solve_c1
  double lambda0 = 0.0;              ///< lambda0 used for c1

  double theta0_residual = 0.0;  ///< max |-theta0'' + f'(theta0)|, 6th-order stencil
  double theta1_residual = 0.0;  ///< max residual of the theta1 ODE, 4th-order stencil
  double c1_residual = 0.0;

  std::size_t size() const noexcept { return rho.size(); }
  std::size_t center() const noexcept { return rho.size() / 2; }
  bool has_theta1() const noexcept { return !theta1.empty(); }

  /// Cubic Hermite interpolation; constant far-field values beyond +-L.
  double theta0_at(double r) const;
  double theta0_prime_at(double r) const;
  double theta1_at(double r) const;
  /// Far-field value of theta1 on the side of sign(r): 1 / f''(+-1).
  double theta1_far() const;
};

/// theta0 on [-L, L]. The standard quartic uses tanh(rho/2); user polynomials
/// integrate the first integral theta0' = sqrt(2 f(theta0)) from theta0(0) = 0.
ProfileTable solve_theta0(const Potential& pot, double L = 20.0, double drho = 0.01);

/// Fills theta1 by a fourth-order finite-difference two-point BVP on [0, L]
/// with theta1(0) = 0, theta1(L) = 1/f''(1) and even reflection.
ProfileTable solve_theta1(const Potential& pot, ProfileTable table);

/// L v = -v'' + f''(theta0) v, central differences; one-sided at the ends.
std::vector<double> apply_linearized(const ProfileTable& table, std::span<const double> v);

/// int h theta0' drho (trapezoid rule).
double check_solvability(const ProfileTable& table, std::span<const double> h);

/// c1 = lambda0 * theta1, with the residual of its ODE recorded in c1_residual.
ProfileTable solve_c1(ProfileTable table, double lambda0);

/// solve_theta0 followed by solve_theta1.
ProfileTable build_profiles(const Potential& pot, double L = 20.0, double drho = 0.01);

/// Trapezoid rule on the uniform rho grid.
double trapezoid(std::span<const double> values, double spacing);

/// Maximum of |-v'' + f''(theta0) v - rhs| using a high-order stencil, over the
/// nodes whose full stencil lies inside the grid.
double linearized_residual_high_order(const ProfileTable& table, std::span<const double> v,
                                      std::span<const double> rhs);

}  // namespace nsac
