#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "nsac/geometry.hpp"
#include "nsac/grid.hpp"
#include "nsac/profiles.hpp"
#include "nsac/sharp_flow.hpp"

namespace nsac {

/// Normal velocity of a component at parameter s.
using NormalVelocity = std::function<double(std::size_t component, double s)>;
/// Height function h(s) per component, shifting rho = d/eps - h(s).
using HeightFunction = std::function<double(std::size_t component, double s)>;

/// Length-weighted mean of n.v over the interface (zero for divergence-free v).
double mean_normal_velocity(const Interface& gamma, const std::optional<VelocityField>& v, double t = 0.0);

/// lambda0 = (sigma/2) (H_bar - mean(n.v)), from the order-eps solvability condition.
double compute_lambda0(const Interface& gamma, const std::optional<VelocityField>& v, double sigma, double t = 0.0);

struct G0Options {
  double band = 0.0;               ///< |d| below which the bracket is shifted by its on-Gamma value
  std::optional<VelocityField> v;  ///< advecting velocity (zero when empty)
  NormalVelocity V;                ///< interface velocity; defaults to n.v + kappa - H_bar
  double t = 0.0;
};

/// g0 = -(1/d)(d_t d + v.grad d - Delta d - (2/sigma) lambda0) at the given points.
/// Near Gamma the on-Gamma bracket is subtracted (it vanishes analytically) and
/// at d = 0 the normal derivative of the bracket is used. Throws
/// BracketNotVanishing if the on-Gamma bracket exceeds 1e-4.
std::vector<double> compute_g0(const Interface& gamma, double lambda0, double sigma, std::span<const Vec2> points,
                               const G0Options& options);

/// g0 on Gamma (the d -> 0 limit) at the samples of each component.
std::vector<std::vector<double>> g0_on_gamma(const Interface& gamma, double lambda0, double sigma,
                                             const G0Options& options);

struct ApproxOptions {
  int order = 0;                  ///< 0 or 1
  std::optional<double> lambda0;  ///< defaults to compute_lambda0 with v = 0
  HeightFunction h;               ///< empty means h = 0
  std::optional<double> delta;    ///< tube half-width; defaults to Interface::tube_half_width
};

/// Which terms of the expansion were included.
struct ApproxComponents {
  bool theta0 = true;
  bool theta1 = false;
  bool height_shift = false;
};

struct ApproxSolution {
  GridSpec grid;
  double eps = 0.0;
  int order = 0;
  double lambda0 = 0.0;
  double delta = 0.0;
  ScalarField2D c_A;
  ScalarField2D distance;  ///< signed distance to Gamma (> 0 in the + phase)
  ScalarField2D normal_x, normal_y;
  std::vector<std::vector<double>> g0_on_gamma;
  std::vector<std::vector<double>> h_used;
  ApproxComponents components;
};

/// c_A = zeta(d) [theta0(rho) + eps lambda0 theta1(rho)] + (1 - zeta(d)) [+-1 + eps lambda0 / f''(+-1)]
/// (order-1 terms dropped at order 0). Throws ResolutionTooCoarse if h > eps/2 and
/// TubeTooNarrow if eps > delta/5.
ApproxSolution build_approx_solution(const GridSpec& grid, const Interface& gamma, double eps,
                                     const ProfileTable& table, const ApproxOptions& options = {});

/// Snapshots of c_A at t - dt_fd and t + dt_fd.
struct TimeDerivativeData {
  ScalarField2D before;
  ScalarField2D after;
  double dt_fd = 1e-4;

  /// Gamma does not move: both snapshots equal the current field.
  static TimeDerivativeData stationary(const ApproxSolution& a, double dt_fd = 1e-4);
};

struct ResidualNorms {
  double l2_omega = 0.0;
  double l1_tube = 0.0;     ///< over Gamma(2 delta)
  double l2_outside = 0.0;  ///< over Omega \ Gamma(2 delta)
  double linf = 0.0;
};

/// S = d_t c_A + v.grad c_A - Delta c_A + f'(c_A)/eps^2 - (lambda0 + eps lambda1)/eps.
/// Throws MissingMotion without time-derivative data.
ResidualNorms residual_norms(const ApproxSolution& approx, const Potential& potential,
                             const std::optional<TimeDerivativeData>& motion,
                             const std::optional<VelocityField>& v = std::nullopt, double t = 0.0,
                             double lambda1 = 0.0);

/// Coefficients of the h-equation for one component at time t: g0 on Gamma,
/// V = n.v + kappa - H_bar, kappa, v.tau and zero drift.
HCoefficients h_coefficients(const Interface& gamma, std::size_t component, double lambda0, double sigma,
                             const std::optional<VelocityField>& v = std::nullopt, double t = 0.0);

}  // namespace nsac
