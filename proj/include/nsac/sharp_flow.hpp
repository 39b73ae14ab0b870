#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "nsac/geometry.hpp"

namespace nsac {

/// Prescribed (divergence-free) velocity v(x, t).
using VelocityField = std::function<Vec2(const Vec2&, double)>;

/// Front-tracking state: one or more closed curves sharing a single mean curvature.
struct SharpState {
  std::vector<Curve> curves;
  double t = 0.0;
  std::optional<VelocityField> velocity;
  double enclosed_area = 0.0;  ///< sum of |shoelace| areas, refreshed by each step

  static SharpState from_curves(std::vector<Curve> curves, std::optional<VelocityField> velocity = std::nullopt);
  double total_length() const;
  double total_area() const;
};

struct SharpStepOptions {
  bool plain_mcf = false;        ///< V = n.v + kappa (no area constraint)
  double stability_factor = 0.4;  ///< dt <= factor * min (L/N)^2
};

/// Mean curvature H_bar over all samples, weighted by the discrete area derivative
/// of each sample so that the semi-discrete spline area is exactly conserved.
double mean_curvature(const std::vector<Curve>& curves);

/// Largest stable step for the explicit curvature flow.
double max_stable_dt(const SharpState& state, const SharpStepOptions& options = {});

/// One RK4 step of V = n.v + kappa - H_bar (samples move by V n), followed by
/// equal-arclength resampling. Throws StepTooLarge, DegenerateCurve.
SharpState vpmcf_step(const SharpState& state, double dt, const SharpStepOptions& options = {});

/// Radii at t_end of disjoint circles under volume-preserving MCF with v = 0:
/// dR_i/dt = -1/R_i + k / sum_j R_j. Throws CircleVanished, BadConfig.
std::vector<double> circle_oracle(const std::vector<double>& radii, double t_end);

/// Coefficients of the h-equation on the uniform T^1 grid s_i = i/N.
struct HCoefficients {
  std::vector<double> g0;      ///< g0 pulled back to T^1
  std::vector<double> V;       ///< normal velocity
  std::vector<double> kappa;   ///< curvature
  std::vector<double> v_tan;   ///< tangential velocity v.tau (physical units)
  std::vector<double> drift;   ///< tangential drift of the parametrisation in s per unit time
  double length = 1.0;         ///< |Gamma_t|; dX/ds has norm length on an equal-arclength grid

  static HCoefficients zeros(std::size_t n, double length = 1.0);
};

struct HFieldState {
  std::vector<double> h;
  double lambda = 0.0;
  double t = 0.0;
  HCoefficients coefficients;
  double constraint_residual = 0.0;  ///< |int (V kappa h - D_t h) ds| of the last step
};

using HCoefficientProvider = std::function<HCoefficients(double t)>;
/// Normal forcing n.u at (s, t).
using HForcing = std::function<double(double s, double t)>;

struct HSolveOptions {
  double dt = 1e-4;
  std::size_t record_every = 1;  ///< keep every k-th state (the final state is always kept)
  double sigma = 2.0 / 3.0;
};

/// Semi-implicit time stepping of
///   D_t h + v.grad_Gamma h - Laplace_Gamma h + g0 h = -n.u + (2/sigma) lambda,
/// with the diffusion implicit and lambda chosen explicitly at each step so that
/// int (V kappa h - D_t h) ds = 0 holds for the discrete update.
/// Throws CFLViolation, NonPeriodicInput, ShapeMismatch.
std::vector<HFieldState> h_equation_solve(const HFieldState& init, double t_end, const HForcing& forcing,
                                          const HCoefficientProvider& coefficients, const HSolveOptions& options);

}  // namespace nsac
