#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "nsac/asymptotics.hpp"
#include "nsac/geometry.hpp"
#include "nsac/grid.hpp"
#include "nsac/potential.hpp"
#include "nsac/profiles.hpp"
#include "nsac/sharp_flow.hpp"
#include "nsac/spectral_solver.hpp"

namespace nsac {

struct DiffuseState {
  GridSpec grid;
  ScalarField2D c;
  MacVelocity v;
  ScalarField2D p;
  double t = 0.0;
  double eps = 0.0;
};

struct Diagnostics {
  double t = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  double lambda_eps = 0.0;
  double dissipation = 0.0;
  double max_div = 0.0;    ///< max |div_h v| after the projection
  double max_abs_c = 0.0;
  std::optional<ScalarField2D> mu_field;
};

enum class VelocityMode {
  Zero,          ///< pure mass-conserving Allen-Cahn
  Prescribed,    ///< v(x, t) sampled on the faces and projected each step
  NavierStokes,  ///< coupled momentum equation with capillary forcing
};

struct DiffuseParams {
  Potential potential = Potential::standard_quartic();
  VelocityMode mode = VelocityMode::Zero;
  std::optional<VelocityField> prescribed;
  double nu_plus = 1.0;
  double nu_minus = 1.0;
  std::optional<double> s_stab;  ///< defaults to max |f''| on [-1, 1]
  double c_adv = 0.5;
  double c_diff = 0.2;
  double c_ac = 1.0;
  bool keep_mu = false;
};

/// nu(c) = nu_minus + (nu_plus - nu_minus) clamp((c + 1)/2, 0, 1).
double viscosity(double c, double nu_plus, double nu_minus) noexcept;

/// lambda_eps = mean(f'(c)) / eps (pairwise cell average).
double lambda_eps(const DiffuseState& state, const Potential& potential);

/// Time stepper on a fixed grid. Each step solves
///   (1/dt + S/eps^2 - Delta_h) c^{n+1} = c^n/dt + S c^n/eps^2 - div_h(v c^n)
///                                        - (f'(c^n) - mean f'(c^n))/eps^2,
/// so the cell sum of c is conserved to roundoff, then (NavierStokes mode)
/// advances the momentum equation explicitly and projects it.
class DiffuseSolver {
 public:
  DiffuseSolver(const GridSpec& grid, DiffuseParams params);

  const GridSpec& grid() const noexcept { return grid_; }
  const DiffuseParams& params() const noexcept { return params_; }
  double s_stab() const noexcept { return s_stab_; }

  /// min(C_adv h/|v|_max, C_diff h^2 min(1, 1/nu_max), C_ac eps^2/S).
  double max_dt(const DiffuseState& state) const;

  /// Throws CFLViolation, GridMismatch.
  std::pair<DiffuseState, Diagnostics> step(const DiffuseState& state, double dt);

  Diagnostics diagnostics(const DiffuseState& state) const;

  /// Discrete Helmholtz projection; writes phi into pressure_potential if given.
  /// Throws ProjectionDiverged if the divergence after projection exceeds 1e-10 (scaled).
  MacVelocity project(const MacVelocity& vel, ScalarField2D* pressure_potential = nullptr);

 private:
  MacVelocity momentum_rhs(const DiffuseState& state) const;

  GridSpec grid_;
  DiffuseParams params_;
  double s_stab_ = 1.0;
  SpectralSolver solver_;
};

/// c_A of the given order on the grid, v sampled from velocity (or zero) and
/// projected, p = 0. Throws ResolutionTooCoarse, TubeTooNarrow.
DiffuseState init_well_prepared(const GridSpec& grid, const Interface& gamma, double eps, const ProfileTable& table,
                                int order = 0, std::optional<double> lambda0 = std::nullopt,
                                const std::optional<VelocityField>& velocity = std::nullopt);

struct ZeroLevelComponent {
  std::vector<Vec2> points;  ///< + phase on the left of the direction of travel
  bool closed = false;       ///< contractible closed loop
  bool wraps = false;        ///< closed only through the periodic boundary
  std::optional<Curve> curve;  ///< equal-arclength curve for closed loops
};

/// Marching squares on the cell centres with linear interpolation (saddles
/// resolved by the cell-average value). Periodic grids join across the
/// boundary. Throws NoInterface when c has no sign change.
std::vector<ZeroLevelComponent> extract_zero_level(const DiffuseState& state, std::size_t samples = 0);

}  // namespace nsac
