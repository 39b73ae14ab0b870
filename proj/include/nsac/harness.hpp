#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nsac/asymptotics.hpp"
#include "nsac/diffuse_solver.hpp"

namespace nsac {

enum class Scenario { StationaryCircle, TwoCircles, FlatInterface, CoupledNSAC };

std::string to_string(Scenario s);
/// Throws BadConfig for unknown names.
Scenario scenario_from_string(const std::string& name);

struct ExperimentConfig {
  Scenario scenario = Scenario::StationaryCircle;
  std::vector<double> eps_list{0.02};
  double lx = 1.0, ly = 1.0;
  BoundaryCondition bc = BoundaryCondition::WallNeumannNoSlip;

  /// Cells along x. 0 selects the rule h = (eps / cells_per_eps) (eps / max eps)^grid_exponent.
  std::size_t grid = 0;
  double cells_per_eps = 4.0;
  double grid_exponent = 0.0;

  double t_end = 0.05;
  std::size_t steps = 0;   ///< when > 0, overrides t_end
  double dt = 0.0;         ///< fixed step; 0 selects dt = dt_factor * eps^2 (coupled runs: at most 0.9 of the initial stable step)
  double dt_factor = 0.25;

  Potential potential = Potential::standard_quartic();
  double nu_plus = 1.0, nu_minus = 1.0;
  int order = 1;
  std::optional<double> lambda0;

  std::vector<Vec2> centers{{0.5, 0.5}};
  std::vector<double> radii{0.25};
  double axis_a = 0.3, axis_b = 0.25;  ///< CoupledNSAC ellipse semi-axes
  std::size_t curve_samples = 256;
  std::filesystem::path initial_curve;  ///< curve file replacing the scenario geometry (no sharp reference then)

  std::size_t output_every = 100;  ///< diagnostics rows
  std::size_t sample_every = 100;  ///< error samples
  bool snapshots = true;
  std::filesystem::path out_dir = "out";

  /// Throws BadConfig / ResolutionTooCoarse when the rules cannot be honoured.
  void validate() const;
  /// Grid for one eps (square cells, hx <= eps/2).
  GridSpec grid_for(double eps) const;
  double dt_for(double eps) const;
  /// Stable textual form of every field; used to detect stale artifacts.
  std::string fingerprint() const;
};

/// Parses TOML-style "key = value" lines. Unknown keys raise BadConfig.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Closed curves from a CSV with columns component, x, y (one row per vertex,
/// components numbered from 0). Each curve is resampled to `samples` points
/// (0 keeps the vertex count). Throws BadConfig, DegenerateCurve.
std::vector<Curve> read_curve_file(const std::filesystem::path& path, std::size_t samples = 0);
void write_curve_file(const std::filesystem::path& path, const std::vector<Curve>& curves);

/// Sharp interface at t = 0: initial_curve when set, otherwise the scenario geometry.
Interface initial_interface(const ExperimentConfig& cfg);

struct SharpRunResult {
  SharpState final_state;
  std::size_t steps = 0;
  double initial_area = 0.0;
  double max_area_drift = 0.0;  ///< max |area - area0| / area0
};

/// Front tracking from the initial curves up to t_end. dt = cfg.dt when set,
/// otherwise the stable step of each state. Writes out_dir/sharp.csv
/// (t, length, area, H_bar) every step and out_dir/curves_<step>.csv every
/// output_every steps and at the end. Throws BadConfig for line interfaces.
SharpRunResult run_sharp(const ExperimentConfig& cfg);

struct AsymptoticsRow {
  double eps = 0.0;
  std::size_t nx = 0;
  double lambda0 = 0.0;
  ResidualNorms residual;
};

/// For each eps: c_A of the configured order on the interface at t = dt_fd,
/// with the time derivative from c_A at t = 0 and t = 2 dt_fd (curves advanced
/// by front tracking, lines stationary). Writes out_dir/asymptotics.csv
/// (eps, nx, order, lambda0, l2_omega, l1_tube, l2_outside, linf) and
/// out_dir/eps_<eps>/c_A.nsac.
std::vector<AsymptoticsRow> run_asymptotics(const ExperimentConfig& cfg, const ProfileTable& table,
                                            double dt_fd = 1e-4);

struct ErrorEntry {
  double l2_omega = 0.0;       ///< ||u||_{L2(Omega)}
  double l2_outside = 0.0;     ///< ||u||_{L2(Omega \ Gamma(delta))}
  double grad_tan_tube = 0.0;  ///< ||grad_tau u||_{L2(Gamma(delta))}
  double grad_normal_tube = 0.0;  ///< eps ||d_n u||_{L2(Gamma(delta))}
  double h1 = 0.0;             ///< ||grad u||_{L2(Omega)}
  double h2 = 0.0;             ///< ||Delta_h u||_{L2(Omega)}
};

/// u = c_eps - c_A with central-difference gradients split by the normal field of the approximation.
/// Throws GridMismatch.
ErrorEntry compute_error_norms(const ScalarField2D& c_eps, const ApproxSolution& approx);

/// Two-sided Hausdorff distance between the zero-level components and Gamma.
double hausdorff_distance(const std::vector<ZeroLevelComponent>& level, const Interface& gamma);

struct RateFit {
  double rate = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double rate_stderr = 0.0;
};

/// Least squares of log(error) on log(eps). Throws NonPositiveError, BadConfig (< 3 pairs).
RateFit fit_rate(std::span<const double> eps, std::span<const double> errors);

struct EpsRecord {
  double eps = 0.0;
  std::size_t nx = 0;
  double dt = 0.0;
  std::size_t steps = 0;
  ErrorEntry sup;               ///< sup over the sampled times
  double hausdorff_sup = 0.0;
  double hausdorff_final = 0.0;
  double lambda_plateau = 0.0;  ///< mean lambda_eps over the second half of the run
  double lambda0 = 0.0;
  double mass_drift = 0.0;      ///< max |mass - mass0| / |mass0|
  double energy_increase = 0.0; ///< max (E_{n+1} - E_n)
  double energy_excess = 0.0;   ///< max (E_n - E_0)
  double max_div = 0.0;
  double radius_rel_error = 0.0;  ///< TwoCircles: max relative radius error at t_end
};

struct ErrorReport {
  std::vector<EpsRecord> records;
  std::optional<RateFit> l2_rate;
  std::optional<RateFit> hausdorff_rate;
};

/// For each eps: builds the reference interface, c_A and the well-prepared initial
/// state, runs the diffuse solver, samples error norms and writes
/// out_dir/eps_<eps>/{diagnostics.csv, errors.csv, summary.csv, final.nsac} plus
/// out_dir/report.csv and out_dir/rates.csv. Entries whose summary.csv carries the
/// same fingerprint are reloaded instead of recomputed.
ErrorReport run_experiment(const ExperimentConfig& cfg, const ProfileTable& table);

std::vector<std::string> eps_record_header();
std::vector<double> eps_record_values(const EpsRecord& r);
EpsRecord eps_record_from_values(std::span<const double> v);

}  // namespace nsac
