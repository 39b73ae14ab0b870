#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "nsac/geometry.hpp"
#include "nsac/profiles.hpp"

namespace nsac {

/// A u = -u'' + V(r) u on the cell-centred grid r_i = -2 delta + (i + 1/2) hx
/// with homogeneous Neumann ends. Symmetric in the plain discrete inner product.
struct LinearizedOperator1D {
  double eps = 0.0;
  double delta = 0.0;
  double hx = 0.0;
  std::vector<double> r;
  std::vector<double> potential;  ///< f''(c_A(r)) / eps^2

  std::size_t size() const noexcept { return r.size(); }
  std::vector<double> apply(std::span<const double> u) const;
  /// sum u_i v_i hx
  double inner(std::span<const double> u, std::span<const double> v) const;
};

/// Cross-section of c_A across a flat interface: zeta(r) [theta0 + eps lambda0 theta1](r/eps)
/// + (1 - zeta(r)) [+-1 + eps lambda0 / f''(+-1)] (order-1 terms dropped at order 0).
/// hx is rounded down so that 4 delta / hx is an integer. Throws ResolutionTooCoarse if hx > eps/4.
LinearizedOperator1D assemble_linearized_1d(const ProfileTable& table, double eps, double hx, int order,
                                            double lambda0, double delta = 0.5);

struct Eigenpair {
  double value = 0.0;
  std::vector<double> vector;  ///< unit discrete L2 norm
  std::size_t iterations = 0;
};

/// Shifted inverse iteration (shift below the Gershgorin bound) with a
/// relative eigenvalue tolerance. Throws NoConvergence.
Eigenpair smallest_eigenpair(const LinearizedOperator1D& op, double rel_tol = 1e-8, std::size_t max_iter = 2000);

/// |<u, theta0'(r/eps)>| with both normalised in discrete L2.
double overlap_with_theta0_prime(const LinearizedOperator1D& op, const ProfileTable& table,
                                 std::span<const double> u);

struct SpectralRow {
  double eps = 0.0;
  double min_eig = 0.0;
  double overlap = 0.0;
  double hx = 0.0;
};

/// Grid spacing used by the sweep: hx = min(eps/4, eps^2 / 8) keeps the
/// O(hx^2/eps^4) discretisation error of the eigenvalue bounded in eps.
double sweep_spacing(double eps);

std::vector<SpectralRow> spectral_sweep(const ProfileTable& table, std::span<const double> eps_values, int order,
                                        double lambda0, double delta = 0.5);

/// Tube quadrature: Gauss-Legendre in r on [-extent, extent], the curve samples in s.
struct TubeQuadrature {
  std::vector<double> s;          ///< N parameters s_i = i/N
  std::vector<double> r, w;       ///< nr nodes and weights
  Eigen::MatrixXd jacobian;       ///< N x nr, 1 - r kappa(s)
  std::vector<double> speed_ds;   ///< |X'(s_i)| / N
  double delta = 0.0;
  double extent = 0.0;
};

/// Throws OutsideTube if extent > 2 delta, TubeTooWide if the Jacobian degenerates.
TubeQuadrature make_tube_quadrature(const Curve& curve, double delta, std::size_t nr = 48,
                                    double extent = -1.0);

struct ModeDecomposition {
  std::vector<double> Z;     ///< mode amplitude per cross-section
  Eigen::MatrixXd mode;      ///< eps^{-1/2} Z(s) beta theta0'(rho)
  Eigen::MatrixXd psi_R;     ///< psi - mode
};

/// Orthogonal projection of psi (N x nr samples on the quadrature) onto
/// eps^{-1/2} beta theta0'(r/eps - h(s)) per cross-section in the Jacobian-weighted
/// inner product, beta = (int theta0'^2)^{-1/2}. h may be empty (h = 0).
ModeDecomposition tube_mode_decompose(const Eigen::MatrixXd& psi, const TubeQuadrature& quad, double eps,
                                      const ProfileTable& table, std::span<const double> h = {});

/// int psi^2 J dr ds over the tube.
double tube_norm2(const Eigen::MatrixXd& psi, const TubeQuadrature& quad);

}  // namespace nsac
