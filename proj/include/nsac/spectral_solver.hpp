#pragma once

#include <memory>

#include "nsac/grid.hpp"

namespace nsac {

/// Direct solver for (alpha - Delta_h) x = b with the five-point Laplacian:
/// real FFT for periodic grids, DCT-II/III for homogeneous Neumann walls.
/// The discrete operator is diagonalised exactly, so the only error is roundoff.
class SpectralSolver {
 public:
  explicit SpectralSolver(const GridSpec& grid);
  ~SpectralSolver();
  SpectralSolver(SpectralSolver&&) noexcept;
  SpectralSolver& operator=(SpectralSolver&&) noexcept;
  SpectralSolver(const SpectralSolver&) = delete;
  SpectralSolver& operator=(const SpectralSolver&) = delete;

  const GridSpec& grid() const noexcept;

  /// alpha > 0: Helmholtz solve. alpha == 0: Poisson solve; the mean of b is
  /// discarded and the returned solution has zero mean.
  ScalarField2D solve(double alpha, const ScalarField2D& rhs);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace nsac
