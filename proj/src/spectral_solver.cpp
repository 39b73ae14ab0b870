#include "nsac/spectral_solver.hpp"

#include <cmath>
#include <numbers>

#include <fftw3.h>

#include "nsac/errors.hpp"

namespace nsac {

struct SpectralSolver::Impl {
  GridSpec grid;
  std::vector<double> eig_x, eig_y;  // 1D eigenvalues of -D2
  double* real = nullptr;
  fftw_complex* spec = nullptr;
  double* coef = nullptr;
  fftw_plan forward = nullptr, backward = nullptr;

  explicit Impl(const GridSpec& g) : grid(g) {
    g.validate();
    const std::size_t nx = g.nx, ny = g.ny;
    const double ih2 = 1.0 / (g.h() * g.h());
    const double pi = std::numbers::pi;
    const int inx = static_cast<int>(nx), iny = static_cast<int>(ny);
    real = fftw_alloc_real(nx * ny);
    if (g.periodic()) {
      const std::size_t nxc = nx / 2 + 1;
      eig_x.resize(nxc);
      for (std::size_t k = 0; k < nxc; ++k) eig_x[k] = (2.0 - 2.0 * std::cos(2.0 * pi * k / nx)) * ih2;
      eig_y.resize(ny);
      for (std::size_t k = 0; k < ny; ++k) eig_y[k] = (2.0 - 2.0 * std::cos(2.0 * pi * k / ny)) * ih2;
      spec = fftw_alloc_complex(nxc * ny);
      forward = fftw_plan_dft_r2c_2d(iny, inx, real, spec, FFTW_ESTIMATE);
      backward = fftw_plan_dft_c2r_2d(iny, inx, spec, real, FFTW_ESTIMATE);
    } else {
      eig_x.resize(nx);
      for (std::size_t k = 0; k < nx; ++k) eig_x[k] = (2.0 - 2.0 * std::cos(pi * k / nx)) * ih2;
      eig_y.resize(ny);
      for (std::size_t k = 0; k < ny; ++k) eig_y[k] = (2.0 - 2.0 * std::cos(pi * k / ny)) * ih2;
      coef = fftw_alloc_real(nx * ny);
      forward = fftw_plan_r2r_2d(iny, inx, real, coef, FFTW_REDFT10, FFTW_REDFT10, FFTW_ESTIMATE);
      backward = fftw_plan_r2r_2d(iny, inx, coef, real, FFTW_REDFT01, FFTW_REDFT01, FFTW_ESTIMATE);
    }
    if (!forward || !backward) throw Error(ErrorCode::SingularSystem, "FFTW plan creation failed");
  }

  ~Impl() {
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
    if (real) fftw_free(real);
    if (spec) fftw_free(spec);
    if (coef) fftw_free(coef);
  }

  ScalarField2D solve(double alpha, const ScalarField2D& rhs) {
    if (!rhs.matches(grid)) throw Error(ErrorCode::GridMismatch, "right-hand side does not match the solver grid");
    if (alpha < 0.0) throw Error(ErrorCode::BadConfig, "Helmholtz shift must be non-negative");
    const std::size_t nx = grid.nx, ny = grid.ny;
    std::copy(rhs.values().begin(), rhs.values().end(), real);
    fftw_execute(forward);
    const double norm = grid.periodic() ? 1.0 / static_cast<double>(nx * ny) : 1.0 / static_cast<double>(4 * nx * ny);
    if (grid.periodic()) {
      const std::size_t nxc = nx / 2 + 1;
      for (std::size_t ky = 0; ky < ny; ++ky) {
        for (std::size_t kx = 0; kx < nxc; ++kx) {
          const double lam = alpha + eig_x[kx] + eig_y[ky];
          const double scale = lam > 0.0 ? norm / lam : 0.0;
          spec[ky * nxc + kx][0] *= scale;
          spec[ky * nxc + kx][1] *= scale;
        }
      }
    } else {
      for (std::size_t ky = 0; ky < ny; ++ky) {
        for (std::size_t kx = 0; kx < nx; ++kx) {
          const double lam = alpha + eig_x[kx] + eig_y[ky];
          coef[ky * nx + kx] *= lam > 0.0 ? norm / lam : 0.0;
        }
      }
    }
    fftw_execute(backward);
    ScalarField2D out(grid);
    std::copy(real, real + nx * ny, out.values().begin());
    return out;
  }
};

SpectralSolver::SpectralSolver(const GridSpec& grid) : impl_(std::make_unique<Impl>(grid)) {}
SpectralSolver::~SpectralSolver() = default;
SpectralSolver::SpectralSolver(SpectralSolver&&) noexcept = default;
SpectralSolver& SpectralSolver::operator=(SpectralSolver&&) noexcept = default;

const GridSpec& SpectralSolver::grid() const noexcept { return impl_->grid; }

ScalarField2D SpectralSolver::solve(double alpha, const ScalarField2D& rhs) { return impl_->solve(alpha, rhs); }

}  // namespace nsac
