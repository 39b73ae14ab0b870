#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "nsac/geometry.hpp"

namespace nsac {

enum class BoundaryCondition { Periodic, WallNeumannNoSlip };

/// Uniform cell-centred grid on [0, lx] x [0, ly] with square cells.
struct GridSpec {
  std::size_t nx = 0;
  std::size_t ny = 0;
  double lx = 1.0;
  double ly = 1.0;
  BoundaryCondition bc = BoundaryCondition::Periodic;

  double h() const noexcept { return lx / static_cast<double>(nx); }
  std::size_t cells() const noexcept { return nx * ny; }
  double cell_area() const noexcept { return h() * h(); }
  Vec2 center(std::size_t i, std::size_t j) const noexcept {
    return {(static_cast<double>(i) + 0.5) * h(), (static_cast<double>(j) + 0.5) * h()};
  }
  bool periodic() const noexcept { return bc == BoundaryCondition::Periodic; }
  /// Throws BadConfig for empty grids, non-positive lengths or non-square cells.
  void validate() const;
  bool same_as(const GridSpec& o) const noexcept;
};

/// Row-major (x fastest) array of nx * ny doubles.
class ScalarField2D {
 public:
  ScalarField2D() = default;
  ScalarField2D(std::size_t nx, std::size_t ny, double value = 0.0) : nx_(nx), ny_(ny), data_(nx * ny, value) {}
  explicit ScalarField2D(const GridSpec& g, double value = 0.0) : ScalarField2D(g.nx, g.ny, value) {}

  std::size_t nx() const noexcept { return nx_; }
  std::size_t ny() const noexcept { return ny_; }
  std::size_t size() const noexcept { return data_.size(); }
  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[j * nx_ + i]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[j * nx_ + i]; }
  double& operator[](std::size_t k) noexcept { return data_[k]; }
  double operator[](std::size_t k) const noexcept { return data_[k]; }
  std::vector<double>& values() noexcept { return data_; }
  const std::vector<double>& values() const noexcept { return data_; }
  void fill(double v) { std::fill(data_.begin(), data_.end(), v); }
  bool matches(const GridSpec& g) const noexcept { return nx_ == g.nx && ny_ == g.ny; }

 private:
  std::size_t nx_ = 0, ny_ = 0;
  std::vector<double> data_;
};

/// Staggered velocity: u(i, j) lives on the face x = i h, y = (j + 1/2) h and
/// v(i, j) on the face x = (i + 1/2) h, y = j h. With walls, u(0, j) and v(i, 0)
/// are the (zero) boundary faces and the opposite walls are implicit zeros.
struct MacVelocity {
  ScalarField2D u;
  ScalarField2D v;

  MacVelocity() = default;
  explicit MacVelocity(const GridSpec& g) : u(g), v(g) {}
  double max_abs() const;
};

// Discrete operators (periodic wrap or homogeneous Neumann / no-penetration walls).

/// Sum over cells (pairwise) times the cell area.
double integrate(const GridSpec& g, const ScalarField2D& f);
/// Cell average.
double mean(const GridSpec& g, const ScalarField2D& f);
/// Five-point Laplacian with periodic or homogeneous Neumann closure.
ScalarField2D laplacian(const GridSpec& g, const ScalarField2D& f);
/// Cell-centred divergence of a MAC field.
ScalarField2D divergence(const GridSpec& g, const MacVelocity& vel);
/// Subtracts dt * grad(phi) on faces (wall faces stay zero).
void subtract_gradient(const GridSpec& g, const ScalarField2D& phi, double scale, MacVelocity& vel);
/// Cell-centred velocity by averaging the two adjacent faces.
Vec2 cell_velocity(const GridSpec& g, const MacVelocity& vel, std::size_t i, std::size_t j);
/// Sum over faces of h^2 (u^2 + v^2) / 2 (kinetic energy on the MAC grid).
double kinetic_energy(const GridSpec& g, const MacVelocity& vel);
/// Sum of h^2 (eps/2 |grad_h c|^2) over interior faces.
double gradient_energy(const GridSpec& g, const ScalarField2D& c, double eps);
/// Samples a velocity field on the faces (wall faces set to zero).
MacVelocity sample_velocity(const GridSpec& g, const std::function<Vec2(const Vec2&)>& field);

}  // namespace nsac
