#include "nsac/grid.hpp"

#include <algorithm>
#include <cmath>

#include "nsac/errors.hpp"
#include "nsac/numerics.hpp"

namespace nsac {

void GridSpec::validate() const {
  if (nx < 4 || ny < 4) throw Error(ErrorCode::BadConfig, "grid needs at least 4 cells per direction");
  if (!(lx > 0.0) || !(ly > 0.0)) throw Error(ErrorCode::BadConfig, "domain lengths must be positive");
  const double hx = lx / static_cast<double>(nx), hy = ly / static_cast<double>(ny);
  if (std::abs(hx - hy) > 1e-12 * hx) throw Error(ErrorCode::BadConfig, "cells must be square (lx/nx == ly/ny)");
}

bool GridSpec::same_as(const GridSpec& o) const noexcept {
  return nx == o.nx && ny == o.ny && lx == o.lx && ly == o.ly && bc == o.bc;
}

double MacVelocity::max_abs() const {
  double m = 0.0;
  for (double x : u.values()) m = std::max(m, std::abs(x));
  for (double x : v.values()) m = std::max(m, std::abs(x));
  return m;
}

double integrate(const GridSpec& g, const ScalarField2D& f) { return pairwise_sum(f.values()) * g.cell_area(); }

double mean(const GridSpec& g, const ScalarField2D& f) {
  return pairwise_sum(f.values()) / static_cast<double>(g.cells());
}

ScalarField2D laplacian(const GridSpec& g, const ScalarField2D& f) {
  const std::size_t nx = g.nx, ny = g.ny;
  const double ih2 = 1.0 / (g.h() * g.h());
  const bool per = g.periodic();
  ScalarField2D out(g);
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const double c = f(i, j);
      double acc = 0.0;
      if (i > 0) acc += f(i - 1, j) - c; else if (per) acc += f(nx - 1, j) - c;
      if (i + 1 < nx) acc += f(i + 1, j) - c; else if (per) acc += f(0, j) - c;
      if (j > 0) acc += f(i, j - 1) - c; else if (per) acc += f(i, ny - 1) - c;
      if (j + 1 < ny) acc += f(i, j + 1) - c; else if (per) acc += f(i, 0) - c;
      out(i, j) = acc * ih2;
    }
  }
  return out;
}

ScalarField2D divergence(const GridSpec& g, const MacVelocity& vel) {
  const std::size_t nx = g.nx, ny = g.ny;
  const double ih = 1.0 / g.h();
  const bool per = g.periodic();
  ScalarField2D out(g);
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const double ur = i + 1 < nx ? vel.u(i + 1, j) : (per ? vel.u(0, j) : 0.0);
      const double ul = (i == 0 && !per) ? 0.0 : vel.u(i, j);
      const double vt = j + 1 < ny ? vel.v(i, j + 1) : (per ? vel.v(i, 0) : 0.0);
      const double vb = (j == 0 && !per) ? 0.0 : vel.v(i, j);
      out(i, j) = (ur - ul + vt - vb) * ih;
    }
  }
  return out;
}

void subtract_gradient(const GridSpec& g, const ScalarField2D& phi, double scale, MacVelocity& vel) {
  const std::size_t nx = g.nx, ny = g.ny;
  const double s = scale / g.h();
  const bool per = g.periodic();
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      if (i > 0) vel.u(i, j) -= s * (phi(i, j) - phi(i - 1, j));
      else if (per) vel.u(i, j) -= s * (phi(0, j) - phi(nx - 1, j));
      else vel.u(i, j) = 0.0;
      if (j > 0) vel.v(i, j) -= s * (phi(i, j) - phi(i, j - 1));
      else if (per) vel.v(i, j) -= s * (phi(i, 0) - phi(i, ny - 1));
      else vel.v(i, j) = 0.0;
    }
  }
}

Vec2 cell_velocity(const GridSpec& g, const MacVelocity& vel, std::size_t i, std::size_t j) {
  const bool per = g.periodic();
  const double ur = i + 1 < g.nx ? vel.u(i + 1, j) : (per ? vel.u(0, j) : 0.0);
  const double vt = j + 1 < g.ny ? vel.v(i, j + 1) : (per ? vel.v(i, 0) : 0.0);
  return {0.5 * (vel.u(i, j) + ur), 0.5 * (vel.v(i, j) + vt)};
}

double kinetic_energy(const GridSpec& g, const MacVelocity& vel) {
  std::vector<double> t(vel.u.size());
  for (std::size_t k = 0; k < t.size(); ++k) t[k] = 0.5 * (vel.u[k] * vel.u[k] + vel.v[k] * vel.v[k]);
  return pairwise_sum(t) * g.cell_area();
}

double gradient_energy(const GridSpec& g, const ScalarField2D& c, double eps) {
  const std::size_t nx = g.nx, ny = g.ny;
  const bool per = g.periodic();
  std::vector<double> t(nx * ny, 0.0);
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      double acc = 0.0;
      if (i > 0) acc += std::pow(c(i, j) - c(i - 1, j), 2);
      else if (per) acc += std::pow(c(0, j) - c(nx - 1, j), 2);
      if (j > 0) acc += std::pow(c(i, j) - c(i, j - 1), 2);
      else if (per) acc += std::pow(c(i, 0) - c(i, ny - 1), 2);
      t[j * nx + i] = acc;
    }
  }
  // h^2 * (eps/2) * (dc/h)^2 = (eps/2) dc^2
  return 0.5 * eps * pairwise_sum(t);
}

MacVelocity sample_velocity(const GridSpec& g, const std::function<Vec2(const Vec2&)>& field) {
  MacVelocity vel(g);
  const double h = g.h();
  const bool per = g.periodic();
  for (std::size_t j = 0; j < g.ny; ++j) {
    for (std::size_t i = 0; i < g.nx; ++i) {
      const double x = static_cast<double>(i) * h, y = static_cast<double>(j) * h;
      vel.u(i, j) = (i == 0 && !per) ? 0.0 : field(Vec2(x, y + 0.5 * h)).x();
      vel.v(i, j) = (j == 0 && !per) ? 0.0 : field(Vec2(x + 0.5 * h, y)).y();
    }
  }
  return vel;
}

}  // namespace nsac
