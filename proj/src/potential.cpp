#include "nsac/potential.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "nsac/errors.hpp"

namespace nsac {

Potential Potential::standard_quartic() { return Potential{}; }

Potential Potential::user_polynomial(std::span<const double> coefficients) {
  if (coefficients.empty()) throw Error(ErrorCode::InvalidPotential, "empty coefficient list");
  // trailing zeros beyond degree 4 are tolerated
  for (std::size_t k = 5; k < coefficients.size(); ++k)
    if (coefficients[k] != 0.0) throw Error(ErrorCode::InvalidPotential, "polynomial degree must be <= 4");
  Potential p;
  p.kind_ = Kind::UserPolynomial;
  p.coeffs_.fill(0.0);
  for (std::size_t k = 0; k < std::min<std::size_t>(5, coefficients.size()); ++k) p.coeffs_[k] = coefficients[k];

  const double scale = std::max({std::abs(p.coeffs_[0]), std::abs(p.coeffs_[2]), std::abs(p.coeffs_[4]), 1e-300});
  const double tol = 1e-12 * scale;
  if (std::abs(p.coeffs_[1]) > tol || std::abs(p.coeffs_[3]) > tol)
    throw Error(ErrorCode::InvalidPotential, "potential must be even (odd coefficients nonzero)");
  const auto& a = p.coeffs_;
  if (std::abs(2.0 * a[2] + 4.0 * a[4]) > tol) throw Error(ErrorCode::InvalidPotential, "f'(+-1) must vanish");
  if (std::abs(a[0] + a[2] + a[4]) > tol) throw Error(ErrorCode::InvalidPotential, "f(+-1) must vanish");
  if (!(2.0 * a[2] + 12.0 * a[4] > 0.0)) throw Error(ErrorCode::InvalidPotential, "f''(+-1) must be positive");
  return p;
}

PotentialValues Potential::eval(double c) const noexcept {
  if (kind_ == Kind::StandardQuartic) {
    const double c2m1 = c * c - 1.0;
    return {0.125 * c2m1 * c2m1, 0.5 * c * c2m1, 0.5 * (3.0 * c * c - 1.0), 3.0 * c};
  }
  // Validation leaves a4 (c^2 - 1)^2; the factored form keeps f accurate near the wells.
  const double a = coeffs_[4];
  const double c2m1 = c * c - 1.0;
  const double f = a * c2m1 * c2m1;
  const double df = 4.0 * a * c * c2m1;
  const double d2f = a * (12.0 * c * c - 4.0);
  const double d3f = 24.0 * a * c;
  return {f, df, d2f, d3f};
}

double Potential::decay_rate() const noexcept {
  return std::sqrt(std::min(eval(1.0).d2f, eval(-1.0).d2f));
}

double Potential::max_abs_d2f_on_wells() const noexcept {
  // f'' is a quadratic, so its extrema on [-1, 1] sit at the ends or the vertex.
  double m = std::max(std::abs(eval(-1.0).d2f), std::abs(eval(1.0).d2f));
  m = std::max(m, std::abs(eval(0.0).d2f));
  return m;
}

std::string Potential::describe() const {
  if (kind_ == Kind::StandardQuartic) return "standard";
  std::ostringstream os;
  os << "[";
  for (std::size_t k = 0; k < coeffs_.size(); ++k) os << (k ? ", " : "") << coeffs_[k];
  os << "]";
  return os.str();
}

double sigma_from_potential(const Potential& pot) {
  bool negative = false;
  auto integrand = [&](double s) {
    const double f = pot.f(s);
    if (f < -1e-14) negative = true;
    return std::sqrt(2.0 * std::max(f, 0.0));
  };
  double error = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      integrand, -1.0, 1.0, 15, 1e-14, &error);
  if (negative) throw Error(ErrorCode::NegativePotential, "f < 0 on [-1, 1]");
  if (error > 1e-10) throw Error(ErrorCode::NoConvergence, "sigma quadrature error above 1e-10");
  return value;
}

}  // namespace nsac
