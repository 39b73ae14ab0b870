#pragma once

#include <array>
#include <span>
#include <string>

namespace nsac {

struct PotentialValues {
  double f;
  double df;
  double d2f;
  double d3f;
};

/// Even double-well potential with wells at +1 and -1.
///
/// Either the standard quartic f(c) = (c^2 - 1)^2 / 8 or a user polynomial of
/// degree <= 4. User polynomials are validated on construction: odd
/// coefficients must vanish, f(+-1) = f'(+-1) = 0 and f''(+-1) > 0.
class Potential {
 public:
  enum class Kind { StandardQuartic, UserPolynomial };

  Potential() = default;

  static Potential standard_quartic();
  /// coefficients[k] multiplies c^k. Throws InvalidPotential on violations.
  static Potential user_polynomial(std::span<const double> coefficients);

  Kind kind() const noexcept { return kind_; }
  const std::array<double, 5>& coefficients() const noexcept { return coeffs_; }

  PotentialValues eval(double c) const noexcept;
  double f(double c) const noexcept { return eval(c).f; }
  double df(double c) const noexcept { return eval(c).df; }
  double d2f(double c) const noexcept { return eval(c).d2f; }
  double d3f(double c) const noexcept { return eval(c).d3f; }

  /// f''(+1) (== f''(-1) by evenness).
  double well_curvature() const noexcept { return eval(1.0).d2f; }
  /// Exponential decay rate of the optimal profile tails, min sqrt(f''(+-1)).
  double decay_rate() const noexcept;
  /// sup of |f''| over [-1, 1]; used as the stabilisation constant.
  double max_abs_d2f_on_wells() const noexcept;

  std::string describe() const;

 private:
  Kind kind_ = Kind::StandardQuartic;
  std::array<double, 5> coeffs_{0.125, 0.0, -0.25, 0.0, 0.125};
};

/// sigma = int_{-1}^{1} sqrt(2 f(s)) ds by adaptive Gauss-Kronrod quadrature.
/// Throws NegativePotential if f < -1e-14 on any quadrature node.
double sigma_from_potential(const Potential& pot);

}  // namespace nsac
