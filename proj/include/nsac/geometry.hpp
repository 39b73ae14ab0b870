#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Core>

namespace nsac {

using Vec2 = Eigen::Vector2d;

/// Which side of a closed curve is the "+" phase (where c ~ +1 and d > 0).
enum class Orientation { PlusInside, PlusOutside };

inline Vec2 rot90(const Vec2& v) { return {-v.y(), v.x()}; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

/// Closed interface component sampled at equal arclength fractions s_i = i/N.
///
/// Samples are stored so that the + phase lies to the left of the direction of
/// travel; the unit normal n = rot90(tau) therefore points into the + phase and
/// a circle enclosing the + phase has curvature +1/R. A periodic cubic spline
/// in s interpolates the samples.
class Curve {
 public:
  Curve() = default;

  /// Closed polyline (first point not repeated), resampled to n samples
  /// (n == 0 keeps the input count). Throws DegenerateCurve.
  static Curve from_points(std::vector<Vec2> points, Orientation orientation, std::size_t n = 0);
  static Curve circle(const Vec2& center, double radius, std::size_t n,
                      Orientation orientation = Orientation::PlusInside);
  static Curve ellipse(const Vec2& center, double a, double b, std::size_t n,
                       Orientation orientation = Orientation::PlusInside);
  /// Takes samples that are already equally spaced in arclength; no resampling.
  static Curve from_equal_arclength(std::vector<Vec2> points, Orientation orientation);

  std::size_t size() const noexcept { return pts_.size(); }
  const std::vector<Vec2>& samples() const noexcept { return pts_; }
  const Vec2& operator[](std::size_t i) const { return pts_[i]; }
  Orientation orientation() const noexcept { return orientation_; }
  double length() const noexcept { return length_; }
  /// Area enclosed by the interpolating spline; positive for counter-clockwise travel.
  double signed_area() const;
  /// Area of the region bounded by the curve (always >= 0).
  double enclosed_area() const;

  /// Spline evaluation at s in [0, 1) (periodic); derivatives are with respect to s.
  Vec2 position(double s) const;
  Vec2 derivative(double s) const;
  Vec2 second_derivative(double s) const;

  /// Geometry at the samples, fourth-order finite differences in s.
  const std::vector<Vec2>& tangents() const noexcept { return tau_; }
  const std::vector<Vec2>& normals() const noexcept { return normal_; }
  const std::vector<double>& curvatures() const noexcept { return kappa_; }
  const std::vector<double>& speeds() const noexcept { return speed_; }  ///< |dX/ds|
  /// Curvature interpolated (periodic cubic Lagrange) at s.
  double curvature_at(double s) const;
  double max_abs_curvature() const;

  /// max |spacing_i - mean| / mean over adjacent-sample chord lengths.
  double spacing_deviation() const;
  /// Non-adjacent polygon edges do not intersect.
  bool is_simple() const;

  Curve translated(const Vec2& shift) const;
  /// Rigid rotation about the origin.
  Curve rotated(double angle) const;

 private:
  void build();

  std::vector<Vec2> pts_;
  std::vector<Vec2> spline_m_;  // second derivatives at knots
  std::vector<Vec2> tau_, normal_;
  std::vector<double> kappa_, speed_;
  double length_ = 0.0;
  Orientation orientation_ = Orientation::PlusInside;
};

/// Non-adjacent edges of the closed polygon neither cross nor touch.
bool polygon_is_simple(const std::vector<Vec2>& points);

/// Galerkin derivative of the periodic cubic spline through p (uniform knots):
/// (D p)_i = sum_m b_m p_{i+m} with b_m = int phi_0 phi_m' ds, so that the spline
/// area is 1/2 sum_i p_i x (D p)_i and its gradient is -rot90((D p)_i).
std::vector<Vec2> spline_area_operator(const std::vector<Vec2>& p);
double spline_signed_area(const std::vector<Vec2>& p);

/// Equal-arclength resampling via periodic cubic interpolation of the
/// cumulative-length parametrisation. Throws DegenerateCurve for tiny or
/// self-intersecting input.
Curve resample_arclength(const Curve& curve, std::size_t n = 0);

struct CurveGeometry {
  std::vector<Vec2> tau;
  std::vector<Vec2> normal;
  std::vector<double> kappa;
};

CurveGeometry geometry_quantities(const Curve& curve);

/// Tubular coordinates of a point relative to the interface.
struct TubeCoords {
  double r = 0.0;  ///< signed distance, > 0 in the + phase
  double s = 0.0;  ///< foot-point parameter on T^1
  bool inside_tube = false;
  Vec2 foot = Vec2::Zero();
  Vec2 normal = Vec2::Zero();
  double curvature = 0.0;
  std::size_t component = 0;
};

/// Nearest foot point by a coarse scan over the samples followed by a
/// safeguarded Newton refinement on the spline. inside_tube is |r| < 2 delta.
/// With strict = true, a point with |r| beyond the reach 1/max|kappa| whose
/// distance is attained at two separated foot points raises AmbiguousProjection.
TubeCoords signed_distance_and_project(const Curve& curve, const Vec2& x, double delta, bool strict = false);

/// rho = r / eps - h(s). Throws OutsideTube.
double stretched_rho(const TubeCoords& tc, double eps, const std::function<double(double)>& h);

/// int over {|r| < delta_p} of integrand(r, s) with the Jacobian 1 - r kappa(s):
/// Gauss-Legendre in r, periodic trapezoid in s. Throws TubeTooWide.
double tube_integrate(const Curve& curve, double delta_p, const std::function<double(double, double)>& integrand,
                      std::size_t nr = 32);

/// Smooth cutoff: 1 for |z| <= delta, 0 for |z| >= 2 delta, quintic smoothstep between.
double cutoff_zeta(double delta, double z);
double cutoff_zeta_derivative(double delta, double z);

/// The sharp interface Gamma: a union of disjoint closed curves, or a straight
/// vertical line x = x0 (used for flat-interface scenarios on a box).
class Interface {
 public:
  Interface() = default;
  static Interface from_curves(std::vector<Curve> curves);
  /// Line x = x0 spanning a box of height ly; the + phase is x < x0 when plus_left.
  static Interface vertical_line(double x0, double ly, bool plus_left = true);

  bool is_line() const noexcept { return line_.has_value(); }
  const std::vector<Curve>& curves() const noexcept { return curves_; }

  /// Projection onto the nearest component.
  TubeCoords project(const Vec2& x, double delta) const;

  double max_abs_curvature() const;
  double total_length() const;
  /// Length-weighted mean curvature over all components.
  double mean_curvature() const;
  /// Smallest distance between samples of distinct components (infinity for one).
  double component_gap() const;
  /// Smallest distance from the interface to the box [0, lx] x [0, ly].
  double distance_to_box(double lx, double ly) const;
  /// delta = min(0.4 / max|kappa|, dist(Gamma, box) / 2.5, gap / 4).
  double tube_half_width(double lx, double ly) const;

 private:
  struct Line {
    double x0;
    double ly;
    bool plus_left;
  };
  std::vector<Curve> curves_;
  std::optional<Line> line_;
};

}  // namespace nsac
