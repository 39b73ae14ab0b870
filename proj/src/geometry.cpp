#include "nsac/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>

#include "nsac/errors.hpp"
#include "nsac/numerics.hpp"

namespace nsac {

namespace {

double wrap01(double s) {
  s -= std::floor(s);
  return s >= 1.0 ? 0.0 : s;
}

double shoelace(const std::vector<Vec2>& p) {
  double a = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) a += cross(p[i], p[(i + 1) % p.size()]);
  return 0.5 * a;
}

void orient(std::vector<Vec2>& p, Orientation o) {
  const bool ccw = shoelace(p) > 0.0;
  if (ccw != (o == Orientation::PlusInside)) std::reverse(p.begin() + 1, p.end());
}

// Closed-segment intersection, touching included.
bool segments_cross(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  const double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return true;
  auto on = [](const Vec2& p, const Vec2& q, const Vec2& r) {
    return r.x() >= std::min(p.x(), q.x()) && r.x() <= std::max(p.x(), q.x()) && r.y() >= std::min(p.y(), q.y()) &&
           r.y() <= std::max(p.y(), q.y());
  };
  return (d1 == 0 && on(a, b, c)) || (d2 == 0 && on(a, b, d)) || (d3 == 0 && on(c, d, a)) || (d4 == 0 && on(c, d, b));
}

std::vector<Vec2> periodic_spline_moments(const std::vector<Vec2>& p, const std::vector<double>& h) {
  const std::size_t n = p.size();
  std::vector<double> lo(n), di(n), up(n), rx(n), ry(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t im = (i + n - 1) % n, ip = (i + 1) % n;
    lo[i] = h[im];
    di[i] = 2.0 * (h[im] + h[i]);
    up[i] = h[i];
    const Vec2 rhs = 6.0 * ((p[ip] - p[i]) / h[i] - (p[i] - p[im]) / h[im]);
    rx[i] = rhs.x();
    ry[i] = rhs.y();
  }
  const auto mx = solve_cyclic_tridiagonal(lo, di, up, rx);
  const auto my = solve_cyclic_tridiagonal(lo, di, up, ry);
  std::vector<Vec2> m(n);
  for (std::size_t i = 0; i < n; ++i) m[i] = {mx[i], my[i]};
  return m;
}

// Periodic cubic spline with arbitrary knot spacing; segment i spans h[i].
struct SegmentSpline {
  std::vector<Vec2> p, m;
  std::vector<double> h;

  Vec2 eval(std::size_t i, double u) const {
    const std::size_t j = (i + 1) % p.size();
    const double b = u / h[i], a = 1.0 - b;
    return a * p[i] + b * p[j] + ((a * a * a - a) * m[i] + (b * b * b - b) * m[j]) * (h[i] * h[i] / 6.0);
  }
  Vec2 deriv(std::size_t i, double u) const {
    const std::size_t j = (i + 1) % p.size();
    const double b = u / h[i], a = 1.0 - b;
    return (p[j] - p[i]) / h[i] + (-(3.0 * a * a - 1.0) * m[i] + (3.0 * b * b - 1.0) * m[j]) * (h[i] / 6.0);
  }
  Vec2 deriv2(std::size_t i, double u) const {
    const std::size_t j = (i + 1) % p.size();
    const double b = u / h[i];
    return (1.0 - b) * m[i] + b * m[j];
  }
};

const auto& gl10() {
  static const auto rule = gauss_legendre(10, 0.0, 1.0);
  return rule;
}

double segment_arclength(const SegmentSpline& sp, std::size_t i, double upto) {
  const auto& [x, w] = gl10();
  double acc = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) acc += w[k] * sp.deriv(i, x[k] * upto).norm();
  return acc * upto;
}

std::vector<Vec2> resample_once(const std::vector<Vec2>& pts, std::size_t n_out) {
  const std::size_t n = pts.size();
  SegmentSpline sp;
  sp.p = pts;
  sp.h.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    sp.h[i] = (pts[(i + 1) % n] - pts[i]).norm();
    if (sp.h[i] <= 0.0) throw Error(ErrorCode::DegenerateCurve, "repeated consecutive points");
  }
  sp.m = periodic_spline_moments(pts, sp.h);

  std::vector<double> seg(n), cum(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    seg[i] = segment_arclength(sp, i, sp.h[i]);
    cum[i + 1] = cum[i] + seg[i];
  }
  const double total = cum[n];
  std::vector<Vec2> out(n_out);
  std::size_t i = 0;
  for (std::size_t k = 0; k < n_out; ++k) {
    const double target = total * static_cast<double>(k) / static_cast<double>(n_out);
    while (i + 1 < n && cum[i + 1] <= target) ++i;
    const double q = target - cum[i];
    double u = sp.h[i] * q / seg[i];
    for (int it = 0; it < 50; ++it) {
      const double f = segment_arclength(sp, i, u) - q;
      const double du = f / sp.deriv(i, u).norm();
      u = std::clamp(u - du, 0.0, sp.h[i]);
      if (std::abs(du) < 1e-15 * sp.h[i]) break;
    }
    out[k] = sp.eval(i, u);
  }
  return out;
}

// b(m) = int phi_0 phi_m' ds for the cardinal basis of the uniform periodic cubic spline.
const std::vector<double>& galerkin_weights(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, std::vector<double>> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  const double h = 1.0 / static_cast<double>(n);
  std::vector<Vec2> e(n, Vec2::Zero());
  e[0] = Vec2(1.0, 0.0);
  const auto m = periodic_spline_moments(e, std::vector<double>(n, h));
  const auto [x, w] = gauss_legendre(3, 0.0, 1.0);
  std::vector<double> val(3 * n), der(3 * n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = (i + 1) % n;
    for (std::size_t q = 0; q < 3; ++q) {
      const double b = x[q], a = 1.0 - b;
      val[3 * i + q] = a * e[i].x() + b * e[j].x() + ((a * a * a - a) * m[i].x() + (b * b * b - b) * m[j].x()) * h * h / 6.0;
      der[3 * i + q] = (e[j].x() - e[i].x()) / h + (-(3.0 * a * a - 1.0) * m[i].x() + (3.0 * b * b - 1.0) * m[j].x()) * h / 6.0;
    }
  }
  std::vector<double> out(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t shifted = (i + n - k) % n;
      for (std::size_t q = 0; q < 3; ++q) acc += w[q] * val[3 * i + q] * der[3 * shifted + q];
    }
    out[k] = acc * h;
  }
  return cache.emplace(n, std::move(out)).first->second;
}

}  // namespace

bool polygon_is_simple(const std::vector<Vec2>& p) {
  const std::size_t n = p.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = p[i];
    const Vec2& b = p[(i + 1) % n];
    const Vec2 lo = a.cwiseMin(b), hi = a.cwiseMax(b);
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      const Vec2& c = p[j];
      const Vec2& d = p[(j + 1) % n];
      if (std::max(c.x(), d.x()) < lo.x() || std::min(c.x(), d.x()) > hi.x() || std::max(c.y(), d.y()) < lo.y() ||
          std::min(c.y(), d.y()) > hi.y())
        continue;
      if (segments_cross(a, b, c, d)) return false;
    }
  }
  return true;
}

std::vector<Vec2> spline_area_operator(const std::vector<Vec2>& p) {
  const std::size_t n = p.size();
  const auto& b = galerkin_weights(n);
  std::vector<std::pair<std::size_t, double>> taps;
  for (std::size_t k = 0; k < n; ++k)
    if (std::abs(b[k]) > 1e-18) taps.emplace_back(k, b[k]);
  std::vector<Vec2> d(n, Vec2::Zero());
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& [k, w] : taps) d[i] += w * p[(i + k) % n];
  return d;
}

double spline_signed_area(const std::vector<Vec2>& p) {
  const auto d = spline_area_operator(p);
  std::vector<double> terms(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) terms[i] = 0.5 * cross(p[i], d[i]);
  return pairwise_sum(terms);
}

// ---------------------------------------------------------------- Curve

Curve Curve::from_equal_arclength(std::vector<Vec2> points, Orientation orientation) {
  if (points.size() < 8) throw Error(ErrorCode::DegenerateCurve, "curve needs at least 8 samples");
  orient(points, orientation);
  Curve c;
  c.pts_ = std::move(points);
  c.orientation_ = orientation;
  c.build();
  return c;
}

Curve Curve::from_points(std::vector<Vec2> points, Orientation orientation, std::size_t n) {
  if (points.size() < 4) throw Error(ErrorCode::DegenerateCurve, "curve needs at least 4 points");
  if (n == 0) n = points.size();
  if ((points.front() - points.back()).norm() == 0.0) points.pop_back();
  orient(points, orientation);
  Curve raw;
  raw.pts_ = std::move(points);
  raw.orientation_ = orientation;
  return resample_arclength(raw, n);
}

Curve Curve::circle(const Vec2& center, double radius, std::size_t n, Orientation orientation) {
  std::vector<Vec2> p(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
    p[i] = center + radius * Vec2(std::cos(t), std::sin(t));
  }
  return from_equal_arclength(std::move(p), orientation);
}

Curve Curve::ellipse(const Vec2& center, double a, double b, std::size_t n, Orientation orientation) {
  const std::size_t fine = 8 * n;
  std::vector<Vec2> p(fine);
  for (std::size_t i = 0; i < fine; ++i) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(fine);
    p[i] = center + Vec2(a * std::cos(t), b * std::sin(t));
  }
  return from_points(std::move(p), orientation, n);
}

void Curve::build() {
  const std::size_t n = pts_.size();
  const double ds = 1.0 / static_cast<double>(n);
  spline_m_ = periodic_spline_moments(pts_, std::vector<double>(n, ds));

  tau_.resize(n);
  normal_.resize(n);
  kappa_.resize(n);
  speed_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& pm2 = pts_[(i + n - 2) % n];
    const Vec2& pm1 = pts_[(i + n - 1) % n];
    const Vec2& pp1 = pts_[(i + 1) % n];
    const Vec2& pp2 = pts_[(i + 2) % n];
    const Vec2 d1 = (pm2 - 8.0 * pm1 + 8.0 * pp1 - pp2) / (12.0 * ds);
    const Vec2 d2 = (-pm2 + 16.0 * pm1 - 30.0 * pts_[i] + 16.0 * pp1 - pp2) / (12.0 * ds * ds);
    const double sp = d1.norm();
    if (!(sp > 0.0)) throw Error(ErrorCode::DegenerateCurve, "vanishing tangent");
    speed_[i] = sp;
    tau_[i] = d1 / sp;
    normal_[i] = rot90(tau_[i]);
    kappa_[i] = cross(d1, d2) / (sp * sp * sp);
  }

  SegmentSpline sp{pts_, spline_m_, std::vector<double>(n, ds)};
  double len = 0.0;
  for (std::size_t i = 0; i < n; ++i) len += segment_arclength(sp, i, ds);
  length_ = len;
  if (length_ < 1e-10) throw Error(ErrorCode::DegenerateCurve, "curve length below 1e-10");
}

double Curve::signed_area() const { return spline_signed_area(pts_); }
double Curve::enclosed_area() const { return std::abs(spline_signed_area(pts_)); }

Vec2 Curve::position(double s) const {
  const double u = wrap01(s) * static_cast<double>(size());
  const auto i = std::min(static_cast<std::size_t>(u), size() - 1);
  const double ds = 1.0 / static_cast<double>(size());
  const std::size_t j = (i + 1) % size();
  const double b = u - static_cast<double>(i), a = 1.0 - b;
  return a * pts_[i] + b * pts_[j] + ((a * a * a - a) * spline_m_[i] + (b * b * b - b) * spline_m_[j]) * (ds * ds / 6.0);
}

Vec2 Curve::derivative(double s) const {
  const double u = wrap01(s) * static_cast<double>(size());
  const auto i = std::min(static_cast<std::size_t>(u), size() - 1);
  const double ds = 1.0 / static_cast<double>(size());
  const double b = u - static_cast<double>(i), a = 1.0 - b;
  const std::size_t j = (i + 1) % size();
  return (pts_[j] - pts_[i]) / ds + (-(3.0 * a * a - 1.0) * spline_m_[i] + (3.0 * b * b - 1.0) * spline_m_[j]) * (ds / 6.0);
}

Vec2 Curve::second_derivative(double s) const {
  const double u = wrap01(s) * static_cast<double>(size());
  const auto i = std::min(static_cast<std::size_t>(u), size() - 1);
  const double b = u - static_cast<double>(i);
  return (1.0 - b) * spline_m_[i] + b * spline_m_[(i + 1) % size()];
}

double Curve::curvature_at(double s) const {
  const std::size_t n = size();
  const double u = wrap01(s) * static_cast<double>(n);
  const auto i = std::min(static_cast<std::size_t>(u), n - 1);
  const double t = u - static_cast<double>(i);
  const double k0 = kappa_[(i + n - 1) % n], k1 = kappa_[i], k2 = kappa_[(i + 1) % n], k3 = kappa_[(i + 2) % n];
  // cubic Lagrange on nodes -1, 0, 1, 2
  return k0 * (-t * (t - 1.0) * (t - 2.0) / 6.0) + k1 * ((t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0) +
         k2 * (-(t + 1.0) * t * (t - 2.0) / 2.0) + k3 * ((t + 1.0) * t * (t - 1.0) / 6.0);
}

double Curve::max_abs_curvature() const {
  double m = 0.0;
  for (double k : kappa_) m = std::max(m, std::abs(k));
  return m;
}

double Curve::spacing_deviation() const {
  const std::size_t n = size();
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = (pts_[(i + 1) % n] - pts_[i]).norm();
  const double mean = pairwise_sum(d) / static_cast<double>(n);
  double dev = 0.0;
  for (double x : d) dev = std::max(dev, std::abs(x - mean));
  return dev / mean;
}

bool Curve::is_simple() const { return polygon_is_simple(pts_); }

Curve Curve::translated(const Vec2& shift) const {
  auto p = pts_;
  for (auto& x : p) x += shift;
  return from_equal_arclength(std::move(p), orientation_);
}

Curve Curve::rotated(double angle) const {
  const double c = std::cos(angle), s = std::sin(angle);
  auto p = pts_;
  for (auto& x : p) x = Vec2(c * x.x() - s * x.y(), s * x.x() + c * x.y());
  return from_equal_arclength(std::move(p), orientation_);
}

Curve resample_arclength(const Curve& curve, std::size_t n) {
  if (n == 0) n = curve.size();
  if (n < 16) throw Error(ErrorCode::DegenerateCurve, "resampling needs N_s >= 16");
  const auto& pts = curve.samples();
  double perimeter = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) perimeter += (pts[(i + 1) % pts.size()] - pts[i]).norm();
  if (perimeter < 1e-10) throw Error(ErrorCode::DegenerateCurve, "curve length below 1e-10");
  if (!polygon_is_simple(pts)) throw Error(ErrorCode::DegenerateCurve, "curve self-intersects");
  auto once = resample_once(pts, n);
  auto twice = resample_once(once, n);
  return Curve::from_equal_arclength(std::move(twice), curve.orientation());
}

CurveGeometry geometry_quantities(const Curve& curve) {
  return {curve.tangents(), curve.normals(), curve.curvatures()};
}

// ---------------------------------------------------------------- projection

namespace {

struct Foot {
  double s;
  double dist2;
};

Foot refine_foot(const Curve& c, const Vec2& x, std::size_t i0) {
  const double n = static_cast<double>(c.size());
  auto g = [&](double s) { return (c.position(s) - x).dot(c.derivative(s)); };
  double lo = (static_cast<double>(i0) - 1.0) / n, hi = (static_cast<double>(i0) + 1.0) / n;
  double glo = g(lo), ghi = g(hi);
  for (int widen = 0; widen < 4 && glo > 0.0; ++widen) glo = g(lo -= 1.0 / n);
  for (int widen = 0; widen < 4 && ghi < 0.0; ++widen) ghi = g(hi += 1.0 / n);
  double s = static_cast<double>(i0) / n;
  const bool bracketed = glo <= 0.0 && ghi >= 0.0;
  for (int it = 0; it < 80; ++it) {
    const Vec2 X = c.position(s), d1 = c.derivative(s), d2 = c.second_derivative(s);
    const double gs = (X - x).dot(d1);
    const double gp = d1.squaredNorm() + (X - x).dot(d2);
    if (bracketed) {
      if (gs < 0.0) lo = s; else hi = s;
    }
    double next = gp > 0.0 ? s - gs / gp : 0.5 * (lo + hi);
    if (bracketed && (next <= lo || next >= hi)) next = 0.5 * (lo + hi);
    if (!bracketed) next = std::clamp(next, s - 1.0 / n, s + 1.0 / n);
    const double step = std::abs(next - s);
    s = next;
    if (step < 1e-15 || (bracketed && hi - lo < 1e-15)) break;
  }
  return {wrap01(s), (c.position(s) - x).squaredNorm()};
}

std::size_t nearest_sample(const Curve& c, const Vec2& x) {
  std::size_t best = 0;
  double bd = std::numeric_limits<double>::infinity();
  const auto& p = c.samples();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = (p[i] - x).squaredNorm();
    if (d < bd) {
      bd = d;
      best = i;
    }
  }
  return best;
}

}  // namespace

TubeCoords signed_distance_and_project(const Curve& curve, const Vec2& x, double delta, bool strict) {
  const std::size_t i0 = nearest_sample(curve, x);
  const Foot foot = refine_foot(curve, x, i0);
  TubeCoords tc;
  tc.s = foot.s;
  tc.foot = curve.position(foot.s);
  const Vec2 d1 = curve.derivative(foot.s);
  tc.normal = rot90(d1.normalized());
  tc.r = (x - tc.foot).dot(tc.normal);
  tc.inside_tube = std::abs(tc.r) < 2.0 * delta;
  tc.curvature = curve.curvature_at(foot.s);

  if (strict) {
    const double kmax = curve.max_abs_curvature();
    const double reach = kmax > 0.0 ? 1.0 / kmax : std::numeric_limits<double>::infinity();
    if (std::abs(tc.r) >= reach) {
      const std::size_t n = curve.size();
      std::size_t alt = n;
      double bd = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t gap = std::min((i + n - i0) % n, (i0 + n - i) % n);
        if (gap <= n / 8) continue;
        const double d = (curve[i] - x).squaredNorm();
        if (d < bd) {
          bd = d;
          alt = i;
        }
      }
      if (alt < n) {
        const Foot other = refine_foot(curve, x, alt);
        if (std::abs(std::sqrt(other.dist2) - std::sqrt(foot.dist2)) < 1e-9 &&
            (curve.position(other.s) - tc.foot).norm() > 1e-6)
          throw Error(ErrorCode::AmbiguousProjection, "two foot points at equal distance");
      }
    }
  }
  return tc;
}

double stretched_rho(const TubeCoords& tc, double eps, const std::function<double(double)>& h) {
  if (!tc.inside_tube) throw Error(ErrorCode::OutsideTube, "point lies outside Gamma(2 delta)");
  return tc.r / eps - (h ? h(tc.s) : 0.0);
}

double tube_integrate(const Curve& curve, double delta_p, const std::function<double(double, double)>& integrand,
                      std::size_t nr) {
  if (delta_p * curve.max_abs_curvature() >= 1.0)
    throw Error(ErrorCode::TubeTooWide, "tube half-width reaches the focal set (J <= 0)");
  const auto [r, w] = gauss_legendre(nr, -delta_p, delta_p);
  const std::size_t n = curve.size();
  const double ds = 1.0 / static_cast<double>(n);
  std::vector<double> cols(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = static_cast<double>(i) * ds;
    const double k = curve.curvatures()[i];
    double acc = 0.0;
    for (std::size_t j = 0; j < nr; ++j) acc += w[j] * integrand(r[j], s) * (1.0 - r[j] * k);
    cols[i] = acc * curve.speeds()[i] * ds;
  }
  return pairwise_sum(cols);
}

double cutoff_zeta(double delta, double z) {
  const double a = std::abs(z);
  if (a <= delta) return 1.0;
  if (a >= 2.0 * delta) return 0.0;
  const double t = (a - delta) / delta;
  return 1.0 - t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

double cutoff_zeta_derivative(double delta, double z) {
  const double a = std::abs(z);
  if (a <= delta || a >= 2.0 * delta) return 0.0;
  const double t = (a - delta) / delta;
  const double dS = 30.0 * t * t * (1.0 - t) * (1.0 - t);
  return -(z > 0 ? 1.0 : -1.0) * dS / delta;
}

// ---------------------------------------------------------------- Interface

Interface Interface::from_curves(std::vector<Curve> curves) {
  if (curves.empty()) throw Error(ErrorCode::NoInterface, "interface needs at least one curve");
  Interface g;
  g.curves_ = std::move(curves);
  return g;
}

Interface Interface::vertical_line(double x0, double ly, bool plus_left) {
  Interface g;
  g.line_ = Line{x0, ly, plus_left};
  return g;
}

TubeCoords Interface::project(const Vec2& x, double delta) const {
  if (line_) {
    TubeCoords tc;
    const double sgn = line_->plus_left ? 1.0 : -1.0;
    tc.r = sgn * (line_->x0 - x.x());
    tc.s = wrap01(x.y() / line_->ly);
    tc.foot = Vec2(line_->x0, x.y());
    tc.normal = Vec2(-sgn, 0.0);
    tc.inside_tube = std::abs(tc.r) < 2.0 * delta;
    return tc;
  }
  TubeCoords best;
  double bd = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < curves_.size(); ++k) {
    auto tc = signed_distance_and_project(curves_[k], x, delta);
    if (std::abs(tc.r) < bd) {
      bd = std::abs(tc.r);
      tc.component = k;
      best = tc;
    }
  }
  return best;
}

double Interface::max_abs_curvature() const {
  double m = 0.0;
  for (const auto& c : curves_) m = std::max(m, c.max_abs_curvature());
  return m;
}

double Interface::total_length() const {
  if (line_) return line_->ly;
  double l = 0.0;
  for (const auto& c : curves_) l += c.length();
  return l;
}

double Interface::mean_curvature() const {
  if (line_) return 0.0;
  double num = 0.0, den = 0.0;
  for (const auto& c : curves_) {
    const double ds = 1.0 / static_cast<double>(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
      num += c.curvatures()[i] * c.speeds()[i] * ds;
      den += c.speeds()[i] * ds;
    }
  }
  return num / den;
}

double Interface::component_gap() const {
  double g = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < curves_.size(); ++a)
    for (std::size_t b = a + 1; b < curves_.size(); ++b)
      for (const auto& p : curves_[a].samples())
        for (const auto& q : curves_[b].samples()) g = std::min(g, (p - q).norm());
  return g;
}

double Interface::distance_to_box(double lx, double ly) const {
  if (line_) return std::min(line_->x0, lx - line_->x0);
  double d = std::numeric_limits<double>::infinity();
  for (const auto& c : curves_)
    for (const auto& p : c.samples()) d = std::min({d, p.x(), lx - p.x(), p.y(), ly - p.y()});
  return d;
}

double Interface::tube_half_width(double lx, double ly) const {
  const double k = max_abs_curvature();
  double delta = k > 0.0 ? 0.4 / k : std::numeric_limits<double>::infinity();
  delta = std::min(delta, distance_to_box(lx, ly) / 2.5);
  delta = std::min(delta, component_gap() / 4.0);
  return delta;
}

}  // namespace nsac
