#pragma once

// Finite-difference oracles on a black-box surface (s,t) -> R^3. Nothing in
// this header uses the pencil's closed-form normal or frame derivatives.

#include "curve.hpp"
#include "errors.hpp"
#include "vec.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

namespace gpencil {

inline constexpr double default_tol_kg = 1e-4;
inline constexpr double default_regularity_threshold = 1e-6;

inline double default_fd_step(double span) { return std::clamp(1e-5 * span, 1e-7, 1e-3); }

struct SurfaceProbe {
  std::function<Vec3(double, double)> surface;
  double s_min = 0.0, s_max = 1.0;
  double t_min = 0.0, t_max = 1.0;
  double h_s = 0.0, h_t = 0.0;

  SurfaceProbe(std::function<Vec3(double, double)> f, double s_lo, double s_hi, double t_lo, double t_hi,
               double hs = 0.0, double ht = 0.0)
      : surface(std::move(f)), s_min(s_lo), s_max(s_hi), t_min(t_lo), t_max(t_hi) {
    h_s = hs > 0.0 ? hs : default_fd_step(s_max - s_min);
    h_t = ht > 0.0 ? ht : default_fd_step(t_max - t_min);
    if (!(h_s > 0.0 && h_t > 0.0)) throw Error(ErrorKind::invalid_argument, "FD steps must be positive");
    if (4.0 * h_s > s_max - s_min || 4.0 * h_t > t_max - t_min)
      throw Error(ErrorKind::invalid_argument, "FD step too large for the domain");
  }

  // Any object callable as (s,t) -> Vec3 exposing its parameter box.
  template <typename Surface>
  static SurfaceProbe of(const Surface& p) {
    return SurfaceProbe([&p](double s, double t) { return p(s, t); }, p.s_min(), p.s_max(), p.t_min(), p.t_max());
  }

  Vec3 operator()(double s, double t) const { return surface(s, t); }
};

namespace detail {

// Central difference inside the box, second-order one-sided at its edges.
inline Vec3 partial(const SurfaceProbe& p, double s, double t, bool in_s) {
  const double h = in_s ? p.h_s : p.h_t;
  const double x = in_s ? s : t;
  const double lo = in_s ? p.s_min : p.t_min;
  const double hi = in_s ? p.s_max : p.t_max;
  auto at = [&](double dx) { return in_s ? p(s + dx, t) : p(s, t + dx); };
  if (x - h >= lo && x + h <= hi) return (at(h) - at(-h)) / (2.0 * h);
  if (x - h < lo) return (-3.0 * at(0.0) + 4.0 * at(h) - at(2.0 * h)) / (2.0 * h);
  return (3.0 * at(0.0) - 4.0 * at(-h) + at(-2.0 * h)) / (2.0 * h);
}

}  // namespace detail

// Ps x Pt by finite differences, unnormalized.
inline Vec3 numeric_normal_raw(const SurfaceProbe& p, double s, double t) {
  return detail::partial(p, s, t, true).cross(detail::partial(p, s, t, false));
}

inline Vec3 numeric_normal(const SurfaceProbe& p, double s, double t) {
  const Vec3 n = numeric_normal_raw(p, s, t);
  const double m = n.norm();
  if (m < 1e-10)
    throw Error(ErrorKind::degenerate_normal,
                "|Ps x Pt|=" + std::to_string(m) + " at (s,t)=(" + std::to_string(s) + "," + std::to_string(t) + ")");
  return n / m;
}

struct GeodesicCurvatureReport {
  std::vector<double> s;
  std::vector<double> kg;
  double max_abs = 0.0;
};

// k_g = det(r', r'', n) with n the unit FD normal at (s, t0).
inline GeodesicCurvatureReport geodesic_curvature_along(const SurfaceProbe& p, const Curve3& c, double t0,
                                                        std::size_t n) {
  if (n < 2) throw Error(ErrorKind::invalid_argument, "geodesic_curvature_along needs n >= 2");
  GeodesicCurvatureReport rep;
  rep.s.reserve(n);
  rep.kg.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = grid_node(c.s_min(), c.s_max(), i, n);
    try {
      const double off = (p(s, t0) - c.position(s)).norm();
      if (off > 1e-7) throw Error(ErrorKind::curve_not_on_surface, "distance " + std::to_string(off));
      const double kg = det3(c.derivative(1, s), c.derivative(2, s), numeric_normal(p, s, t0));
      rep.s.push_back(s);
      rep.kg.push_back(kg);
      rep.max_abs = std::max(rep.max_abs, std::fabs(kg));
    } catch (const Error& e) {
      throw IndexedError(e, i, s);
    }
  }
  return rep;
}

// K = (LN - M^2) / (EG - F^2) from central differences; interior points only.
inline double gaussian_curvature(const SurfaceProbe& p, double s, double t) {
  const double hs = p.h_s, ht = p.h_t;
  if (s - hs < p.s_min || s + hs > p.s_max || t - ht < p.t_min || t + ht > p.t_max)
    throw Error(ErrorKind::out_of_domain, "gaussian_curvature needs an interior point");
  const Vec3 c0 = p(s, t);
  const Vec3 sp = p(s + hs, t), sm = p(s - hs, t);
  const Vec3 tp = p(s, t + ht), tm = p(s, t - ht);
  const Vec3 Ps = (sp - sm) / (2.0 * hs);
  const Vec3 Pt = (tp - tm) / (2.0 * ht);
  const Vec3 Pss = (sp - 2.0 * c0 + sm) / (hs * hs);
  const Vec3 Ptt = (tp - 2.0 * c0 + tm) / (ht * ht);
  const Vec3 Pst = (p(s + hs, t + ht) - p(s + hs, t - ht) - p(s - hs, t + ht) + p(s - hs, t - ht)) / (4.0 * hs * ht);

  const Vec3 raw = Ps.cross(Pt);
  if (raw.norm() < 1e-10) throw Error(ErrorKind::degenerate_normal, "singular point");
  const Vec3 n = raw.normalized();
  const double E = Ps.dot(Ps), F = Ps.dot(Pt), G = Pt.dot(Pt);
  const double L = Pss.dot(n), M = Pst.dot(n), N = Ptt.dot(n);
  const double first = E * G - F * F;
  if (first < 1e-12) throw Error(ErrorKind::indeterminate, "EG - F^2 below 1e-12");
  return (L * N - M * M) / first;
}

struct RegularityReport {
  double min_norm = std::numeric_limits<double>::infinity();
  double threshold = 0.0;
  std::vector<std::pair<std::size_t, std::size_t>> flagged;  // (i over s, j over t)
};

inline RegularityReport regularity_scan(const SurfaceProbe& p, const std::vector<double>& s_values,
                                        const std::vector<double>& t_values,
                                        double threshold = default_regularity_threshold) {
  RegularityReport rep;
  rep.threshold = threshold;
  for (std::size_t j = 0; j < t_values.size(); ++j) {
    for (std::size_t i = 0; i < s_values.size(); ++i) {
      const double m = numeric_normal_raw(p, s_values[i], t_values[j]).norm();
      rep.min_norm = std::min(rep.min_norm, m);
      if (m < threshold) rep.flagged.emplace_back(i, j);
    }
  }
  return rep;
}

}  // namespace gpencil
