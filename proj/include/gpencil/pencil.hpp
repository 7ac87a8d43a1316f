#pragma once

// Surface pencils P(s,t) = r(s) + a T(s) + b U(s) + c V(s) over an RMF, and
// the isoparametric / geodesic tests for the curve r at t = t0.

#include "curve.hpp"
#include "errors.hpp"
#include "expr.hpp"
#include "rmf.hpp"
#include "vec.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace gpencil {

inline constexpr double default_tol_eq = 1e-9;
inline constexpr double default_eps_reg = 1e-9;
inline constexpr double default_tol_iso = 1e-9;

// A function of s alone with its derivative, e.g. sin(theta(s)) from the frame table.
struct SWeight {
  std::function<std::array<double, 2>(double)> eval;  // {w(s), w'(s)}
  std::string label;
};

// Marching-scale coefficient: an expression in (s,t), optionally scaled by a weight in s.
class ScaleFunction {
 public:
  ScaleFunction() : ScaleFunction(Expression(0.0)) {}
  explicit ScaleFunction(Expression e) : ScaleFunction(std::move(e), SWeight{}) {}
  ScaleFunction(Expression factor, SWeight weight)
      : f_(std::move(factor)),
        fs_(differentiate(f_, Var::s)),
        ft_(differentiate(f_, Var::t)),
        weight_(std::move(weight)) {}

  double value(double s, double t) const { return f_(s, t) * w(s)[0]; }

  double ds(double s, double t) const {
    if (!weight_.eval) return fs_(s, t);
    const auto [wv, wd] = weight_.eval(s);
    return fs_(s, t) * wv + (wd == 0.0 ? 0.0 : f_(s, t) * wd);
  }

  double dt(double s, double t) const { return ft_(s, t) * w(s)[0]; }

  const Expression& factor() const { return f_; }

  std::string describe() const {
    if (!weight_.eval) return f_.to_string();
    return f_.to_string() + " * " + weight_.label;
  }

 private:
  std::array<double, 2> w(double s) const {
    if (!weight_.eval) return {1.0, 0.0};
    return weight_.eval(s);
  }

  Expression f_, fs_, ft_;
  SWeight weight_;
};

struct MarchingScale {
  ScaleFunction a, b, c;

  static MarchingScale from_expressions(const Expression& a, const Expression& b, const Expression& c) {
    return {ScaleFunction(a), ScaleFunction(b), ScaleFunction(c)};
  }
};

class SurfacePencil {
 public:
  SurfacePencil(std::shared_ptr<const FrameField> frames, MarchingScale ms, double t0, double t_min, double t_max)
      : frames_(std::move(frames)), ms_(std::move(ms)), t0_(t0), t_min_(t_min), t_max_(t_max) {
    if (!frames_) throw Error(ErrorKind::invalid_argument, "pencil needs a frame source");
    if (!(t_min < t_max)) throw Error(ErrorKind::invalid_argument, "pencil requires t_min < t_max");
    if (!(t_min <= t0 && t0 <= t_max)) throw Error(ErrorKind::invalid_argument, "t0 must lie in [t_min, t_max]");
  }

  const Curve3& curve() const { return frames_->curve(); }
  const FrameField& frames() const { return *frames_; }
  std::shared_ptr<const FrameField> frames_ptr() const { return frames_; }
  const MarchingScale& scale() const { return ms_; }
  double t0() const { return t0_; }
  double s_min() const { return curve().s_min(); }
  double s_max() const { return curve().s_max(); }
  double t_min() const { return t_min_; }
  double t_max() const { return t_max_; }

  void check_domain(double s, double t) const {
    const double es = 1e-12 * (s_max() - s_min()), et = 1e-12 * (t_max_ - t_min_);
    if (s < s_min() - es || s > s_max() + es || t < t_min_ - et || t > t_max_ + et)
      throw Error(ErrorKind::out_of_domain, "(s,t)=(" + std::to_string(s) + "," + std::to_string(t) + ")");
  }

  Vec3 operator()(double s, double t) const {
    check_domain(s, t);
    const RmfFrame f = frames_->frame(s);
    return curve().position(s) + ms_.a.value(s, t) * f.T + ms_.b.value(s, t) * f.U + ms_.c.value(s, t) * f.V;
  }

 private:
  std::shared_ptr<const FrameField> frames_;
  MarchingScale ms_;
  double t0_, t_min_, t_max_;
};

inline Vec3 evaluate_surface(const SurfacePencil& p, double s, double t) { return p(s, t); }

// n = phi1 T + phi2 U + phi3 V, unnormalized.
struct NormalComponents {
  double phi1 = 0.0, phi2 = 0.0, phi3 = 0.0;
  Vec3 n;
};

// Closed-form Ps x Pt in the moving frame. With T' = k1 U + k2 V, U' = -k1 T,
// V' = -k2 T, where k1 = kappa cos(theta) and k2 = -kappa sin(theta):
//   Ps = (1 + a_s - b k1 - c k2) T + (a k1 + b_s) U + (a k2 + c_s) V
//   Pt = a_t T + b_t U + c_t V
inline NormalComponents analytic_normal(const SurfacePencil& p, double s, double t) {
  p.check_domain(s, t);
  const RmfFrame f = p.frames().frame(s);
  const Vec3 r2 = p.curve().derivative(2, s);
  const double k1 = r2.dot(f.U), k2 = r2.dot(f.V);
  const auto& ms = p.scale();
  const double a = ms.a.value(s, t), b = ms.b.value(s, t), c = ms.c.value(s, t);
  const double as = ms.a.ds(s, t), bs = ms.b.ds(s, t), cs = ms.c.ds(s, t);
  const double at = ms.a.dt(s, t), bt = ms.b.dt(s, t), ct = ms.c.dt(s, t);

  const double e1 = 1.0 + as - b * k1 - c * k2;
  const double e2 = a * k1 + bs;
  const double e3 = a * k2 + cs;

  NormalComponents nc;
  nc.phi1 = ct * e2 - bt * e3;
  nc.phi2 = at * e3 - ct * e1;
  nc.phi3 = bt * e1 - at * e2;
  nc.n = nc.phi1 * f.T + nc.phi2 * f.U + nc.phi3 * f.V;
  return nc;
}

struct IsoparametricReport {
  double max_deviation = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

inline IsoparametricReport check_isoparametric(const SurfacePencil& p, std::size_t n, double tol = default_tol_iso) {
  if (n < 2) throw Error(ErrorKind::invalid_argument, "check_isoparametric needs n >= 2");
  IsoparametricReport rep;
  rep.tolerance = tol;
  for (std::size_t i = 0; i < n; ++i) {
    const double s = grid_node(p.s_min(), p.s_max(), i, n);
    try {
      rep.max_deviation = std::max(rep.max_deviation, (p(s, p.t0()) - p.curve().position(s)).norm());
    } catch (const Error& e) {
      throw IndexedError(e, i, s);
    }
  }
  rep.pass = rep.max_deviation <= tol;
  return rep;
}

struct GeodesicNode {
  double s = 0.0;
  double residual = 0.0;   // |sin(theta) phi2 + cos(theta) phi3|, must vanish
  double magnitude = 0.0;  // |cos(theta) phi2 - sin(theta) phi3|, must not vanish
  bool pass = false;
};

struct GeodesicReport {
  std::vector<GeodesicNode> nodes;
  double max_residual = 0.0;
  double min_magnitude = 0.0;
  double tol_eq = 0.0;
  double eps_reg = 0.0;
  bool pass = false;
};

// At t0 the isoparametric condition gives phi1 = 0, phi2 = -c_t, phi3 = b_t.
// Writing n in the Frenet basis, r is a geodesic iff the B-coefficient
// vanishes and the N-coefficient does not.
inline GeodesicReport geodesic_condition_report(const SurfacePencil& p, std::size_t n, double tol_eq = default_tol_eq,
                                                double eps_reg = default_eps_reg, double tol_iso = default_tol_iso) {
  const auto iso = check_isoparametric(p, n, tol_iso);
  if (!iso.pass)
    throw Error(ErrorKind::precondition,
                "curve is not the t0 iso-line (max deviation " + std::to_string(iso.max_deviation) + ")");
  GeodesicReport rep;
  rep.tol_eq = tol_eq;
  rep.eps_reg = eps_reg;
  rep.min_magnitude = std::numeric_limits<double>::infinity();
  rep.pass = true;
  rep.nodes.reserve(n);
  const auto& ms = p.scale();
  for (std::size_t i = 0; i < n; ++i) {
    const double s = grid_node(p.s_min(), p.s_max(), i, n);
    const double theta = p.frames().theta(s);
    if (!std::isfinite(theta))
      throw IndexedError(Error(ErrorKind::vanishing_curvature, "frame angle undefined"), i, s);
    const double phi2 = -ms.c.dt(s, p.t0());
    const double phi3 = ms.b.dt(s, p.t0());
    const double st = std::sin(theta), ct = std::cos(theta);
    GeodesicNode node;
    node.s = s;
    node.residual = std::fabs(st * phi2 + ct * phi3);
    node.magnitude = std::fabs(ct * phi2 - st * phi3);
    node.pass = node.residual <= tol_eq && node.magnitude >= eps_reg;
    rep.max_residual = std::max(rep.max_residual, node.residual);
    rep.min_magnitude = std::min(rep.min_magnitude, node.magnitude);
    rep.pass = rep.pass && node.pass;
    rep.nodes.push_back(node);
  }
  return rep;
}

// sin(phi(s)) / cos(phi(s)) weights for the frame angle phi = theta.
inline SWeight sin_theta_weight(std::shared_ptr<const FrameField> frames) {
  return {[frames](double s) -> std::array<double, 2> {
            const double th = frames->theta(s);
            return {std::sin(th), std::cos(th) * frames->theta_derivative(s)};
          },
          "sin(theta)"};
}

inline SWeight cos_theta_weight(std::shared_ptr<const FrameField> frames) {
  return {[frames](double s) -> std::array<double, 2> {
            const double th = frames->theta(s);
            return {std::cos(th), -std::sin(th) * frames->theta_derivative(s)};
          },
          "cos(theta)"};
}

// a = 0, b = f sin(theta), c = f cos(theta), requiring f(s,t0) = 0 and
// df/dt(s,t0) != 0 on an n-point s-grid.
inline MarchingScale from_sufficient_condition(const Expression& f, std::shared_ptr<const FrameField> frames,
                                               double t0, std::size_t n = 200, double eps_reg = default_eps_reg) {
  if (!frames) throw Error(ErrorKind::invalid_argument, "frame source required");
  const Expression ft = differentiate(f, Var::t);
  const Curve3& c = frames->curve();
  for (std::size_t i = 0; i < n; ++i) {
    const double s = grid_node(c.s_min(), c.s_max(), i, n);
    const double v = f(s, t0);
    if (std::fabs(v) > 1e-12)
      throw IndexedError(Error(ErrorKind::precondition, "f(s,t0) != 0 (value " + std::to_string(v) + ")"), i, s);
    const double d = ft(s, t0);
    if (std::fabs(d) < eps_reg)
      throw IndexedError(Error(ErrorKind::precondition, "df/dt(s,t0) vanishes; surface normal degenerates"), i, s);
    if (!std::isfinite(frames->theta(s)))
      throw IndexedError(Error(ErrorKind::vanishing_curvature, "frame angle undefined"), i, s);
  }
  return {ScaleFunction(Expression(0.0)), ScaleFunction(f, sin_theta_weight(frames)),
          ScaleFunction(f, cos_theta_weight(frames))};
}

}  // namespace gpencil
