#pragma once

// Ruled members of the pencil: P(s,t) = r + (t - t0) d(s),
// d = g T + sin(phi) U + cos(phi) V, where phi is the frame angle unless
// overridden. The surface is developable iff det(r', d, d') = 0.

#include "curve.hpp"
#include "errors.hpp"
#include "expr.hpp"
#include "pencil.hpp"
#include "rmf.hpp"

#include <array>
#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace gpencil {

inline constexpr double default_tol_dev = 1e-9;

// g(s): an expression in s, or tau/kappa taken from the Frenet apparatus.
class RulingCoefficient {
 public:
  static RulingCoefficient expression(Expression g) {
    if (g.depends_on(Var::t)) throw Error(ErrorKind::invalid_argument, "g must depend on s only");
    RulingCoefficient r;
    r.dg_ = differentiate(g, Var::s);
    r.g_ = std::move(g);
    return r;
  }

  static RulingCoefficient tau_over_kappa() { return RulingCoefficient(); }

  // Accepts an expression or the reserved token "tau/kappa".
  static RulingCoefficient parse(std::string_view text) {
    std::string compact;
    for (char ch : text)
      if (ch != ' ' && ch != '\t') compact += ch;
    if (compact == "tau/kappa") return tau_over_kappa();
    return expression(gpencil::parse(text));
  }

  bool is_tau_over_kappa() const { return !g_.has_value(); }

  std::array<double, 2> eval(const Curve3& c, double s, double kappa_min = default_kappa_min) const {
    if (g_) return {(*g_)(s, 0.0), (*dg_)(s, 0.0)};
    auto g = [&](double x) {
      const auto a = frenet_apparatus(c, x, kappa_min);
      return a.tau / a.kappa;
    };
    const double h = 1e-4;
    double dg;
    if (s - 2 * h >= c.s_min() && s + 2 * h <= c.s_max())
      dg = (-g(s + 2 * h) + 8 * g(s + h) - 8 * g(s - h) + g(s - 2 * h)) / (12 * h);
    else if (s - 2 * h < c.s_min())
      dg = (-3 * g(s) + 4 * g(s + h) - g(s + 2 * h)) / (2 * h);
    else
      dg = (3 * g(s) - 4 * g(s - h) + g(s - 2 * h)) / (2 * h);
    return {g(s), dg};
  }

  std::string describe() const { return g_ ? g_->to_string() : "tau/kappa"; }

 private:
  RulingCoefficient() = default;
  std::optional<Expression> g_, dg_;
};

struct RuledSpec {
  RulingCoefficient g = RulingCoefficient::expression(Expression(0.0));
  double t0 = 0.0;
  // Angle used in sin/cos of the director; the frame angle when empty.
  std::optional<Expression> ruling_angle;
};

namespace detail {

struct AngleSample {
  double phi, dphi;
};

inline AngleSample ruling_angle_at(const FrameField& frames, const RuledSpec& spec, double s) {
  if (spec.ruling_angle) {
    const Expression& e = *spec.ruling_angle;
    return {e(s, 0.0), differentiate(e, Var::s)(s, 0.0)};
  }
  return {frames.theta(s), frames.theta_derivative(s)};
}

}  // namespace detail

inline SurfacePencil make_ruled(std::shared_ptr<const FrameField> frames, const RuledSpec& spec, double t_min,
                                double t_max) {
  if (!frames) throw Error(ErrorKind::invalid_argument, "frame source required");
  const Curve3& c = frames->curve();
  const Expression lever = Expression::variable(Var::t) - Expression(spec.t0);

  SWeight gw{[frames, g = spec.g](double s) { return g.eval(frames->curve(), s, frames->kappa_min()); },
             spec.g.describe()};

  SWeight sw, cw;
  if (spec.ruling_angle) {
    if (spec.ruling_angle->depends_on(Var::t))
      throw Error(ErrorKind::invalid_argument, "ruling angle must depend on s only");
    const Expression phi = *spec.ruling_angle;
    const Expression dphi = differentiate(phi, Var::s);
    sw = {[phi, dphi](double s) -> std::array<double, 2> {
            const double v = phi(s, 0.0);
            return {std::sin(v), std::cos(v) * dphi(s, 0.0)};
          },
          "sin(" + phi.to_string() + ")"};
    cw = {[phi, dphi](double s) -> std::array<double, 2> {
            const double v = phi(s, 0.0);
            return {std::cos(v), -std::sin(v) * dphi(s, 0.0)};
          },
          "cos(" + phi.to_string() + ")"};
  } else {
    const std::size_t n = 64;
    for (std::size_t i = 0; i < n; ++i) {
      const double s = grid_node(c.s_min(), c.s_max(), i, n);
      if (!std::isfinite(frames->theta(s)))
        throw IndexedError(Error(ErrorKind::vanishing_curvature, "frame angle undefined"), i, s);
    }
    sw = sin_theta_weight(frames);
    cw = cos_theta_weight(frames);
  }

  MarchingScale ms{ScaleFunction(lever, std::move(gw)), ScaleFunction(lever, std::move(sw)),
                   ScaleFunction(lever, std::move(cw))};
  return SurfacePencil(std::move(frames), std::move(ms), spec.t0, t_min, t_max);
}

struct DefectSample {
  double s = 0.0;
  double tau = 0.0;
  double kappa = 0.0;
  double g = 0.0;
  double defect = 0.0;       // det(r', d, d')
  double closed_form = 0.0;  // tau - g kappa (general angle: -phi' - g kappa cos(phi - theta))
};

inline DefectSample developability_sample(const FrameField& frames, const RuledSpec& spec, double s) {
  const Curve3& c = frames.curve();
  const CurveApparatus app = frenet_apparatus(c, s, frames.kappa_min());
  const RmfFrame f = frames.frame(s);
  const auto [g, dg] = spec.g.eval(c, s, frames.kappa_min());
  const auto [phi, dphi] = detail::ruling_angle_at(frames, spec, s);
  const double sp = std::sin(phi), cp = std::cos(phi);

  const Vec3 dU = -f.U.dot(app.r2) * f.T;
  const Vec3 dV = -f.V.dot(app.r2) * f.T;
  const Vec3 d = g * f.T + sp * f.U + cp * f.V;
  const Vec3 dd = dg * f.T + g * app.r2 + dphi * cp * f.U + sp * dU - dphi * sp * f.V + cp * dV;

  DefectSample out;
  out.s = s;
  out.tau = app.tau;
  out.kappa = app.kappa;
  out.g = g;
  out.defect = det3(app.r1, d, dd);
  if (spec.ruling_angle)
    out.closed_form = -dphi - g * app.kappa * std::cos(phi - frames.theta(s));
  else
    out.closed_form = app.tau - g * app.kappa;
  return out;
}

// det(r', d, d'); throws if it disagrees with the closed form by more than 1e-9.
inline double developability_defect(const FrameField& frames, const RuledSpec& spec, double s) {
  const DefectSample d = developability_sample(frames, spec, s);
  if (std::fabs(d.defect - d.closed_form) > 1e-9)
    throw Error(ErrorKind::indeterminate, "determinant " + std::to_string(d.defect) + " disagrees with closed form " +
                                              std::to_string(d.closed_form) + " at s=" + std::to_string(s));
  return d.defect;
}

inline std::vector<DefectSample> defect_table(const FrameField& frames, const RuledSpec& spec, std::size_t n) {
  if (n < 2) throw Error(ErrorKind::invalid_argument, "defect table needs n >= 2");
  const Curve3& c = frames.curve();
  std::vector<DefectSample> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = grid_node(c.s_min(), c.s_max(), i, n);
    try {
      out.push_back(developability_sample(frames, spec, s));
    } catch (const Error& e) {
      throw IndexedError(e, i, s);
    }
  }
  return out;
}

// Ruled pencil with g = tau/kappa; requires kappa > kappa_min on the n-point grid.
inline SurfacePencil make_developable(std::shared_ptr<const FrameField> frames, double t0, double t_min, double t_max,
                                      std::size_t n = 200) {
  if (!frames) throw Error(ErrorKind::invalid_argument, "frame source required");
  sample_apparatus(frames->curve(), n, frames->kappa_min());
  RuledSpec spec;
  spec.g = RulingCoefficient::tau_over_kappa();
  spec.t0 = t0;
  return make_ruled(std::move(frames), spec, t_min, t_max);
}

}  // namespace gpencil
