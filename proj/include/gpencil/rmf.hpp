#pragma once

// Rotation-minimizing frames {T, U, V} along an arc-length curve.
//
// Two constructions are provided and cross-checked in the tests:
//   * rotate the Frenet pair (N, B) by an angle theta with theta' = -tau;
//   * integrate U' = -(U . r'') r' directly, which also works where kappa = 0.

#include "curve.hpp"
#include "errors.hpp"
#include "vec.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace gpencil {

inline constexpr std::size_t default_frame_steps = 2000;

struct RmfFrame {
  double s = 0.0;
  Vec3 T, U, V;
  double theta = std::numeric_limits<double>::quiet_NaN();
};

// theta(s) on a uniform grid; dtheta holds -tau at the nodes.
struct ThetaTable {
  std::vector<double> s;
  std::vector<double> theta;
  std::vector<double> dtheta;

  std::size_t size() const { return s.size(); }

  double value(double x) const { return eval(x, false); }
  double derivative(double x) const { return eval(x, true); }

 private:
  double eval(double x, bool deriv) const {
    const std::size_t n = s.size();
    const double lo = s.front(), hi = s.back();
    const double h = (hi - lo) / static_cast<double>(n - 1);
    double fi = (x - lo) / h;
    std::size_t i = fi <= 0.0 ? 0 : static_cast<std::size_t>(fi);
    if (i >= n - 1) i = n - 2;
    const double u = (x - s[i]) / (s[i + 1] - s[i]);
    const Hermite hb(u, s[i + 1] - s[i]);
    if (deriv) return hb.d00 * theta[i] + hb.d10 * dtheta[i] + hb.d01 * theta[i + 1] + hb.d11 * dtheta[i + 1];
    return hb.h00 * theta[i] + hb.h10 * dtheta[i] + hb.h01 * theta[i + 1] + hb.h11 * dtheta[i + 1];
  }
};

// Solves theta' = -tau(s), theta(s_min) = theta0 with fixed-step RK4.
inline ThetaTable integrate_theta(const Curve3& c, double theta0, std::size_t steps = default_frame_steps,
                                  double kappa_min = default_kappa_min) {
  if (steps < 1) throw Error(ErrorKind::invalid_argument, "integrate_theta needs at least one step");
  const std::size_t n = steps + 1;
  const double h = c.span() / static_cast<double>(steps);
  auto neg_tau = [&](std::size_t i, double s) {
    try {
      return -frenet_apparatus(c, s, kappa_min).tau;
    } catch (const Error& e) {
      throw IndexedError(e, i, s);
    }
  };

  ThetaTable tab;
  tab.s.resize(n);
  tab.theta.resize(n);
  tab.dtheta.resize(n);
  tab.s[0] = c.s_min();
  tab.theta[0] = theta0;
  tab.dtheta[0] = neg_tau(0, c.s_min());
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double s0 = tab.s[i];
    const double s1 = grid_node(c.s_min(), c.s_max(), i + 1, n);
    const double k1 = tab.dtheta[i];
    const double k23 = neg_tau(i, s0 + 0.5 * h);
    const double k4 = neg_tau(i + 1, s1);
    tab.s[i + 1] = s1;
    tab.theta[i + 1] = tab.theta[i] + h / 6.0 * (k1 + 4.0 * k23 + k4);
    tab.dtheta[i + 1] = k4;
  }
  return tab;
}

// U = cos(theta) N + sin(theta) B,  V = -sin(theta) N + cos(theta) B.
inline RmfFrame rmf_from_frenet(const CurveApparatus& a, double theta) {
  const double ct = std::cos(theta), st = std::sin(theta);
  RmfFrame f;
  f.s = a.s;
  f.T = a.T;
  f.U = ct * a.N + st * a.B;
  f.V = -st * a.N + ct * a.B;
  f.theta = theta;
  return f;
}

namespace detail {

inline void orthonormalize(RmfFrame& f, const Vec3& tangent) {
  f.T = tangent.normalized();
  f.U = (f.U - f.U.dot(f.T) * f.T).normalized();
  f.V = f.T.cross(f.U);
}

// Angle from N to U, or NaN where the Frenet frame is undefined.
inline double frame_angle(const Curve3& c, const RmfFrame& f, double kappa_min) {
  const Vec3 r2 = c.derivative(2, f.s);
  if (r2.norm() <= kappa_min) return std::numeric_limits<double>::quiet_NaN();
  const Vec3 N = (r2 - r2.dot(f.T) * f.T).normalized();
  const Vec3 B = f.T.cross(N);
  return std::atan2(f.U.dot(B), f.U.dot(N));
}

}  // namespace detail

inline std::vector<RmfFrame> rmf_direct(const Curve3& c, const Vec3& U0, std::size_t steps = default_frame_steps,
                                        double kappa_min = default_kappa_min) {
  if (steps < 1) throw Error(ErrorKind::invalid_argument, "rmf_direct needs at least one step");
  const Vec3 T0 = c.derivative(1, c.s_min()).normalized();
  if (std::fabs(U0.norm() - 1.0) > 1e-10 || std::fabs(U0.dot(T0)) > 1e-10)
    throw Error(ErrorKind::initial_vector_not_normal, "U0 must be a unit vector orthogonal to T(s_min)");

  const std::size_t n = steps + 1;
  const double h = c.span() / static_cast<double>(steps);
  auto rhs = [&](double s, const Vec3& U) -> Vec3 { return -U.dot(c.derivative(2, s)) * c.derivative(1, s); };

  std::vector<RmfFrame> frames(n);
  frames[0].s = c.s_min();
  frames[0].U = U0;
  detail::orthonormalize(frames[0], T0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double s0 = frames[i].s;
    const Vec3& U = frames[i].U;
    const Vec3 k1 = rhs(s0, U);
    const Vec3 k2 = rhs(s0 + 0.5 * h, U + 0.5 * h * k1);
    const Vec3 k3 = rhs(s0 + 0.5 * h, U + 0.5 * h * k2);
    const Vec3 k4 = rhs(s0 + h, U + h * k3);
    RmfFrame& next = frames[i + 1];
    next.s = grid_node(c.s_min(), c.s_max(), i + 1, n);
    next.U = U + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    detail::orthonormalize(next, c.derivative(1, next.s));
  }

  // Unwrapped so consecutive angles never jump by more than pi.
  double prev = std::numeric_limits<double>::quiet_NaN();
  for (auto& f : frames) {
    double th = detail::frame_angle(c, f, kappa_min);
    if (std::isfinite(th) && std::isfinite(prev)) th += 2.0 * std::numbers::pi * std::round((prev - th) / (2.0 * std::numbers::pi));
    f.theta = th;
    prev = th;
  }
  return frames;
}

struct RmfReport {
  double max_uv = 0.0;  // max |U' . V|
  double max_vu = 0.0;  // max |V' . U|
  double tolerance = 0.0;
  bool pass = false;
};

// Checks U'.V = V'.U = 0 with central differences on a uniform grid:
// five-point stencils where two neighbours exist on each side, else three-point.
inline RmfReport check_rmf(const std::vector<RmfFrame>& frames, double tol) {
  const std::size_t n = frames.size();
  if (n < 3) throw Error(ErrorKind::invalid_argument, "check_rmf needs at least 3 frames");
  const double h = (frames.back().s - frames.front().s) / static_cast<double>(n - 1);
  if (!(h > 0.0)) throw Error(ErrorKind::invalid_argument, "frames must be ordered by increasing s");
  for (std::size_t i = 1; i < n; ++i) {
    if (std::fabs((frames[i].s - frames[i - 1].s) - h) > 1e-9 * std::max(1.0, std::fabs(h)))
      throw Error(ErrorKind::invalid_argument, "frames must lie on a uniform grid");
  }

  RmfReport rep;
  rep.tolerance = tol;
  auto visit = [&](std::size_t i, const Vec3& dU, const Vec3& dV) {
    rep.max_uv = std::max(rep.max_uv, std::fabs(dU.dot(frames[i].V)));
    rep.max_vu = std::max(rep.max_vu, std::fabs(dV.dot(frames[i].U)));
  };
  if (n >= 5) {
    for (std::size_t i = 2; i + 2 < n; ++i) {
      const Vec3 dU = (-frames[i + 2].U + 8.0 * frames[i + 1].U - 8.0 * frames[i - 1].U + frames[i - 2].U) / (12.0 * h);
      const Vec3 dV = (-frames[i + 2].V + 8.0 * frames[i + 1].V - 8.0 * frames[i - 1].V + frames[i - 2].V) / (12.0 * h);
      visit(i, dU, dV);
    }
  } else {
    for (std::size_t i = 1; i + 1 < n; ++i)
      visit(i, (frames[i + 1].U - frames[i - 1].U) / (2.0 * h), (frames[i + 1].V - frames[i - 1].V) / (2.0 * h));
  }
  rep.pass = rep.max_uv <= tol && rep.max_vu <= tol;
  return rep;
}

// Dense frame source for surface evaluation at arbitrary s.
class FrameField {
 public:
  // Frames rebuilt from the exact Frenet apparatus and an interpolated angle.
  static FrameField from_theta(Curve3 curve, ThetaTable theta, double kappa_min = default_kappa_min) {
    FrameField f(std::move(curve), kappa_min);
    f.theta_ = std::move(theta);
    return f;
  }

  // Frames Hermite-interpolated from a directly integrated table.
  static FrameField from_table(Curve3 curve, std::vector<RmfFrame> table, double kappa_min = default_kappa_min) {
    if (table.size() < 2) throw Error(ErrorKind::invalid_argument, "frame table needs at least two nodes");
    FrameField f(std::move(curve), kappa_min);
    f.table_ = std::move(table);
    return f;
  }

  const Curve3& curve() const { return curve_; }
  double kappa_min() const { return kappa_min_; }
  bool from_frenet() const { return theta_.has_value(); }

  RmfFrame frame(double s) const {
    if (theta_) return rmf_from_frenet(frenet_apparatus(curve_, s, kappa_min_), theta_->value(s));
    return interpolate(s);
  }

  // Angle from N to U; NaN where undefined.
  double theta(double s) const {
    if (theta_) return theta_->value(s);
    const auto [i, u] = locate(s);
    return (1.0 - u) * table_[i].theta + u * table_[i + 1].theta;
  }

  double theta_derivative(double s) const {
    if (theta_) return theta_->derivative(s);
    const auto [i, u] = locate(s);
    return (table_[i + 1].theta - table_[i].theta) / (table_[i + 1].s - table_[i].s);
  }

  // Frames at the underlying grid nodes.
  std::vector<RmfFrame> nodes() const {
    if (!theta_) return table_;
    std::vector<RmfFrame> out;
    out.reserve(theta_->size());
    for (std::size_t i = 0; i < theta_->size(); ++i)
      out.push_back(rmf_from_frenet(frenet_apparatus(curve_, theta_->s[i], kappa_min_), theta_->theta[i]));
    return out;
  }

 private:
  FrameField(Curve3 curve, double kappa_min) : curve_(std::move(curve)), kappa_min_(kappa_min) {}

  std::pair<std::size_t, double> locate(double s) const {
    const std::size_t n = table_.size();
    const double lo = table_.front().s, hi = table_.back().s;
    const double fi = (s - lo) / (hi - lo) * static_cast<double>(n - 1);
    std::size_t i = fi <= 0.0 ? 0 : static_cast<std::size_t>(fi);
    if (i >= n - 1) i = n - 2;
    return {i, (s - table_[i].s) / (table_[i + 1].s - table_[i].s)};
  }

  RmfFrame interpolate(double s) const {
    const auto [i, u] = locate(s);
    const RmfFrame& a = table_[i];
    const RmfFrame& b = table_[i + 1];
    const Hermite hb(u, b.s - a.s);
    const Vec3 ra = curve_.derivative(2, a.s), rb = curve_.derivative(2, b.s);
    const Vec3 dUa = -a.U.dot(ra) * a.T, dUb = -b.U.dot(rb) * b.T;
    RmfFrame f;
    f.s = s;
    f.U = hb.h00 * a.U + hb.h10 * dUa + hb.h01 * b.U + hb.h11 * dUb;
    detail::orthonormalize(f, curve_.derivative(1, s));
    f.theta = (1.0 - u) * a.theta + u * b.theta;
    return f;
  }

  Curve3 curve_;
  double kappa_min_;
  std::optional<ThetaTable> theta_;
  std::vector<RmfFrame> table_;
};

struct FrameOptions {
  double theta0 = 0.0;
  std::optional<Vec3> U0;
  std::size_t steps = default_frame_steps;
  double kappa_min = default_kappa_min;
};

// theta-integration when the Frenet frame exists everywhere and no U0 is
// given; otherwise the direct ODE, which then requires U0.
inline FrameField build_frames(const Curve3& c, const FrameOptions& opt) {
  if (opt.U0) return FrameField::from_table(c, rmf_direct(c, *opt.U0, opt.steps, opt.kappa_min), opt.kappa_min);
  if (!frenet_defined(c, opt.steps + 1, opt.kappa_min))
    throw Error(ErrorKind::vanishing_curvature, "Frenet frame undefined on the grid; supply U0 for the direct RMF");
  return FrameField::from_theta(c, integrate_theta(c, opt.theta0, opt.steps, opt.kappa_min), opt.kappa_min);
}

}  // namespace gpencil
