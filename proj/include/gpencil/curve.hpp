#pragma once

// Arc-length space curves and their Frenet apparatus.

#include "errors.hpp"
#include "expr.hpp"
#include "vec.hpp"

#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace gpencil {

inline constexpr double default_kappa_min = 1e-9;

class Curve3 {
 public:
  Curve3(Expression x, Expression y, Expression z, double s_min, double s_max)
      : s_min_(s_min), s_max_(s_max) {
    const Expression comps[3] = {std::move(x), std::move(y), std::move(z)};
    for (int c = 0; c < 3; ++c) {
      if (comps[c].depends_on(Var::t))
        throw Error(ErrorKind::invalid_argument, "curve component references t: " + comps[c].to_string());
    }
    if (!(s_min < s_max)) throw Error(ErrorKind::invalid_argument, "curve domain requires s_min < s_max");
    for (int c = 0; c < 3; ++c) {
      derivs_[0][c] = comps[c];
      for (int k = 1; k <= 3; ++k) derivs_[k][c] = differentiate(derivs_[k - 1][c], Var::s);
    }
  }

  static Curve3 parse(std::string_view x, std::string_view y, std::string_view z, double s_min, double s_max) {
    return Curve3(gpencil::parse(x), gpencil::parse(y), gpencil::parse(z), s_min, s_max);
  }

  double s_min() const { return s_min_; }
  double s_max() const { return s_max_; }
  double span() const { return s_max_ - s_min_; }

  const Expression& component(int c) const { return derivs_[0][c]; }

  // order 0..3: r, r', r'', r'''
  Vec3 derivative(int order, double s) const {
    const auto& d = derivs_[order];
    return {d[0](s, 0.0), d[1](s, 0.0), d[2](s, 0.0)};
  }

  Vec3 position(double s) const { return derivative(0, s); }

 private:
  std::array<std::array<Expression, 3>, 4> derivs_;
  double s_min_;
  double s_max_;
};

struct UnitSpeedReport {
  double max_deviation = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

inline UnitSpeedReport check_unit_speed(const Curve3& c, std::size_t n, double tol) {
  if (n < 2) throw Error(ErrorKind::invalid_argument, "check_unit_speed needs n >= 2");
  UnitSpeedReport rep;
  rep.tolerance = tol;
  for (std::size_t i = 0; i < n; ++i) {
    const double s = grid_node(c.s_min(), c.s_max(), i, n);
    try {
      rep.max_deviation = std::max(rep.max_deviation, std::fabs(c.derivative(1, s).norm() - 1.0));
    } catch (const Error& e) {
      throw IndexedError(e, i, s);
    }
  }
  rep.pass = rep.max_deviation <= tol;
  return rep;
}

struct CurveApparatus {
  double s = 0.0;
  Vec3 r, r1, r2, r3;
  Vec3 T, N, B;
  double kappa = 0.0;
  double tau = 0.0;
};

inline double torsion_from_derivatives(const Vec3& r1, const Vec3& r2, const Vec3& r3) {
  // Squared denominator: det(r', r'', r''') / |r' x r''|^2.
  return det3(r1, r2, r3) / r1.cross(r2).squaredNorm();
}

inline CurveApparatus frenet_apparatus(const Curve3& c, double s, double kappa_min = default_kappa_min) {
  CurveApparatus a;
  a.s = s;
  a.r = c.derivative(0, s);
  a.r1 = c.derivative(1, s);
  a.r2 = c.derivative(2, s);
  a.r3 = c.derivative(3, s);
  a.kappa = a.r2.norm();
  if (a.kappa <= kappa_min)
    throw Error(ErrorKind::vanishing_curvature, "kappa=" + std::to_string(a.kappa) + " at s=" + std::to_string(s));
  a.T = a.r1.normalized();
  a.N = (a.r2 - a.r2.dot(a.T) * a.T).normalized();
  a.B = a.T.cross(a.N);
  a.tau = torsion_from_derivatives(a.r1, a.r2, a.r3);
  return a;
}

// Torsion with r''' replaced by a central difference of the symbolic r''.
inline double torsion_fd(const Curve3& c, double s, double h = 1e-4) {
  const Vec3 r1 = c.derivative(1, s);
  const Vec3 r2 = c.derivative(2, s);
  const Vec3 r3 = (c.derivative(2, s + h) - c.derivative(2, s - h)) / (2.0 * h);
  return torsion_from_derivatives(r1, r2, r3);
}

inline std::vector<CurveApparatus> sample_apparatus(const Curve3& c, std::size_t n,
                                                    double kappa_min = default_kappa_min) {
  if (n < 2) throw Error(ErrorKind::invalid_argument, "sample_apparatus needs n >= 2");
  std::vector<CurveApparatus> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = grid_node(c.s_min(), c.s_max(), i, n);
    try {
      out.push_back(frenet_apparatus(c, s, kappa_min));
    } catch (const Error& e) {
      throw IndexedError(e, i, s);
    }
  }
  return out;
}

// True when the Frenet frame exists at every node of an n-point grid.
inline bool frenet_defined(const Curve3& c, std::size_t n, double kappa_min = default_kappa_min) {
  for (std::size_t i = 0; i < n; ++i) {
    if (c.derivative(2, grid_node(c.s_min(), c.s_max(), i, n)).norm() <= kappa_min) return false;
  }
  return true;
}

}  // namespace gpencil
