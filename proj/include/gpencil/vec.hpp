#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

namespace gpencil {

using Vec3 = Eigen::Vector3d;

inline double det3(const Vec3& a, const Vec3& b, const Vec3& c) { return a.dot(b.cross(c)); }

// Linear grid with both endpoints; node i of n.
inline double grid_node(double lo, double hi, std::size_t i, std::size_t n) {
  if (i + 1 == n) return hi;
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

// Cubic Hermite basis on [0,1]; h is the interval length.
struct Hermite {
  double h00, h10, h01, h11;
  double d00, d10, d01, d11;  // derivatives w.r.t. the physical variable

  Hermite(double u, double h) {
    const double u2 = u * u, u3 = u2 * u;
    h00 = 2 * u3 - 3 * u2 + 1;
    h10 = (u3 - 2 * u2 + u) * h;
    h01 = -2 * u3 + 3 * u2;
    h11 = (u3 - u2) * h;
    d00 = (6 * u2 - 6 * u) / h;
    d10 = 3 * u2 - 4 * u + 1;
    d01 = (-6 * u2 + 6 * u) / h;
    d11 = 3 * u2 - 2 * u;
  }
};

}  // namespace gpencil
