#pragma once

// Job configurations for the five reference example surfaces. The same text
// is committed under configs/examples/ so runs can be reproduced from files.

#include "config.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace gpencil::fixtures {

// Unit-speed helix, kappa = 3/5, tau = -4/5.
inline constexpr std::string_view helix_x = "(3/5)*sin(s)";
inline constexpr std::string_view helix_y = "(3/5)*cos(s)";
inline constexpr std::string_view helix_z = "(4/5)*s";

// Unit circle, kappa = 1, tau = 0.
inline constexpr std::string_view circle_x = "cos(s)";
inline constexpr std::string_view circle_y = "sin(s)";
inline constexpr std::string_view circle_z = "0";

inline constexpr std::string_view p1 = R"(# Helix pencil with marching scale b = sin(4s/5)(sin t - 1), c = cos(4s/5) cos t.
name = P1
mode = pencil
curve-x = (3/5)*sin(s)
curve-y = (3/5)*cos(s)
curve-z = (4/5)*s
s-range = 0, 2*pi
t-range = 0, 2*pi
t0 = pi/2
theta0 = 0
a = 0
b = sin(4*s/5)*(sin(t) - 1)
c = cos(4*s/5)*cos(t)
grid = 128x128
)";

inline constexpr std::string_view p2 = R"(# Developable ruled helix surface, g = tau/kappa = -4/3.
name = P2
mode = ruled
curve-x = (3/5)*sin(s)
curve-y = (3/5)*cos(s)
curve-z = (4/5)*s
s-range = -2*pi, 2*pi
t-range = 0, 2*pi
t0 = 0
theta0 = -8*pi/5
g = -4/3
expect-developable = true
grid = 128x64
)";

inline constexpr std::string_view p3 = R"(# Unit sphere through the equator: b = 1 - cos t, c = sin t.
name = P3
mode = pencil
curve-x = cos(s)
curve-y = sin(s)
curve-z = 0
s-range = 0, 2*pi
t-range = 0, 2*pi
t0 = 0
theta0 = 0
a = 0
b = 1 - cos(t)
c = sin(t)
grid = 64x64
)";

inline constexpr std::string_view p4 = R"(# Cylinder over the unit circle, g = tau/kappa = 0.
name = P4
mode = ruled
curve-x = cos(s)
curve-y = sin(s)
curve-z = 0
s-range = -pi, pi
t-range = -1, 1
t0 = 0
theta0 = 0
g = 0
expect-developable = true
grid = 64x32
)";

inline constexpr std::string_view p5 = R"(# Cone over the unit circle: g = 0, t0 = pi/3, director angle pi/3 on the
# frame U = (-cos s, -sin s, 0), V = (0, 0, 1).
name = P5
mode = ruled
curve-x = cos(s)
curve-y = sin(s)
curve-z = 0
s-range = 0, 2*pi
t-range = 0, 2*pi
t0 = pi/3
theta0 = 0
g = 0
ruling-angle = pi/3
expect-developable = true
grid = 64x64
note = regenerated by substituting g = 0, t0 = pi/3 and director angle pi/3 into the ruled form
note = r + (t - t0)(g T + sin(angle) U + cos(angle) V); the printed coefficients are not reproduced
)";

inline const std::vector<std::string>& ids() {
  static const std::vector<std::string> v = {"P1", "P2", "P3", "P4", "P5"};
  return v;
}

inline std::string_view text(std::string_view id) {
  if (id == "P1") return p1;
  if (id == "P2") return p2;
  if (id == "P3") return p3;
  if (id == "P4") return p4;
  if (id == "P5") return p5;
  throw Error(ErrorKind::invalid_argument, "unknown example id '" + std::string(id) + "' (expected P1..P5)");
}

inline JobConfig config(std::string_view id) { return to_job_config(parse_config_text(text(id))); }

}  // namespace gpencil::fixtures
