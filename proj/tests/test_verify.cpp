#include "gpencil/fixtures.hpp"
#include "gpencil/jobs.hpp"
#include "gpencil/verify.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace gpencil;

namespace {

constexpr double pi = std::numbers::pi;

struct Fixture {
  JobConfig cfg;
  std::shared_ptr<const FrameField> frames;
  SurfacePencil pencil;

  explicit Fixture(const char* id)
      : cfg(fixtures::config(id)),
        frames(build_frame_field(cfg, build_curve(cfg))),
        pencil(build_pencil(cfg, frames)) {}
};

Curve3 circle() { return Curve3::parse(fixtures::circle_x, fixtures::circle_y, fixtures::circle_z, 0, 2 * pi); }

// The plane z = 0 written as an explicit surface through the unit circle.
SurfaceProbe plane(double sign = 1.0) {
  return SurfaceProbe([sign](double s, double t) { return Vec3((1 - sign * t) * std::cos(s), (1 - sign * t) * std::sin(s), 0.0); },
                      0, 2 * pi, -0.5, 0.5);
}

}  // namespace

TEST(Probe, RejectsOversizedSteps) {
  auto f = [](double s, double t) { return Vec3(s, t, 0); };
  EXPECT_THROW(SurfaceProbe(f, 0, 1, 0, 1, 0.3, 0.01), Error);
  EXPECT_NO_THROW(SurfaceProbe(f, 0, 1, 0, 1));
}

TEST(NumericNormal, SphereIsRadial) {
  Fixture p3("P3");
  const auto probe = SurfaceProbe::of(p3.pencil);
  for (double s : {0.3, 2.0, 5.0})
    for (double t : {0.2, 1.0, 2.6}) {
      const Vec3 n = numeric_normal(probe, s, t);
      EXPECT_LT(n.cross(p3.pencil(s, t)).norm(), 1e-6);
    }
}

TEST(NumericNormal, CylinderIsHorizontal) {
  Fixture p4("P4");
  const auto probe = SurfaceProbe::of(p4.pencil);
  for (double s : {-3.0, 0.0, 1.0})
    for (double t : {-0.9, 0.4}) {
      const Vec3 n = numeric_normal(probe, s, t);
      EXPECT_LT(std::fabs(std::fabs(n.dot(Vec3(std::cos(s), std::sin(s), 0))) - 1.0), 1e-6);
    }
}

TEST(NumericNormal, ConeApexIsDegenerate) {
  Fixture p5("P5");
  const auto probe = SurfaceProbe::of(p5.pencil);
  const double apex = pi / 3 + 2 / std::sqrt(3.0);
  try {
    numeric_normal(probe, 1.0, apex);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::degenerate_normal);
  }
}

TEST(GeodesicCurvature, SphereAndCylinder) {
  Fixture p3("P3"), p4("P4");
  EXPECT_LE(geodesic_curvature_along(SurfaceProbe::of(p3.pencil), p3.pencil.curve(), 0.0, 200).max_abs, 1e-5);
  EXPECT_LE(geodesic_curvature_along(SurfaceProbe::of(p4.pencil), p4.pencil.curve(), 0.0, 200).max_abs, 1e-5);
}

TEST(GeodesicCurvature, PlaneGivesCurvature) {
  const auto rep = geodesic_curvature_along(plane(), circle(), 0.0, 100);
  for (double k : rep.kg) EXPECT_NEAR(std::fabs(k), 1.0, 1e-6);
}

TEST(GeodesicCurvature, OrientationFlipsSign) {
  const auto a = geodesic_curvature_along(plane(1.0), circle(), 0.0, 20);
  const auto b = geodesic_curvature_along(plane(-1.0), circle(), 0.0, 20);
  for (std::size_t i = 0; i < a.kg.size(); ++i) {
    EXPECT_NEAR(a.kg[i], -b.kg[i], 1e-9);
    EXPECT_NEAR(std::fabs(a.kg[i]), std::fabs(b.kg[i]), 1e-9);
  }
}

TEST(GeodesicCurvature, CurveMustLieOnSurface) {
  try {
    geodesic_curvature_along(plane(), circle(), 0.25, 10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::curve_not_on_surface);
  }
}

// Halving h at least halves the FD error until the roundoff floor. Along the
// equator k_g is already at the floor by symmetry, so the error of the normal
// off the equator is tracked as well.
TEST(GeodesicCurvature, SecondOrderConvergence) {
  Fixture p3("P3");
  const auto& p = p3.pencil;
  auto residual = [&](double h) {
    SurfaceProbe probe([&p](double s, double t) { return p(s, t); }, p.s_min(), p.s_max(), p.t_min(), p.t_max(), h, h);
    double m = geodesic_curvature_along(probe, p.curve(), 0.0, 50).max_abs;
    for (double s = 0.1; s < 6; s += 0.5) {
      const double t = 0.0;
      const Vec3 n = numeric_normal(probe, s, t + 0.3);
      const Vec3 exact = p(s, t + 0.3);
      m = std::max(m, n.cross(exact).norm());
    }
    return m;
  };
  double prev = residual(0.04);
  for (double h = 0.02; h > 1e-3; h /= 2) {
    const double cur = residual(h);
    if (prev < 1e-8) break;
    EXPECT_LT(cur, prev / 2) << h;
    prev = cur;
  }
}

TEST(Gauss, SphereCylinderPlane) {
  Fixture p3("P3"), p4("P4");
  const auto s3 = SurfaceProbe::of(p3.pencil);
  for (double s : {0.5, 3.0})
    for (double t : {0.4, 2.5, 4.0}) EXPECT_NEAR(gaussian_curvature(s3, s, t), 1.0, 1e-3);
  const auto s4 = SurfaceProbe::of(p4.pencil);
  for (double s : {-2.0, 1.0})
    for (double t : {-0.5, 0.5}) EXPECT_LE(std::fabs(gaussian_curvature(s4, s, t)), 1e-6);
  EXPECT_NEAR(gaussian_curvature(plane(), 1.0, 0.1), 0.0, 1e-9);
  EXPECT_THROW(gaussian_curvature(s3, 0.0, 1.0), Error);
}

TEST(Regularity, DegeneratePencilIsAllFlagged) {
  const auto frames = std::make_shared<const FrameField>(build_frames(circle(), FrameOptions{}));
  const SurfacePencil p(frames, MarchingScale::from_expressions(parse("0"), parse("0"), parse("0")), 0, -1, 1);
  const std::vector<double> ss = {0.5, 1.0, 2.0}, ts = {-0.5, 0.0, 0.5};
  const auto rep = regularity_scan(SurfaceProbe::of(p), ss, ts);
  EXPECT_EQ(rep.flagged.size(), 9u);
  EXPECT_EQ(rep.min_norm, 0.0);
}

TEST(Regularity, ConeApexLine) {
  Fixture p5("P5");
  const double apex = pi / 3 + 2 / std::sqrt(3.0);
  const std::vector<double> ss = {0.5, 1.5, 3.0, 4.5}, ts = {0.5, 1.5, apex, 3.0, 5.0};
  const auto rep = regularity_scan(SurfaceProbe::of(p5.pencil), ss, ts);
  ASSERT_EQ(rep.flagged.size(), ss.size());
  for (const auto& [i, j] : rep.flagged) EXPECT_EQ(j, 2u);
}

// The helix pencil with the printed scales has P_t = 0 wherever
// sin(4s/5) cos t = cos(4s/5) sin t = 0, e.g. at the corner (0, 0); every
// flagged grid point is such a zero.
TEST(Regularity, HelixPencilSingularities) {
  Fixture p1("P1");
  const auto grid = tessellate(p1.pencil, p1.cfg.ns, p1.cfg.nt, false);
  const auto rep = regularity_scan(SurfaceProbe::of(p1.pencil), grid.s_values, grid.t_values);
  ASSERT_FALSE(rep.flagged.empty());
  EXPECT_EQ(rep.flagged.front(), std::make_pair(std::size_t{0}, std::size_t{0}));
  for (const auto& [i, j] : rep.flagged) {
    const double s = grid.s_values[i], t = grid.t_values[j];
    EXPECT_LT(std::hypot(std::sin(0.8 * s) * std::cos(t), std::cos(0.8 * s) * std::sin(t)), 1e-5) << s << " " << t;
  }
}
