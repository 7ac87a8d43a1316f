#include "gpencil/fixtures.hpp"
#include "gpencil/jobs.hpp"
#include "gpencil/mesh_io.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

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

std::size_t count_prefix(const std::string& text, const std::string& prefix) {
  std::istringstream is(text);
  std::string line;
  std::size_t n = 0;
  while (std::getline(is, line))
    if (line.rfind(prefix, 0) == 0) ++n;
  return n;
}

}  // namespace

TEST(SnappedGrid, HitsT0) {
  const auto [ts, row] = snapped_t_grid(0, 2 * pi, pi / 2, 128);
  ASSERT_TRUE(row);
  EXPECT_EQ(ts[*row], pi / 2);
  EXPECT_EQ(ts.front(), 0.0);
  EXPECT_EQ(ts.back(), 2 * pi);
  for (std::size_t j = 1; j < ts.size(); ++j) EXPECT_LT(ts[j - 1], ts[j]);
  EXPECT_EQ(*snapped_t_grid(0, 1, 0, 5).second, 0u);
  EXPECT_EQ(*snapped_t_grid(0, 1, 1, 5).second, 4u);
}

TEST(Tessellate, SphereOnUnitSphere) {
  Fixture p3("P3");
  const auto g = tessellate(p3.pencil, 64, 64);
  ASSERT_EQ(g.points.size(), 64u * 64u);
  for (const Vec3& v : g.points) EXPECT_LE(std::fabs(v.norm() - 1.0), 1e-12);
}

TEST(Tessellate, Corners) {
  Fixture p4("P4");
  const auto g = tessellate(p4.pencil, 2, 2);
  EXPECT_EQ(g.s_values, (std::vector<double>{-pi, pi}));
  EXPECT_EQ(g.t_values, (std::vector<double>{-1.0, 1.0}));
  EXPECT_LT((g.point(0, 0) - Vec3(-1, 0, -1)).norm(), 1e-15);
  EXPECT_LT((g.point(1, 1) - Vec3(-1, 0, 1)).norm(), 1e-15);
}

TEST(Tessellate, CurveRow) {
  Fixture p1("P1");
  const auto g = tessellate(p1.pencil, 128, 128);
  ASSERT_TRUE(g.curve_row);
  for (std::size_t i = 0; i < g.ns; ++i)
    EXPECT_LT((g.point(i, *g.curve_row) - p1.pencil.curve().position(g.s_values[i])).norm(), 1e-9);
}

TEST(Obj, Counts) {
  Fixture p4("P4");
  const std::string two = obj_text(tessellate(p4.pencil, 2, 2));
  EXPECT_EQ(count_prefix(two, "v "), 4u);
  EXPECT_EQ(count_prefix(two, "f "), 1u);
  const std::string six = obj_text(tessellate(p4.pencil, 3, 2));
  EXPECT_EQ(count_prefix(six, "v "), 6u);
  EXPECT_EQ(count_prefix(six, "f "), 2u);
  EXPECT_EQ(count_prefix(six, "l "), 0u);  // t0 = 0 is not a node of the 2-row grid
  const std::string nine = obj_text(tessellate(p4.pencil, 3, 3));
  EXPECT_EQ(count_prefix(nine, "f "), 4u);
  EXPECT_EQ(count_prefix(nine, "l "), 1u);
}

TEST(Obj, RoundTripIsExact) {
  Fixture p2("P2");
  const auto g = tessellate(p2.pencil, 40, 20);
  std::istringstream is(obj_text(g));
  const ObjMesh m = read_obj(is);
  ASSERT_EQ(m.vertices.size(), g.points.size());
  for (std::size_t k = 0; k < m.vertices.size(); ++k) EXPECT_EQ(m.vertices[k], g.points[k]);
  EXPECT_EQ(m.faces.size(), 39u * 19u);
  EXPECT_EQ(m.polyline.size(), 40u);
}

// Faces are wound counterclockwise in (s,t), so the face normal follows
// Ps x Pt = cos(t) P on the sphere: outward on the sheet with cos t > 0 and
// inward on the second sheet the t-range [0, 2pi] sweeps. Never mixed within
// a sheet.
TEST(Obj, SphereOrientationConsistent) {
  Fixture p3("P3");
  const auto g = tessellate(p3.pencil, 48, 48, false);
  std::istringstream is(obj_text(g));
  const ObjMesh m = read_obj(is);
  ASSERT_EQ(m.faces.size(), 47u * 47u);
  std::size_t k = 0, outward = 0, checked = 0;
  for (std::size_t j = 0; j + 1 < g.nt; ++j)
    for (std::size_t i = 0; i + 1 < g.ns; ++i, ++k) {
      const auto& f = m.faces[k];
      const Vec3 &a = m.vertices[f[0] - 1], &b = m.vertices[f[1] - 1], &c = m.vertices[f[2] - 1], &d = m.vertices[f[3] - 1];
      const Vec3 n = (c - a).cross(d - b);
      if (n.norm() < 1e-14) continue;  // collapsed quads at the poles
      const double sheet = std::cos(0.5 * (g.t_values[j] + g.t_values[j + 1]));
      if (std::fabs(sheet) < 1e-9) continue;
      const bool out = n.dot(a + b + c + d) > 0;
      EXPECT_EQ(out, sheet > 0) << i << "," << j;
      outward += out;
      ++checked;
    }
  EXPECT_GT(outward, 0u);
  EXPECT_GT(checked, 2000u);
}

TEST(Csv, FrameTable) {
  Fixture p1("P1");
  std::istringstream is(frames_csv_text(frame_table(*p1.frames, 3)));
  const CsvTable t = read_csv(is);
  EXPECT_EQ(t.header.size(), 13u);
  EXPECT_EQ(t.header.front(), "s");
  EXPECT_EQ(t.header.back(), "tau");
  ASSERT_EQ(t.rows.size(), 3u);
  EXPECT_NEAR(t.rows[1][11], 0.6, 1e-12);
  EXPECT_NEAR(t.rows[1][12], -0.8, 1e-12);
}

TEST(Csv, DefectTable) {
  Fixture p2("P2");
  RuledSpec spec;
  spec.g = RulingCoefficient::parse(p2.cfg.g);
  std::istringstream is(defects_csv_text(defect_table(*p2.frames, spec, 100)));
  const CsvTable t = read_csv(is);
  EXPECT_EQ(t.header, (std::vector<std::string>{"s", "tau", "kappa", "g", "defect"}));
  for (const auto& row : t.rows) EXPECT_LE(std::fabs(row[4]), 1e-9);
}

TEST(Csv, GridRoundTrip) {
  Fixture p4("P4");
  const auto g = tessellate(p4.pencil, 5, 4);
  std::istringstream is(grid_csv_text(g));
  const CsvTable t = read_csv(is);
  ASSERT_EQ(t.rows.size(), 20u);
  EXPECT_EQ(t.header.size(), 10u);
  for (std::size_t k = 0; k < t.rows.size(); ++k) EXPECT_EQ(Vec3(t.rows[k][4], t.rows[k][5], t.rows[k][6]), g.points[k]);
}

TEST(Csv, EmptyInputsAreErrors) {
  EXPECT_THROW(grid_csv_text(SurfaceGrid{}), Error);
  EXPECT_THROW(obj_text(SurfaceGrid{}), Error);
  EXPECT_THROW(frames_csv_text({}), Error);
  EXPECT_THROW(defects_csv_text({}), Error);
  std::istringstream empty("");
  EXPECT_THROW(read_csv(empty), Error);
}
