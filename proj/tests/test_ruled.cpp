#include "gpencil/fixtures.hpp"
#include "gpencil/ruled.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace gpencil;

namespace {

constexpr double pi = std::numbers::pi;

std::shared_ptr<const FrameField> frames_for(const Curve3& c, double theta0 = 0.0) {
  FrameOptions opt;
  opt.theta0 = theta0;
  return std::make_shared<const FrameField>(build_frames(c, opt));
}

Curve3 helix(double lo = 0, double hi = 2 * pi) {
  return Curve3::parse(fixtures::helix_x, fixtures::helix_y, fixtures::helix_z, lo, hi);
}
Curve3 circle(double lo = 0, double hi = 2 * pi) {
  return Curve3::parse(fixtures::circle_x, fixtures::circle_y, fixtures::circle_z, lo, hi);
}

RuledSpec spec_g(const std::string& g, double t0 = 0.0) {
  RuledSpec s;
  s.g = RulingCoefficient::parse(g);
  s.t0 = t0;
  return s;
}

}  // namespace

TEST(RulingCoefficient, Parse) {
  EXPECT_TRUE(RulingCoefficient::parse(" tau / kappa ").is_tau_over_kappa());
  EXPECT_FALSE(RulingCoefficient::parse("-4/3").is_tau_over_kappa());
  EXPECT_THROW(RulingCoefficient::parse("t"), Error);
  const auto g = RulingCoefficient::tau_over_kappa().eval(helix(), 1.0);
  EXPECT_NEAR(g[0], -4.0 / 3.0, 1e-12);
  EXPECT_NEAR(g[1], 0.0, 1e-9);
}

TEST(Ruled, Cylinder) {
  const auto p = make_ruled(frames_for(circle(-pi, pi)), spec_g("0"), -1, 1);
  for (double s : {-pi, -1.0, 2.0, pi})
    for (double t : {-1.0, 0.0, 0.5}) EXPECT_LT((p(s, t) - Vec3(std::cos(s), std::sin(s), t)).norm(), 1e-12);
}

// Closed-form helix ruled surface for g = -4/3, t0 = 0, theta = 4s/5.
TEST(Ruled, HelixDevelopable) {
  const auto p = make_ruled(frames_for(helix(-2 * pi, 2 * pi), -8 * pi / 5), spec_g("-4/3"), 0, 2 * pi);
  for (double s : {-6.0, -1.0, 0.5, 6.2})
    for (double t : {0.0, 1.0, 6.0}) {
      const double a = 0.8 * s;
      const Vec3 U(-0.1 * std::sin(1.8 * s) - 0.9 * std::sin(0.2 * s), -0.1 * std::cos(1.8 * s) - 0.9 * std::cos(0.2 * s),
                   -0.6 * std::sin(a));
      const Vec3 V(-0.1 * std::cos(1.8 * s) + 0.9 * std::cos(0.2 * s), -0.9 * std::sin(0.2 * s) + 0.1 * std::sin(1.8 * s),
                   -0.6 * std::cos(a));
      const Vec3 expect = Vec3(0.6 * std::sin(s), 0.6 * std::cos(s), 0.8 * s) +
                          t * (Vec3(-0.8 * std::cos(s), 0.8 * std::sin(s), -16.0 / 15.0) + std::sin(a) * U + std::cos(a) * V);
      EXPECT_LT((p(s, t) - expect).norm(), 1e-8);
      EXPECT_NEAR(p(s, t).z(), 0.8 * s - 5.0 / 3.0 * t, 1e-8);
    }
}

TEST(Ruled, CurveAtT0) {
  const auto p = make_ruled(frames_for(helix()), spec_g("sin(s)", 0.4), -1, 1);
  for (double s : {0.0, 2.0, 6.0}) EXPECT_EQ(p(s, 0.4), p.curve().position(s));
}

TEST(Defect, Examples) {
  const auto hf = frames_for(helix());
  EXPECT_NEAR(developability_defect(*hf, spec_g("-4/3"), 1.0), 0.0, 1e-12);
  EXPECT_NEAR(developability_defect(*hf, spec_g("0"), 1.0), -0.8, 1e-9);
  EXPECT_NEAR(developability_defect(*frames_for(circle()), spec_g("0"), 2.0), 0.0, 1e-12);
  for (const auto& d : defect_table(*hf, spec_g("tau/kappa"), 50)) EXPECT_LT(std::fabs(d.defect), 1e-9);
}

// det(r', d, d') = tau - g kappa for random smooth g.
TEST(Defect, DeterminantIdentity) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> coef(-2, 2);
  const auto hf = frames_for(helix());
  for (int trial = 0; trial < 10; ++trial) {
    const std::string g = std::to_string(coef(rng)) + " + " + std::to_string(coef(rng)) + "*sin(" +
                          std::to_string(coef(rng)) + "*s) + " + std::to_string(coef(rng)) + "*s^2/10";
    for (const auto& d : defect_table(*hf, spec_g(g), 100)) {
      EXPECT_LT(std::fabs(d.defect - (d.tau - d.g * d.kappa)), 1e-9) << g;
    }
  }
}

TEST(Defect, RulingAngleOverride) {
  RuledSpec cone;
  cone.g = RulingCoefficient::parse("0");
  cone.t0 = pi / 3;
  cone.ruling_angle = parse("pi/3");
  const auto cf = frames_for(circle());
  for (const auto& d : defect_table(*cf, cone, 40)) {
    EXPECT_LT(std::fabs(d.defect), 1e-12);
    EXPECT_LT(std::fabs(d.closed_form), 1e-12);
  }
  const auto p = make_ruled(cf, cone, 0, 2 * pi);
  const double k = std::sqrt(3.0) / 2;
  for (double s : {0.0, 1.0, 4.0})
    for (double t : {0.0, 1.0, 3.0}) {
      const double l = t - pi / 3;
      EXPECT_LT((p(s, t) - Vec3(std::cos(s) * (1 - k * l), std::sin(s) * (1 - k * l), 0.5 * l)).norm(), 1e-12);
    }
}

TEST(Developable, Constructions) {
  const auto p2 = make_developable(frames_for(helix(-2 * pi, 2 * pi), -8 * pi / 5), 0, 0, 2 * pi);
  EXPECT_NEAR(p2(1.0, 1.0).z(), 0.8 - 5.0 / 3.0, 1e-9);
  const auto p4 = make_developable(frames_for(circle(-pi, pi)), 0, -1, 1);
  EXPECT_LT((p4(0.5, 0.5) - Vec3(std::cos(0.5), std::sin(0.5), 0.5)).norm(), 1e-12);
  const auto line = Curve3::parse("s", "0", "0", 0, 1);
  FrameOptions opt;
  opt.U0 = Vec3(0, 1, 0);
  const auto lf = std::make_shared<const FrameField>(build_frames(line, opt));
  EXPECT_THROW(make_developable(lf, 0, -1, 1), Error);
}
