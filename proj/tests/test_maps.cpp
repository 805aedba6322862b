#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "zerofree/conformal_map.hpp"
#include "zerofree/errors.hpp"

using namespace zerofree;

TEST(StripMap, HalfParameters) {
  const ConformalMap m = build_strip_map(0.5, 40);
  EXPECT_NEAR(m.strip.alpha, 1.0 - std::exp(-2.0), 1e-15);
  EXPECT_EQ(m.strip.degree, 60.0);
  EXPECT_EQ(m.series[0], cplx(0.0));
  EXPECT_LT(std::abs(m.eval(1.0) - 1.0), 1e-12);
  EXPECT_EQ(m.eval(0.0), cplx(0.0));
}

TEST(StripMap, DegreeFormula) {
  for (double rho : {0.9, 0.5, 0.25, 0.125}) {
    const ConformalMap m = build_strip_map(rho, 8);
    const double want = std::floor((1 + 1 / rho) * std::exp(1 + 1 / rho));
    EXPECT_EQ(m.strip.degree, want);
    EXPECT_GE(m.strip.degree, 14.0);
  }
}

TEST(StripMap, DegreeGrowsExponentiallyInInverseRho) {
  // log N = (1 + 1/rho) + log(1 + 1/rho), so log N / (1/rho) approaches 1
  // from above as rho shrinks.
  double prev = 1e9;
  for (double rho : {0.5, 0.25, 0.125, 0.0625}) {
    const double ratio = std::log(build_strip_map(rho, 4).strip.degree) * rho;
    EXPECT_GT(ratio, 1.0);
    EXPECT_LT(ratio, prev);
    prev = ratio;
  }
  EXPECT_LT(prev, 1.3);
}

TEST(StripMap, ImageBounds) {
  const double rho = 0.5;
  const ConformalMap m = build_strip_map(rho, 8);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double max_im = 0.0, min_re = 1e9, max_re = -1e9;
  for (int i = 0; i < 10000; ++i) {
    const cplx z = std::polar(m.strip.beta_radius * std::sqrt(u(rng)), 2 * std::numbers::pi * u(rng));
    const cplx w = m.eval(z);
    max_im = std::max(max_im, std::abs(w.imag()));
    min_re = std::min(min_re, w.real());
    max_re = std::max(max_re, w.real());
  }
  EXPECT_LE(max_im, 2 * rho);
  EXPECT_GE(min_re, -rho);
  EXPECT_LE(max_re, 1 + 2 * rho);
}

TEST(StripMap, Range) {
  EXPECT_THROW(build_strip_map(0.0, 8), PreconditionError);
  EXPECT_THROW(build_strip_map(1.0, 8), PreconditionError);
}

TEST(WedgeMap, HalfParameters) {
  const ConformalMap m = build_wedge_map(0.5, 0.0, 48);
  EXPECT_EQ(m.wedge.p, 1.0);
  EXPECT_NEAR(m.wedge.M, std::sqrt(5.0), 1e-14);
  const double R = std::sqrt((std::sqrt(5.0) + 1) / (std::sqrt(5.0) - 1));
  EXPECT_NEAR(m.wedge.R, R, 1e-12);
  EXPECT_NEAR(m.wedge.R, 1.618, 1e-3);
  // G(1) = Q(1/R^2)^p
  const double s = 1.0 / (R * R);
  EXPECT_NEAR((1 + s) / (1 - s), std::sqrt(5.0), 1e-12);
  EXPECT_EQ(m.series[0], cplx(0.0));
  EXPECT_LT(std::abs(m.eval_series(1.0) - 1.0), 1e-9);
  EXPECT_LT(std::abs(m.eval(1.0) - 1.0), 1e-12);
}

TEST(WedgeMap, RadiusFormula) {
  for (double rho : {0.1, 0.25, 0.5, 2.0}) {
    for (double dt : {0.0, 0.3, 1.0}) {
      const ConformalMap m = build_wedge_map(rho, dt, 8);
      const double p = 1 - 2 * dt / std::numbers::pi;
      const double M = std::pow(1 + 1 / (rho * rho), 1 / (2 * p));
      EXPECT_NEAR(m.wedge.p, p, 1e-15);
      EXPECT_NEAR(m.wedge.R * m.wedge.R, (M + 1) / (M - 1), 1e-12 * m.wedge.R * m.wedge.R);
    }
  }
}

TEST(WedgeMap, SeriesMatchesDirectEvaluation) {
  const ConformalMap m = build_wedge_map(0.5, 0.2, 120);
  const double r = (1 + m.wedge.R) / 2;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const cplx z = std::polar(r * std::sqrt(u(rng)), 2 * std::numbers::pi * u(rng));
    ASSERT_LT(std::abs(m.eval_series(z) - m.eval(z)), 1e-8) << z;
  }
}

TEST(WedgeMap, ImageAvoidsWedges) {
  const ConformalMap m = build_wedge_map(0.5, 0.0, 8);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = (1 + m.wedge.R) / 2;
  for (int i = 0; i < 10000; ++i) {
    const cplx z = std::polar(r * std::sqrt(u(rng)), 2 * std::numbers::pi * u(rng));
    ASSERT_GT(wedge_distance(m.eval(z), 0.5, 0.0), 0.0);
  }
}

TEST(WedgeMap, Range) {
  EXPECT_THROW(build_wedge_map(0.0, 0.0, 8), PreconditionError);
  EXPECT_THROW(build_wedge_map(0.5, std::numbers::pi / 2, 8), PreconditionError);
}

TEST(WedgeDistance, Geometry) {
  // W+ is the wedge above i rho with half-angle delta_theta around the axis.
  EXPECT_EQ(wedge_distance(cplx(0, 2), 0.5, 0.0), 0.0);
  EXPECT_NEAR(wedge_distance(cplx(1, 2), 0.5, 0.0), 1.0, 1e-15);
  EXPECT_NEAR(wedge_distance(cplx(0, 0), 0.5, 0.0), 0.5, 1e-15);
}

TEST(Certify, Examples) {
  const MapCertificate s = certify_map(build_strip_map(0.3, 8), 10000);
  EXPECT_EQ(s.violations, 0);
  EXPECT_EQ(s.samples, 10000);
  const MapCertificate w = certify_map(build_wedge_map(0.2, 0.1, 8), 10000);
  EXPECT_EQ(w.violations, 0);
  EXPECT_GT(w.min_wedge_distance, 0.0);
  const MapCertificate e = certify_map(build_wedge_map(0.2, 0.1, 8), 0);
  EXPECT_EQ(e.samples, 0);
  EXPECT_EQ(e.violations, 0);
}

TEST(Certify, WedgeSupNearAsymptoticBound) {
  for (double rho : {0.1, 0.05}) {
    const MapCertificate c = certify_map(build_wedge_map(rho, 0.0, 8), 2000);
    EXPECT_EQ(c.reference_bound, 2.0);
    EXPECT_LT(c.max_abs_phi, 2.0 * (1 + 4 * rho));
  }
}
