#include "bbem/quadrature.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace bbem;

namespace {

// Exact integral of x^p y^q over the reference triangle (0,0),(1,0),(0,1).
double monomial_integral(int p, int q) {
  return std::tgamma(p + 1.0) * std::tgamma(q + 1.0) / std::tgamma(p + q + 3.0);
}

}  // namespace

TEST(Quadrature, TriangleRulesAreExactToTheirDegree) {
  const Vec3 a(0, 0, 0), b(1, 0, 0), c(0, 1, 0);
  for (int n : {1, 3, 6, 12}) {
    const TriangleRule& rule = triangle_rule(n);
    std::vector<QuadratureNode> nodes;
    map_rule(rule, a, b, c, nodes);
    ASSERT_EQ(static_cast<int>(nodes.size()), n);
    for (int p = 0; p <= rule.degree; ++p)
      for (int q = 0; p + q <= rule.degree; ++q) {
        double s = 0;
        for (const auto& nd : nodes) s += nd.weight * std::pow(nd.point.x(), p) * std::pow(nd.point.y(), q);
        EXPECT_NEAR(s, monomial_integral(p, q), 1e-14) << n << " " << p << " " << q;
      }
  }
  EXPECT_THROW(triangle_rule(4), QuadratureError);
}

TEST(Quadrature, GaussLegendreExactness) {
  for (int n : {1, 2, 5, 12, 20}) {
    const GaussRule& g = gauss_legendre(n);
    for (int k = 0; k < 2 * n; ++k) {
      double s = 0;
      for (int i = 0; i < n; ++i) s += g.weights[i] * std::pow(g.nodes[i], k);
      EXPECT_NEAR(s, 1.0 / (k + 1), 1e-14) << n << " " << k;
    }
  }
}

TEST(Quadrature, PanelWeightsSumToArea) {
  const SurfaceMesh m = build_icosphere(1);
  const QuadratureSet q = panel_quadrature(m, 6);
  for (int p = 0; p < m.num_panels(); ++p) {
    double s = 0;
    for (const auto& nd : q.panels[p]) s += nd.weight;
    EXPECT_NEAR(s, m.area(p), 1e-15);
  }
}

TEST(Quadrature, InverseDistanceFromRightAngleCorner) {
  // int over the unit right triangle of 1/|y| = (1/sqrt 2) ln(3 + 2 sqrt 2).
  const Vec3 a(0, 0, 0), b(1, 0, 0), c(0, 1, 0);
  const double exact = std::log(3.0 + 2.0 * std::sqrt(2.0)) / std::sqrt(2.0);
  EXPECT_NEAR(exact, 1.246450480, 1e-9);
  EXPECT_NEAR(inverse_distance_integral(a, b, c, a), exact, 1e-14);
  double s = 0;
  for (const auto& nd : duffy_singular_rule(a, b, c, a, 10)) s += nd.weight / nd.point.norm();
  EXPECT_NEAR(s, exact, 1e-12);
}

TEST(Quadrature, SingularRuleIntegratesSmoothTimesInverseDistance) {
  const Vec3 a(0.1, -0.2, 0.3), b(1.2, 0.1, 0.0), c(0.3, 0.9, 0.5);
  const Vec3 x = (a + b + c) / 3.0;
  // Area from the rule.
  double area = 0;
  for (const auto& nd : duffy_singular_rule(a, b, c, x, 8)) area += nd.weight;
  EXPECT_NEAR(area, 0.5 * (b - a).cross(c - a).norm(), 1e-14);
  // 1/r against the closed form, for the centroid and an off-center point.
  for (const Vec3& p : {x, Vec3(0.6 * a + 0.3 * b + 0.1 * c)}) {
    double s = 0;
    for (const auto& nd : duffy_singular_rule(a, b, c, p, 12)) s += nd.weight / (nd.point - p).norm();
    EXPECT_NEAR(s, inverse_distance_integral(a, b, c, p), 1e-12);
  }
}

TEST(Quadrature, StokesletPanelIntegralMatchesPolarRule) {
  const Vec3 a(0.0, 0.0, 0.0), b(0.8, 0.1, 0.2), c(0.2, 0.7, -0.1);
  for (const Vec3& p : {Vec3((a + b + c) / 3.0), Vec3(0.5 * a + 0.5 * b), Vec3(b)}) {
    Mat3 s = Mat3::Zero();
    for (const auto& nd : duffy_singular_rule(a, b, c, p, 16)) {
      const Vec3 d = nd.point - p;
      const double r = d.norm();
      s += nd.weight * (Mat3::Identity() / r + d * d.transpose() / (r * r * r)) / (8 * kPi);
    }
    EXPECT_LT((s - stokeslet_panel_integral(a, b, c, p)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Quadrature, SingularRuleRejectsOffPanelPoints) {
  const Vec3 a(0, 0, 0), b(1, 0, 0), c(0, 1, 0);
  EXPECT_THROW(duffy_singular_rule(a, b, c, Vec3(0.2, 0.2, 0.1), 4), QuadratureError);
  EXPECT_THROW(duffy_singular_rule(a, b, c, Vec3(1.0, 1.0, 0.0), 4), QuadratureError);
}

namespace {

// Integral of 1/|y - t| over the reference triangle for t = (p, h) with p
// inside: the radial integral is sqrt(rho^2 + h^2) - h, leaving a smooth
// angular integral over the three edge sectors.
double inverse_distance_offset_reference(const Vec3& p, double h) {
  const Vec3 corners[3] = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)};
  const GaussRule& g = gauss_legendre(40);
  double total = 0;
  for (int e = 0; e < 3; ++e) {
    const Vec3 A = corners[e], B = corners[(e + 1) % 3];
    const double a0 = std::atan2(A.y() - p.y(), A.x() - p.x());
    double a1 = std::atan2(B.y() - p.y(), B.x() - p.x());
    if (a1 < a0) a1 += 2 * kPi;
    const int pieces = 16;
    for (int k = 0; k < pieces; ++k) {
      const double lo = a0 + (a1 - a0) * k / pieces, hi = a0 + (a1 - a0) * (k + 1) / pieces;
      for (int i = 0; i < 40; ++i) {
        const double th = lo + (hi - lo) * g.nodes[i];
        const Vec3 dir(std::cos(th), std::sin(th), 0);
        // Ray-edge intersection p + rho dir on line AB.
        const Vec3 ab = B - A;
        const double den = dir.x() * ab.y() - dir.y() * ab.x();
        const double rho = ((A.x() - p.x()) * ab.y() - (A.y() - p.y()) * ab.x()) / den;
        total += (hi - lo) * g.weights[i] * (std::sqrt(rho * rho + h * h) - h);
      }
    }
  }
  return total;
}

}  // namespace

TEST(Quadrature, AdaptiveRuleResolvesNearTargets) {
  const Vec3 a(0, 0, 0), b(1, 0, 0), c(0, 1, 0);
  for (double h : {0.1, 0.01, 1e-3}) {
    const Vec3 t(0.25, 0.25, h);
    const double ref = inverse_distance_offset_reference(Vec3(0.25, 0.25, 0), h);
    for (double sep : {2.0, 4.0}) {
      std::vector<QuadratureNode> nodes;
      adaptive_rule(a, b, c, t, triangle_rule(6), sep, 30, nodes);
      double s = 0;
      for (const auto& nd : nodes) s += nd.weight / (nd.point - t).norm();
      EXPECT_NEAR(s, ref, (sep == 2.0 ? 3e-5 : 2e-6) * ref) << h << " " << sep;
    }
  }
  EXPECT_NEAR(inverse_distance_offset_reference(Vec3(0.25, 0.25, 0), 0.0),
              inverse_distance_integral(a, b, c, Vec3(0.25, 0.25, 0)), 1e-12);
}
