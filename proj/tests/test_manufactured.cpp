#include "bbem/kernels.hpp"
#include "bbem/manufactured.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace bbem;

namespace {

// Fourth-order central differences.
constexpr double kStep = 2e-2;

template <class F>
auto d1(const F& f, const Vec3& x, int k) {
  Vec3 e = Vec3::Zero();
  e[k] = kStep;
  return (-f(x + 2 * e) + 8.0 * f(x + e) - 8.0 * f(x - e) + f(x - 2 * e)) / (12.0 * kStep);
}

template <class F>
auto d2(const F& f, const Vec3& x, int k) {
  Vec3 e = Vec3::Zero();
  e[k] = kStep;
  return (-f(x + 2 * e) + 16.0 * f(x + e) - 30.0 * f(x) + 16.0 * f(x - e) - f(x - 2 * e)) / (12.0 * kStep * kStep);
}

}  // namespace

TEST(Manufactured, SolvesHomogeneousBrinkman) {
  const SurfaceMesh m = build_icosphere(2);
  for (double alpha : {0.0, 1.0, 4.0}) {
    const BrinkmanParams p{alpha, 0.0};
    for (int column = 1; column <= 3; ++column) {
      const ManufacturedSolution s = manufactured_solution(m, default_source_point(m), column, p);
      const auto u = [&](const Vec3& x) { return s.velocity(x); };
      const auto q = [&](const Vec3& x) { return s.pressure(x); };
      for (const Vec3& x : interior_sample_points(m, 20, 0.6)) {
        Vec3 lap = Vec3::Zero(), grad;
        double div = 0.0;
        for (int k = 0; k < 3; ++k) {
          lap += d2(u, x, k);
          grad[k] = d1(q, x, k);
          div += d1(u, x, k)[k];
        }
        const Vec3 residual = lap - alpha * u(x) - grad;
        const double scale = lap.norm() + alpha * u(x).norm() + grad.norm();
        EXPECT_LT(residual.norm() / scale, 1e-5);
        EXPECT_LT(std::abs(div) / scale, 1e-5);
      }
    }
  }
}

TEST(Manufactured, ColumnOfFundamentalSolution) {
  const BrinkmanParams p{0.0, 0.0};
  const Vec3 x0(0.0, 0.0, 3.0), x(0.2, -0.1, 0.4);
  const ManufacturedSolution s(x0, 2, p);
  EXPECT_LT((s.velocity(x) - brinkman_velocity_tensor(x - x0, p).col(1)).norm(), 1e-15);
  EXPECT_DOUBLE_EQ(s.pressure(x), pressure_vector(x - x0)[1]);
}

TEST(Manufactured, TraceFluxVanishesWithRefinement) {
  double previous = 1e9;
  for (int level = 1; level <= 3; ++level) {
    const SurfaceMesh m = build_icosphere(level);
    const ManufacturedSolution s = manufactured_solution(m, default_source_point(m), 1, {1.0, 0.0});
    const BoundaryField trace = s.trace(m);
    const double flux = std::abs(trace.pairing(BoundaryField::normals(m))) / trace.norm();
    EXPECT_LT(flux, previous);
    previous = flux;
  }
  EXPECT_LT(previous, 1e-2);
}

TEST(Manufactured, RejectsBadSources) {
  const SurfaceMesh m = build_icosphere(1);
  EXPECT_THROW(manufactured_solution(m, Vec3(0.1, 0.0, 0.0), 1, {1.0, 0.0}), InvalidSource);
  EXPECT_THROW(manufactured_solution(m, Vec3(1.1, 0.0, 0.0), 1, {1.0, 0.0}), InvalidSource);
  EXPECT_THROW(manufactured_solution(m, Vec3(3.0, 0.0, 0.0), 4, {1.0, 0.0}), UsageError);
  EXPECT_NO_THROW(manufactured_solution(m, Vec3(3.0, 0.0, 0.0), 3, {1.0, 0.0}));
}

TEST(Manufactured, DefaultSourceIsAtDistanceTwo) {
  const SurfaceMesh m = build_icosphere(2);
  EXPECT_NEAR(default_source_point(m).norm(), 2.0, 1e-12);
}

TEST(Manufactured, SamplePointsAndErrors) {
  const auto pts = sphere_points(Vec3(1, 0, 0), 0.5, 40);
  ASSERT_EQ(pts.size(), 40u);
  for (const Vec3& x : pts) EXPECT_NEAR((x - Vec3(1, 0, 0)).norm(), 0.5, 1e-14);
  EXPECT_EQ(relative_l2_error(pts, pts), 0.0);
  EXPECT_EQ(relative_l2_error({Vec3::Zero()}, {Vec3::Zero()}), 0.0);
  EXPECT_NEAR(relative_l2_error({Vec3(2, 0, 0)}, {Vec3(1, 0, 0)}), 1.0, 1e-15);
}
