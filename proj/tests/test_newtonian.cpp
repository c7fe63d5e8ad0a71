#include "bbem/newtonian.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace bbem;

TEST(Newtonian, SelfCellFactorIsBallValue) {
  const VolumeGrid g = build_volume_grid(CubeDomain{Vec3::Zero(), 1.0}, 8);
  const double r = g.equivalent_radius();
  EXPECT_NEAR(self_cell_factor(g), -r * r / 3.0, 1e-15);
}

TEST(Newtonian, GridOperatorMatchesPointEvaluation) {
  const VolumeGrid g = build_volume_grid(BallDomain{Vec3::Zero(), 1.0}, 6);
  const BrinkmanParams p{1.0, 0.0};
  const VolumeField f = sample_volume_field(g, [](const Vec3& x) { return Vec3(std::sin(x.y()), x.z(), 1.0); });
  const NewtonianGridOperator op(g, p);
  const GridPotential pot = op.apply(f);
  const auto direct = newtonian_velocity(g, f, g.centers, p);
  const auto pressure = newtonian_pressure(g, f, g.centers);
  for (int c = 0; c < g.size(); ++c) {
    EXPECT_LT((pot.velocity.segment<3>(3 * c) - direct[c]).norm(), 1e-12 * (1 + direct[c].norm()));
    EXPECT_NEAR(pot.pressure[c], pressure[c], 1e-12 * (1 + std::abs(pressure[c])));
  }
}

TEST(Newtonian, VelocityTransposeIsAdjoint) {
  const VolumeGrid g = build_volume_grid(CubeDomain{Vec3::Zero(), 1.0}, 5);
  const NewtonianGridOperator op(g, BrinkmanParams{2.0, 0.0});
  std::mt19937 rng(9);
  std::normal_distribution<double> normal;
  VolumeField a(3 * g.size()), b(3 * g.size());
  for (auto& x : a) x = normal(rng);
  for (auto& x : b) x = normal(rng);
  const double lhs = op.apply(a).velocity.dot(b);
  const double rhs = a.dot(op.apply_velocity_transpose(b));
  EXPECT_NEAR(lhs, rhs, 1e-12 * std::abs(lhs));
}

TEST(Newtonian, ZeroForcingGivesZero) {
  const SurfaceMesh cube = build_cube(1, 1.0);
  const VolumeGrid g = build_volume_grid(MeshDomain{&cube}, 4);
  const VolumeField f = VolumeField::Zero(3 * g.size());
  const NewtonianBoundaryData d = newtonian_boundary_data(g, f, cube, BrinkmanParams{1.0, 0.0});
  EXPECT_EQ(d.trace.norm(), 0.0);
  EXPECT_EQ(d.traction.norm(), 0.0);
}

TEST(Newtonian, BoundaryMapsMatchDirectData) {
  const SurfaceMesh cube = build_cube(1, 1.0);
  const VolumeGrid g = build_volume_grid(MeshDomain{&cube}, 4);
  const BrinkmanParams p{1.0, 0.0};
  const VolumeField f = sample_volume_field(g, [](const Vec3& x) { return Vec3(x.y(), -x.x(), 0.5); });
  const NewtonianBoundaryData direct = newtonian_boundary_data(g, f, cube, p);
  const NewtonianBoundaryData mapped = newtonian_boundary_maps(g, cube, p).apply(cube, f);
  EXPECT_LT((direct.trace - mapped.trace).norm(), 1e-12 * direct.trace.norm());
  EXPECT_LT((direct.traction - mapped.traction).norm(), 1e-12 * direct.traction.norm());
}
