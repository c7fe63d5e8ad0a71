#include "bbem/mesh.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace bbem;

TEST(Mesh, IcospherePanelCountsAndArea) {
  for (int level = 0; level <= 3; ++level) {
    const SurfaceMesh m = build_icosphere(level);
    EXPECT_EQ(m.num_panels(), 20 * (1 << (2 * level)));
    EXPECT_EQ(m.num_unknowns(), 3 * m.num_panels());
    EXPECT_TRUE(m.is_closed_and_oriented());
    EXPECT_LT(m.normal_balance().norm(), 1e-12);
    EXPECT_LT(m.total_area(), 4 * kPi);
  }
  // Inscribed polyhedra converge to the sphere area at second order.
  const double e2 = 4 * kPi - build_icosphere(2).total_area();
  const double e3 = 4 * kPi - build_icosphere(3).total_area();
  EXPECT_NEAR(e2 / e3, 4.0, 0.3);
}

TEST(Mesh, NormalsPointOutward) {
  const SurfaceMesh m = build_icosphere(2, 2.5);
  for (int p = 0; p < m.num_panels(); ++p) EXPECT_GT(m.normal(p).dot(m.centroid(p)), 0.0);
  const SurfaceMesh c = build_cube(1, 2.0);
  for (int p = 0; p < c.num_panels(); ++p) EXPECT_GT(c.normal(p).dot(c.centroid(p)), 0.0);
}

TEST(Mesh, CubeGeometry) {
  const SurfaceMesh c = build_cube(2, 3.0);
  EXPECT_EQ(c.num_panels(), 6 * 2 * 16);
  EXPECT_NEAR(c.total_area(), 54.0, 1e-12);
  EXPECT_TRUE(c.is_closed_and_oriented());
  EXPECT_NEAR(c.max_panel_diameter(), 0.75 * std::sqrt(2.0), 1e-12);
}

TEST(Mesh, WindingNumberAndDistance) {
  const SurfaceMesh m = build_icosphere(2);
  EXPECT_NEAR(m.winding_number(Vec3(0.1, 0.2, -0.3)), 1.0, 1e-10);
  EXPECT_NEAR(m.winding_number(Vec3(1.5, 0.0, 0.0)), 0.0, 1e-10);
  EXPECT_TRUE(m.contains(Vec3::Zero()));
  EXPECT_FALSE(m.contains(Vec3(0, 0, 2)));
  EXPECT_NEAR(m.distance_to_surface(Vec3(0, 0, 3)), 2.0, 1e-12);  // pole is a vertex
}

TEST(Mesh, PointTriangleDistance) {
  const Vec3 a(0, 0, 0), b(1, 0, 0), c(0, 1, 0);
  EXPECT_NEAR(point_triangle_distance(Vec3(0.2, 0.2, 0.5), a, b, c), 0.5, 1e-15);
  EXPECT_NEAR(point_triangle_distance(Vec3(-1, -1, 0), a, b, c), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(point_triangle_distance(Vec3(1, 1, 0), a, b, c), std::sqrt(0.5), 1e-15);
}

TEST(Mesh, RejectsBadInput) {
  EXPECT_THROW(build_icosphere(-1), MeshError);
  EXPECT_THROW(build_icosphere(kMaxMeshLevel + 1), MeshError);
  EXPECT_THROW(build_cube(1, -2.0), MeshError);
  std::vector<Vec3> v = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(2, 0, 0)};
  EXPECT_THROW(SurfaceMesh(v, {Triangle{0, 1, 2}}), MeshError);
  EXPECT_THROW(SurfaceMesh(v, {Triangle{0, 1, 5}}), MeshError);
  // An open surface fails the closedness check.
  std::vector<Vec3> w = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)};
  EXPECT_THROW(SurfaceMesh(w, {Triangle{0, 1, 2}}).require_closed(), MeshError);
}

TEST(Mesh, OffRoundTrip) {
  const SurfaceMesh m = build_icosphere(1);
  std::stringstream ss;
  write_off(ss, m);
  const SurfaceMesh r = read_off(ss);
  ASSERT_EQ(r.num_panels(), m.num_panels());
  for (int p = 0; p < m.num_panels(); ++p)
    EXPECT_LT((r.centroid(p) - m.centroid(p)).norm(), 1e-14);
  std::stringstream bad("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n4 0 1 2 0\n");
  EXPECT_THROW(read_off(bad), MeshError);
}

TEST(Mesh, PatchLabels) {
  const SurfaceMesh c = build_cube(1);
  const PatchLabeling top = label_patches(c, CubeFacesRule{{"+z"}});
  EXPECT_EQ(top.num_neumann(), 8);
  EXPECT_EQ(top.num_dirichlet(), 40);
  EXPECT_NO_THROW(top.require_mixed());
  const PatchLabeling all = label_patches(c, UniformRule{PatchLabel::Dirichlet});
  EXPECT_THROW(all.require_mixed(), InvalidLabeling);
  const PatchLabeling half = label_patches(build_icosphere(2), PlaneRule{Vec3::UnitZ(), 0.0});
  EXPECT_EQ(half.num_neumann() + half.num_dirichlet(), 320);
  EXPECT_TRUE(half.is_mixed());
}
