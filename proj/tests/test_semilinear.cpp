#include "bbem/manufactured.hpp"
#include "bbem/semilinear.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <json.hpp>

using namespace bbem;

namespace {

struct Problem {
  SurfaceMesh mesh = build_cube(1);
  PatchLabeling labels = label_patches(mesh, CubeFacesRule{{"+z"}});
  VolumeGrid grid = build_volume_grid(MeshDomain{&mesh}, 8);
  BrinkmanParams params{1.0, 1.0};
  MixedPoissonMap map{mesh, labels, grid, params};
};

Problem& problem() {
  static Problem s;
  return s;
}

}  // namespace

TEST(Picard, ConfigValidation) {
  PicardConfig c;
  EXPECT_NO_THROW(c.validate());
  c.damping = 0.0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = PicardConfig{};
  c.tol = -1.0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = PicardConfig{};
  c.max_iter = 0;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Picard, NormWeightedProduct) {
  VolumeField v(6), w(6);
  v << 3, 4, 0, 0, 0, -2;
  w << 1, 1, 1, 5, 0, 0;
  VolumeField expected(6);
  expected << 5, 5, 5, 10, 0, 0;
  EXPECT_EQ(norm_weighted_product(v, w), expected);
}

TEST(Picard, MapIsLinearInData) {
  Problem& s = problem();
  const VolumeField f = sample_volume_field(s.grid, [](const Vec3& x) { return Vec3(x.y(), 0.0, 1.0); });
  const BoundaryField h = BoundaryField::sample(s.mesh, [](const Vec3& x) { return Vec3(x.z(), 0.0, 0.0); });
  const BoundaryField g(s.mesh);
  const VolumeField a = s.map.apply(f, h, g);
  const VolumeField b = s.map.apply(2.0 * f, 2.0 * h, g);
  EXPECT_LT((b - 2.0 * a).norm(), 1e-12 * b.norm());
  EXPECT_EQ(s.map.apply(0.0 * f, BoundaryField(s.mesh), g).norm(), 0.0);
}

TEST(Picard, BlockAdjoints) {
  Problem& s = problem();
  const int m = s.grid.size();
  const VolumeField f = VolumeField::LinSpaced(3 * m, -1.0, 2.0);
  const VolumeField u = VolumeField::LinSpaced(3 * m, 0.5, -0.5).cwiseProduct(f);
  EXPECT_NEAR(s.map.forcing_block(f).dot(u), f.dot(s.map.forcing_block_adjoint(u)),
              1e-10 * s.map.forcing_block(f).norm() * u.norm());
  const Eigen::VectorXd d = Eigen::VectorXd::LinSpaced(s.mesh.num_unknowns(), 1.0, -1.0);
  EXPECT_NEAR(s.map.boundary_block(d).dot(u), d.dot(s.map.boundary_block_adjoint(u)),
              1e-10 * s.map.boundary_block(d).norm() * u.norm());
}

TEST(Picard, ConstantsIdentitiesAndBetaScaling) {
  Problem& s = problem();
  const SmallnessConstants k1 = estimate_constants(s.map, 1.0, 8, 3);
  const SmallnessConstants k2 = estimate_constants(s.map, 2.0, 8, 3);
  EXPECT_GT(k1.C_est, 0.0);
  EXPECT_GT(k1.c1prime_est, 0.0);
  EXPECT_DOUBLE_EQ(k1.C2_est, k1.c1prime_est * 1.0);
  EXPECT_NEAR(k1.zeta_est, 3.0 / (16.0 * k1.C2_est * k1.C_est * k1.C_est), 1e-15 * k1.zeta_est);
  EXPECT_NEAR(k1.eta_est, 1.0 / (4.0 * k1.C2_est * k1.C_est), 1e-15 * k1.eta_est);
  EXPECT_NEAR(k2.eta_est, 0.5 * k1.eta_est, 1e-12 * k1.eta_est);
  EXPECT_NEAR(k2.zeta_est, 0.5 * k1.zeta_est, 1e-12 * k1.zeta_est);
  EXPECT_TRUE(std::isinf(estimate_constants(s.map, 0.0, 8, 3).zeta_est));
  EXPECT_THROW(estimate_constants(s.map, 1.0, 4, 3), UsageError);
}

TEST(Picard, BetaZeroTakesOneIteration) {
  Problem& s = problem();
  MixedPoissonMap linear(s.mesh, s.labels, s.grid, {1.0, 0.0});
  const VolumeField f = sample_volume_field(s.grid, [](const Vec3& x) { return Vec3(1.0, x.x(), 0.0); });
  const PicardResult r = picard_solve(linear, f, BoundaryField(s.mesh), BoundaryField(s.mesh), PicardConfig{});
  EXPECT_EQ(r.report.iterations, 1);
  EXPECT_TRUE(r.report.converged);
  EXPECT_LT((r.velocity - linear.apply(f, BoundaryField(s.mesh), BoundaryField(s.mesh))).norm(),
            1e-13 * r.velocity.norm());
}

TEST(Picard, ZeroDataGivesZero) {
  Problem& s = problem();
  const VolumeField f = VolumeField::Zero(3 * s.grid.size());
  const PicardResult r = picard_solve(s.map, f, BoundaryField(s.mesh), BoundaryField(s.mesh), PicardConfig{});
  EXPECT_TRUE(r.report.converged);
  EXPECT_EQ(r.velocity.norm(), 0.0);
}

TEST(Picard, SmallDataContracts) {
  Problem& s = problem();
  const SmallnessConstants k = estimate_constants(s.map, s.params.beta, 8, 5);
  const ManufacturedSolution exact = manufactured_solution(s.mesh, default_source_point(s.mesh), 1, s.params);
  BoundaryField h = exact.trace(s.mesh), g = exact.traction(s.mesh);
  VolumeField f = sample_volume_field(s.grid, [](const Vec3& x) { return Vec3(std::sin(x.y()), 0.0, 1.0); });
  const double scale = 0.5 * k.zeta_est / (volume_norm(s.grid, f) + h.norm() + g.norm());
  f *= scale;
  h *= scale;
  g *= scale;
  const PicardResult r = picard_solve(s.map, f, h, g, PicardConfig{}, &k);
  EXPECT_TRUE(r.report.converged);
  EXPECT_TRUE(r.report.ball_respected);
  EXPECT_LE(r.report.iterations, 20);
  EXPECT_LE(r.report.measured_ratio, 0.6);
  EXPECT_EQ(r.handle.representation, Representation::WithNewtonian);

  const nlohmann::json j = nlohmann::json::parse(r.report.to_json());
  for (const char* key : {"iterates", "measured_ratio", "C_est", "c1prime_est", "zeta_est", "eta_est",
                          "converged", "ball_respected"})
    EXPECT_TRUE(j.contains(key)) << key;
}

TEST(Picard, LargeDataIsReported) {
  Problem& s = problem();
  const VolumeField f = sample_volume_field(s.grid, [](const Vec3&) { return Vec3(0.0, 0.0, 5e4); });
  PicardConfig c;
  c.max_iter = 30;
  try {
    picard_solve(s.map, f, BoundaryField(s.mesh), BoundaryField(s.mesh), c);
    FAIL() << "expected a smallness or convergence failure";
  } catch (const SmallnessViolated& e) {
    EXPECT_FALSE(e.report.converged);
  } catch (const NotConverged& e) {
    EXPECT_FALSE(e.report.converged);
  }
}
