#include "bbem/manufactured.hpp"
#include "bbem/solvers.hpp"

#include <gtest/gtest.h>

using namespace bbem;

namespace {

BVPSpec manufactured_spec(const SurfaceMesh& m, ProblemKind kind, int column = 1) {
  BVPSpec spec;
  spec.kind = kind;
  spec.params = {1.0, 0.0};
  spec.mesh = &m;
  const ManufacturedSolution s = manufactured_solution(m, default_source_point(m), column, spec.params);
  spec.dirichlet_data = s.trace(m);
  spec.neumann_data = s.traction(m);
  return spec;
}

double interior_error(const SurfaceMesh& m, const SolveResult& r, int column = 1) {
  const ManufacturedSolution s(default_source_point(m), column, r.handle.params);
  const auto pts = interior_sample_points(m);
  return relative_l2_error(evaluate_solution(r.handle, pts).velocity, s.velocity(pts));
}

}  // namespace

TEST(Solvers, NeumannManufacturedConverges) {
  double previous = 1e9;
  for (int level = 1; level <= 2; ++level) {
    const SurfaceMesh m = build_icosphere(level);
    const SolveResult r = solve(manufactured_spec(m, ProblemKind::Neumann));
    EXPECT_LT(r.report.residual_l2, 1e-12);
    const double err = interior_error(m, r);
    EXPECT_LT(err, previous / 2.0);
    previous = err;
  }
  EXPECT_LT(previous, 0.05);
}

TEST(Solvers, DirichletManufacturedLevelTwo) {
  const SurfaceMesh m = build_icosphere(2);
  const SolveResult r = solve(manufactured_spec(m, ProblemKind::Dirichlet, 3));
  EXPECT_EQ(r.handle.layer, Representation::DoubleLayer);
  EXPECT_TRUE(r.handle.pressure_up_to_constant);
  EXPECT_LT(interior_error(m, r, 3), 0.02);
}

TEST(Solvers, MixedCubeTopFace) {
  const SurfaceMesh m = build_cube(2);
  BVPSpec spec = manufactured_spec(m, ProblemKind::Mixed, 2);
  spec.labeling = label_patches(m, CubeFacesRule{{"+z"}});
  const SolveResult r = solve(spec);
  EXPECT_LT(interior_error(m, r, 2), 0.05);
}

TEST(Solvers, ZeroDataGivesZeroSolution) {
  const SurfaceMesh m = build_icosphere(1);
  BVPSpec spec;
  spec.kind = ProblemKind::Neumann;
  spec.params = {1.0, 0.0};
  spec.mesh = &m;
  spec.dirichlet_data = BoundaryField(m);
  spec.neumann_data = BoundaryField(m);
  const SolveResult r = solve(spec);
  EXPECT_EQ(r.handle.density.norm(), 0.0);
  EXPECT_EQ(r.report.residual_l2, 0.0);
  for (const Vec3& u : evaluate_solution(r.handle, {{0.1, 0.0, 0.0}}).velocity) EXPECT_EQ(u.norm(), 0.0);
}

TEST(Solvers, NeumannIsLinear) {
  const SurfaceMesh m = build_icosphere(1);
  BVPSpec a = manufactured_spec(m, ProblemKind::Neumann, 1);
  const BVPSpec b = manufactured_spec(m, ProblemKind::Neumann, 2);
  BoundarySystem system(m, a.params);
  const BoundaryField da = solve_with(system, a).handle.density;
  const BoundaryField db = solve_with(system, b).handle.density;
  a.neumann_data = 2.0 * a.neumann_data - b.neumann_data;
  const BoundaryField dc = solve_with(system, a).handle.density;
  EXPECT_LT((dc - (2.0 * da - db)).norm(), 1e-10 * dc.norm());
}

TEST(Solvers, DirichletRejectsFluxData) {
  const SurfaceMesh m = build_icosphere(1);
  BVPSpec spec = manufactured_spec(m, ProblemKind::Dirichlet);
  spec.dirichlet_data = BoundaryField::normals(m);
  EXPECT_THROW(solve(spec), FluxIncompatible);
}

TEST(Solvers, ErrorPaths) {
  const SurfaceMesh m = build_cube(1);
  BVPSpec spec = manufactured_spec(m, ProblemKind::Neumann);
  spec.params.alpha = 0.0;
  EXPECT_THROW(solve(spec), UnsupportedParameter);

  BVPSpec mixed = manufactured_spec(m, ProblemKind::Mixed);
  EXPECT_THROW(solve(mixed), InvalidLabeling);
  mixed.labeling = PatchLabeling{std::vector<PatchLabel>(3, PatchLabel::Dirichlet)};
  EXPECT_THROW(solve(mixed), InvalidLabeling);
}

TEST(Solvers, NeumannToDirichletRoutesAgree) {
  const SurfaceMesh m = build_cube(1);
  const BrinkmanParams p{1.0, 0.0};
  const PatchLabeling labels = label_patches(m, CubeFacesRule{{"+z"}});
  BoundarySystem system(m, p);
  const NeumannToDirichlet ntd = neumann_to_dirichlet(system, labels);
  BoundaryField g = BoundaryField::sample(m, [](const Vec3& x) { return Vec3(x.y(), 1.0, x.x() * x.z()); });
  for (int q = 0; q < m.num_panels(); ++q)
    if (!labels.is_dirichlet(q)) g.set(q, Vec3::Zero());
  const BoundaryField composed = ntd.apply(g);
  const BoundaryField solved = system.solve_neumann(g).handle.density;
  BoundaryField restricted = system.single_layer().apply(solved);
  for (int q = 0; q < m.num_panels(); ++q)
    if (!labels.is_dirichlet(q)) restricted.set(q, Vec3::Zero());
  EXPECT_LT((composed - restricted).norm(), 1e-10 * restricted.norm());
  EXPECT_GT(ntd.sigma_min(), 0.0);
}

TEST(Solvers, ReportJsonOmitsTiming) {
  const SurfaceMesh m = build_icosphere(1);
  const SolveResult r = solve(manufactured_spec(m, ProblemKind::Neumann));
  EXPECT_EQ(r.report.to_json(false).find("wall_time_s"), std::string::npos);
  EXPECT_NE(r.report.to_json(true).find("wall_time_s"), std::string::npos);
  EXPECT_NE(r.report.to_json(false).find("residual_l2"), std::string::npos);
}
