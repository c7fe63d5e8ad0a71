#include "bbem/operators.hpp"
#include "bbem/potentials.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

using namespace bbem;

namespace {

BoundaryField random_field(const SurfaceMesh& m, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(m.num_unknowns());
  for (auto& x : v) x = normal(rng);
  return BoundaryField(m, v);
}

}  // namespace

TEST(Operators, AdjointIsWeightedTranspose) {
  const SurfaceMesh m = build_icosphere(1);
  const BrinkmanParams p{1.0, 0.0};
  const DenseOperator k = assemble_double_layer(m, p);
  const DenseOperator ks = adjoint_double_layer(k);
  const BoundaryField u = random_field(m, 1), v = random_field(m, 2);
  EXPECT_NEAR(ks.apply(u).pairing(v), u.pairing(k.apply(v)), 1e-12 * u.norm() * v.norm());
}

TEST(Operators, StokesDoubleLayerOfConstant) {
  const SurfaceMesh m = build_icosphere(2);
  const DenseOperator k = assemble_double_layer(m, BrinkmanParams{0.0, 0.0});
  const BoundaryField c = BoundaryField::sample(m, [](const Vec3&) { return Vec3(0.3, -1.0, 2.0); });
  EXPECT_LT((k.apply(c) + 0.5 * c).norm() / c.norm(), 1e-8);
}

TEST(Operators, SingleLayerIsNearlySymmetric) {
  const SurfaceMesh m = build_icosphere(2);
  const DenseOperator v = assemble_single_layer(m, BrinkmanParams{1.0, 0.0});
  const BoundaryField a = random_field(m, 3), b = random_field(m, 4);
  // Collocation breaks exact symmetry; the defect shrinks with the mesh size.
  EXPECT_NEAR(v.apply(a).pairing(b), a.pairing(v.apply(b)), 2e-2 * v.apply(a).norm() * b.norm());
}

TEST(Operators, LayerOperatorsMatchSeparateAssembly) {
  const SurfaceMesh m = build_cube(1);
  const BrinkmanParams p{4.0, 0.0};
  const LayerOperators both = assemble_layer_operators(m, p);
  EXPECT_LT((both.single_layer.matrix - assemble_single_layer(m, p).matrix).norm(), 1e-14);
  EXPECT_LT((both.double_layer.matrix - assemble_double_layer(m, p).matrix).norm(), 1e-12);
}

TEST(Operators, BinaryRoundTrip) {
  const SurfaceMesh m = build_icosphere(0);
  const DenseOperator v = assemble_single_layer(m, BrinkmanParams{1.0, 0.0});
  std::stringstream s;
  write_operator(s, v);
  const DenseOperator back = read_operator(s);
  EXPECT_EQ(back.kind, v.kind);
  EXPECT_EQ(back.matrix.rows(), v.matrix.rows());
  EXPECT_EQ(back.matrix, v.matrix);
}

TEST(Operators, ReadRejectsGarbage) {
  std::stringstream s("not an operator");
  EXPECT_THROW(read_operator(s), Error);
}

TEST(Potentials, EvaluationMatrixMatchesDirectEvaluation) {
  const SurfaceMesh m = build_icosphere(1);
  const BrinkmanParams p{1.0, 0.0};
  const BoundaryField g = random_field(m, 5);
  const std::vector<Vec3> pts{{0.1, 0.2, 0.0}, {0.0, 0.0, 2.0}, {-0.3, 0.1, 0.4}};
  const auto direct = eval_single_layer(m, g, pts, p);
  const Eigen::VectorXd via = evaluation_matrix(m, pts, {}, LayerQuantity::SingleLayerVelocity, p) * g.values();
  EXPECT_LT((flatten(direct) - via).norm(), 1e-13 * via.norm());
  EXPECT_EQ(unflatten(flatten(direct)), direct);
}

TEST(Potentials, DoubleLayerOfConstantInsideAndOutside) {
  const SurfaceMesh m = build_icosphere(3);
  const BoundaryField c = BoundaryField::sample(m, [](const Vec3&) { return Vec3(1.0, 2.0, -1.0); });
  const BrinkmanParams stokes{0.0, 0.0};
  const auto inside = eval_double_layer(m, c, {{0.1, -0.2, 0.3}}, stokes);
  const auto outside = eval_double_layer(m, c, {{0.0, 0.0, 3.0}}, stokes);
  EXPECT_LT((inside[0] + Vec3(1.0, 2.0, -1.0)).norm(), 1e-6);
  EXPECT_LT(outside[0].norm(), 1e-6);
}

TEST(Potentials, DoubleLayerTractionContinuousAcrossFlatPanel) {
  // Unit square in the z = 0 plane; the jump of the traction vanishes for a
  // smooth density on a flat surface.
  const SurfaceMesh square({{-0.5, -0.5, 0}, {0.5, -0.5, 0}, {0.5, 0.5, 0}, {-0.5, 0.5, 0}}, {{{0, 1, 2}}, {{0, 2, 3}}});
  const BoundaryField h = BoundaryField::sample(square, [](const Vec3&) { return Vec3(1.0, 0.5, -0.2); });
  const BrinkmanParams p{1.0, 0.0};
  const Vec3 x(0.05, -0.03, 0.0), nu(0, 0, 1);
  double previous = 1e9;
  for (double delta : {4e-2, 2e-2, 1e-2}) {
    const auto t = eval_double_layer_traction(square, h, {x + delta * nu, x - delta * nu}, {nu, nu}, p);
    const double jump = (t[0] - t[1]).norm() / (t[0].norm() + t[1].norm());
    EXPECT_LT(jump, previous);
    previous = jump;
  }
  EXPECT_LT(previous, 1e-2);
}
