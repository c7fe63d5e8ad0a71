#include "bbem/potentials.hpp"

#include "bbem/kernels.hpp"
#include "bbem/parallel.hpp"

#include <cmath>

namespace bbem {

int quantity_rows(LayerQuantity q) {
  switch (q) {
    case LayerQuantity::SingleLayerPressure:
    case LayerQuantity::DoubleLayerPressure:
    case LayerQuantity::HarmonicSingleLayer:
      return 1;
    default:
      return 3;
  }
}

int quantity_cols(LayerQuantity q) { return q == LayerQuantity::HarmonicSingleLayer ? 1 : 3; }

QuadratureOptions evaluation_options() {
  QuadratureOptions o;
  o.near_factor = 3.0;
  o.max_depth = 24;
  return o;
}

namespace {

bool needs_normals(LayerQuantity q) {
  return q == LayerQuantity::SingleLayerTraction || q == LayerQuantity::DoubleLayerTraction;
}

// Block of the quantity for one node: rows x cols in the top-left corner.
Mat3 node_block(LayerQuantity q, const Vec3& x, const Vec3& n, const Vec3& y, const Vec3& nu,
                const BrinkmanParams& params) {
  Mat3 m = Mat3::Zero();
  switch (q) {
    case LayerQuantity::SingleLayerVelocity:
      return brinkman_velocity_tensor(x - y, params);
    case LayerQuantity::SingleLayerPressure:
      m.row(0) = pressure_vector(x - y).transpose();
      return m;
    case LayerQuantity::SingleLayerTraction: {
      const Tensor3 s = brinkman_stress_tensor(x, y, params);
      for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) m(i, k) = s(i, k, 0) * n[0] + s(i, k, 1) * n[1] + s(i, k, 2) * n[2];
      return m;
    }
    case LayerQuantity::DoubleLayerVelocity:
      return double_layer_kernel(x, y, nu, params);
    case LayerQuantity::DoubleLayerPressure:
      m.row(0) = -(brinkman_pressure_tensor(x, y, params) * nu).transpose();
      return m;
    case LayerQuantity::DoubleLayerTraction: {
      // sigma_il n_l with sigma = -p I + grad u + grad u^T, the velocity
      // gradient by centered differences at fixed y.
      const double eta = 1e-4 * (x - y).norm();
      Mat3 grad[3];  // grad[l](a, b) = d/dx_l of T_ab
      for (int l = 0; l < 3; ++l) {
        Vec3 e = Vec3::Zero();
        e[l] = eta;
        grad[l] = (double_layer_kernel(x + e, y, nu, params) -
                   double_layer_kernel(x - e, y, nu, params)) / (2.0 * eta);
      }
      const Vec3 prow = -(brinkman_pressure_tensor(x, y, params) * nu);
      for (int i = 0; i < 3; ++i)
        for (int b = 0; b < 3; ++b) {
          double s = -prow[b] * n[i];
          for (int l = 0; l < 3; ++l) s += (grad[l](i, b) + grad[i](l, b)) * n[l];
          m(i, b) = s;
        }
      return m;
    }
    case LayerQuantity::HarmonicSingleLayer:
      m(0, 0) = harmonic_kernel(x - y);
      return m;
  }
  return m;
}

void check_inputs(const SurfaceMesh& mesh, const std::vector<Vec3>& points,
                  const std::vector<Vec3>& normals, LayerQuantity q, const BrinkmanParams& params) {
  params.validate();
  if (needs_normals(q) && normals.size() != points.size())
    throw UsageError("traction evaluation needs one normal per point");
  if (mesh.num_panels() == 0) throw MeshError("empty mesh");
}

// Calls sink(panel, block) for every panel; block maps the panel density to
// the quantity at x.
template <class Sink>
void integrate_point(const SurfaceMesh& mesh, const QuadratureSet& regular, const Vec3& x,
                     const Vec3& n, LayerQuantity q, const BrinkmanParams& params,
                     const QuadratureOptions& options, std::vector<QuadratureNode>& scratch,
                     Sink&& sink) {
  const double guard = 1e-10 * mesh.scale();
  for (int j = 0; j < mesh.num_panels(); ++j) {
    const double dist = (x - mesh.centroid(j)).norm();
    if (dist < options.near_factor * mesh.diameter(j) &&
        point_triangle_distance(x, mesh.vertex(j, 0), mesh.vertex(j, 1), mesh.vertex(j, 2)) < guard)
      throw DomainError("evaluation point lies on the boundary");
    const auto& nodes = panel_nodes(mesh, regular, j, x, options, scratch);
    Mat3 block = Mat3::Zero();
    for (const auto& nd : nodes) block += nd.weight * node_block(q, x, n, nd.point, mesh.normal(j), params);
    sink(j, block);
  }
}

}  // namespace

Eigen::MatrixXd evaluation_matrix(const SurfaceMesh& mesh, const std::vector<Vec3>& points,
                                  const std::vector<Vec3>& normals, LayerQuantity q,
                                  const BrinkmanParams& params, const QuadratureOptions& options) {
  check_inputs(mesh, points, normals, q, params);
  const int rows = quantity_rows(q), cols = quantity_cols(q);
  const QuadratureSet regular = panel_quadrature(mesh, options.order);
  Eigen::MatrixXd m(rows * points.size(), cols * mesh.num_panels());
  parallel_for(points.size(), [&](std::size_t p) {
    std::vector<QuadratureNode> scratch;
    const Vec3 n = needs_normals(q) ? normals[p] : Vec3::Zero();
    integrate_point(mesh, regular, points[p], n, q, params, options, scratch,
                    [&](int j, const Mat3& block) {
                      m.block(rows * p, cols * j, rows, cols) = block.topLeftCorner(rows, cols);
                    });
  });
  return m;
}

Eigen::VectorXd evaluate_layer(const SurfaceMesh& mesh, const Eigen::VectorXd& density,
                               const std::vector<Vec3>& points, const std::vector<Vec3>& normals,
                               LayerQuantity q, const BrinkmanParams& params,
                               const QuadratureOptions& options) {
  check_inputs(mesh, points, normals, q, params);
  const int rows = quantity_rows(q), cols = quantity_cols(q);
  if (density.size() != cols * mesh.num_panels())
    throw UsageError("density size does not match the mesh");
  const QuadratureSet regular = panel_quadrature(mesh, options.order);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(rows * points.size());
  parallel_for(points.size(), [&](std::size_t p) {
    std::vector<QuadratureNode> scratch;
    const Vec3 n = needs_normals(q) ? normals[p] : Vec3::Zero();
    Vec3 acc = Vec3::Zero();
    integrate_point(mesh, regular, points[p], n, q, params, options, scratch,
                    [&](int j, const Mat3& block) {
                      if (cols == 3)
                        acc += block * density.segment<3>(3 * j);
                      else
                        acc += block.col(0) * density[j];
                    });
    out.segment(rows * p, rows) = acc.head(rows);
  });
  return out;
}

std::vector<Vec3> unflatten(const Eigen::VectorXd& v) {
  std::vector<Vec3> out(v.size() / 3);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = v.segment<3>(3 * i);
  return out;
}

Eigen::VectorXd flatten(const std::vector<Vec3>& v) {
  Eigen::VectorXd out(3 * v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out.segment<3>(3 * i) = v[i];
  return out;
}

namespace {

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

std::vector<Vec3> eval_single_layer(const SurfaceMesh& mesh, const BoundaryField& density,
                                    const std::vector<Vec3>& points, const BrinkmanParams& params) {
  return unflatten(evaluate_layer(mesh, density.values(), points, {},
                                  LayerQuantity::SingleLayerVelocity, params));
}

std::vector<double> eval_single_layer_pressure(const SurfaceMesh& mesh, const BoundaryField& density,
                                               const std::vector<Vec3>& points) {
  return to_std(evaluate_layer(mesh, density.values(), points, {},
                               LayerQuantity::SingleLayerPressure, BrinkmanParams{}));
}

std::vector<Vec3> eval_single_layer_traction(const SurfaceMesh& mesh, const BoundaryField& density,
                                             const std::vector<Vec3>& points,
                                             const std::vector<Vec3>& normals,
                                             const BrinkmanParams& params) {
  return unflatten(evaluate_layer(mesh, density.values(), points, normals,
                                  LayerQuantity::SingleLayerTraction, params));
}

std::vector<Vec3> eval_double_layer(const SurfaceMesh& mesh, const BoundaryField& density,
                                    const std::vector<Vec3>& points, const BrinkmanParams& params) {
  return unflatten(evaluate_layer(mesh, density.values(), points, {},
                                  LayerQuantity::DoubleLayerVelocity, params));
}

std::vector<double> eval_double_layer_pressure(const SurfaceMesh& mesh, const BoundaryField& density,
                                               const std::vector<Vec3>& points,
                                               const BrinkmanParams& params) {
  return to_std(evaluate_layer(mesh, density.values(), points, {},
                               LayerQuantity::DoubleLayerPressure, params));
}

std::vector<Vec3> eval_double_layer_traction(const SurfaceMesh& mesh, const BoundaryField& density,
                                             const std::vector<Vec3>& points,
                                             const std::vector<Vec3>& normals,
                                             const BrinkmanParams& params) {
  return unflatten(evaluate_layer(mesh, density.values(), points, normals,
                                  LayerQuantity::DoubleLayerTraction, params));
}

std::vector<double> eval_harmonic_single_layer(const SurfaceMesh& mesh, const Eigen::VectorXd& density,
                                               const std::vector<Vec3>& points) {
  return to_std(evaluate_layer(mesh, density, points, {}, LayerQuantity::HarmonicSingleLayer,
                               BrinkmanParams{}));
}

}  // namespace bbem
