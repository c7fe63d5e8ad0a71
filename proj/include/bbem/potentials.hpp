#pragma once

// Off-boundary evaluation of layer potentials for piecewise-constant densities.
//
//   (V g)(x)   = int G(x - y) g(y) dsigma_y           (Q^s g)(x) = int Pi(x - y) . g(y)
//   (W h)_a(x) = int S_{b a l}(y, x) nu_l(y) h_b(y)    (Q^d h)(x) = -int Lambda_{b l}(x, y) nu_l h_b
//
// With these signs W^0 c = -c inside for constant c, the interior and
// exterior limits of W h are (-1/2 + K) h and (1/2 + K) h, the interior and
// exterior tractions of V g are (1/2 + K*) g and (-1/2 + K*) g, and a
// homogeneous solution satisfies u = V t(u, p) - W u on the boundary data.

#include "bbem/operators.hpp"

#include <vector>

namespace bbem {

enum class LayerQuantity {
  SingleLayerVelocity,
  SingleLayerPressure,
  SingleLayerTraction,  ///< needs a normal per point
  DoubleLayerVelocity,
  DoubleLayerPressure,
  DoubleLayerTraction,  ///< needs a normal per point
  HarmonicSingleLayer,  ///< scalar density, one value per panel
};

/// Output rows per point (3 or 1) and input columns per panel (3 or 1).
int quantity_rows(LayerQuantity q);
int quantity_cols(LayerQuantity q);

/// Defaults for points near, but off, the surface.
QuadratureOptions evaluation_options();

/// Dense map from the density coefficients to the quantity at the points:
/// (rows * P) x (cols * N). Points closer than 1e-10 * mesh scale to a panel
/// raise DomainError.
Eigen::MatrixXd evaluation_matrix(const SurfaceMesh& mesh, const std::vector<Vec3>& points,
                                  const std::vector<Vec3>& normals, LayerQuantity q,
                                  const BrinkmanParams& params,
                                  const QuadratureOptions& options = evaluation_options());

/// Matrix-free evaluation; returns rows * P values.
Eigen::VectorXd evaluate_layer(const SurfaceMesh& mesh, const Eigen::VectorXd& density,
                               const std::vector<Vec3>& points, const std::vector<Vec3>& normals,
                               LayerQuantity q, const BrinkmanParams& params,
                               const QuadratureOptions& options = evaluation_options());

std::vector<Vec3> eval_single_layer(const SurfaceMesh& mesh, const BoundaryField& density,
                                    const std::vector<Vec3>& points, const BrinkmanParams& params);
std::vector<double> eval_single_layer_pressure(const SurfaceMesh& mesh, const BoundaryField& density,
                                               const std::vector<Vec3>& points);
std::vector<Vec3> eval_single_layer_traction(const SurfaceMesh& mesh, const BoundaryField& density,
                                             const std::vector<Vec3>& points,
                                             const std::vector<Vec3>& normals,
                                             const BrinkmanParams& params);

std::vector<Vec3> eval_double_layer(const SurfaceMesh& mesh, const BoundaryField& density,
                                    const std::vector<Vec3>& points, const BrinkmanParams& params);
std::vector<double> eval_double_layer_pressure(const SurfaceMesh& mesh, const BoundaryField& density,
                                               const std::vector<Vec3>& points,
                                               const BrinkmanParams& params);
/// Traction with the kernel's x-gradient taken by centered differences.
std::vector<Vec3> eval_double_layer_traction(const SurfaceMesh& mesh, const BoundaryField& density,
                                             const std::vector<Vec3>& points,
                                             const std::vector<Vec3>& normals,
                                             const BrinkmanParams& params);

/// Laplace single layer int -q(y) / (4 pi |x - y|) dsigma_y of a scalar density.
std::vector<double> eval_harmonic_single_layer(const SurfaceMesh& mesh, const Eigen::VectorXd& density,
                                               const std::vector<Vec3>& points);

/// Helpers converting between point lists and flat vectors.
std::vector<Vec3> unflatten(const Eigen::VectorXd& v);
Eigen::VectorXd flatten(const std::vector<Vec3>& v);

}  // namespace bbem
