#pragma once

#include "bbem/fields.hpp"
#include "bbem/quadrature.hpp"

#include <iosfwd>

namespace bbem {

enum class OperatorKind : std::uint8_t { V = 0, K = 1, Kstar = 2, SMixed = 3, Custom = 4 };

std::string to_string(OperatorKind kind);

/// Dense 3N x 3N matrix acting on BoundaryField coefficient vectors, with the
/// panel weights of the mesh it was assembled on.
struct DenseOperator {
  OperatorKind kind = OperatorKind::Custom;
  Eigen::MatrixXd matrix;
  Eigen::VectorXd weights;  ///< panel areas, length N

  int num_panels() const { return static_cast<int>(weights.size()); }
  BoundaryField apply(const BoundaryField& u) const;
};

/// Accuracy controls shared by assembly and off-boundary evaluation.
struct QuadratureOptions {
  int order = 6;                ///< regular triangle rule (1, 3, 6 or 12 points)
  double near_factor = 2.0;     ///< adaptive rule when distance < near_factor * panel diameter
  int near_rule = 6;            ///< triangle rule on adaptive leaves
  int singular_order = 10;      ///< Gauss points per direction of the polar self rule
  int max_depth = 12;           ///< subdivision cap of the adaptive rule
};

/// V_alpha: block (i, j) = int_{panel j} G^alpha(x_i - y) dsigma_y, x_i the
/// centroid of panel i.
DenseOperator assemble_single_layer(const SurfaceMesh& mesh, const BrinkmanParams& params,
                                    const QuadratureOptions& options = {});

/// K_alpha, the direct value of the double layer at the collocation points.
/// Stokes self blocks are fixed by K^0 c = -c/2 for constant c.
DenseOperator assemble_double_layer(const SurfaceMesh& mesh, const BrinkmanParams& params,
                                    const QuadratureOptions& options = {});

/// Transpose with respect to the area-weighted pairing:
/// K*_{(i,a),(j,b)} = (w_j / w_i) K_{(j,b),(i,a)}.
DenseOperator adjoint_double_layer(const DenseOperator& k);

/// Both boundary operators from one pass over the panel pairs.
struct LayerOperators {
  DenseOperator single_layer;
  DenseOperator double_layer;
};
LayerOperators assemble_layer_operators(const SurfaceMesh& mesh, const BrinkmanParams& params,
                                        const QuadratureOptions& options = {});

/// Binary layout: "BBEM", u32 version, u32 N, u8 kind, then 3N x 3N
/// little-endian doubles in row-major order. Weights are not stored.
void write_operator(std::ostream& out, const DenseOperator& op);
DenseOperator read_operator(std::istream& in);

/// Double-layer kernel T(x, y) with (W h)(x) = int T(x, y) h(y) dsigma_y, for
/// surface normal nu at y.
Mat3 double_layer_kernel(const Vec3& x, const Vec3& y, const Vec3& nu, const BrinkmanParams& params);

/// Quadrature nodes for integrating a kernel singular at x over panel p
/// (x off the panel): the regular rule when far, an adaptive rule when near.
const std::vector<QuadratureNode>& panel_nodes(const SurfaceMesh& mesh, const QuadratureSet& regular,
                                               int panel, const Vec3& x,
                                               const QuadratureOptions& options,
                                               std::vector<QuadratureNode>& scratch);

}  // namespace bbem
