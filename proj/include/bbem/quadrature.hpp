#pragma once

#include "bbem/mesh.hpp"

#include <vector>

namespace bbem {

struct QuadratureNode {
  Vec3 point;
  double weight;  ///< area units
};

/// Symmetric Gaussian rule on the reference triangle; weights sum to 1.
struct TriangleRule {
  std::vector<std::array<double, 3>> barycentric;
  std::vector<double> weights;
  int degree = 0;
  int size() const { return static_cast<int>(weights.size()); }
};

/// Rules with 1, 3, 6 and 12 points, exact for degree 1, 2, 4 and 6.
const TriangleRule& triangle_rule(int points);

void map_rule(const TriangleRule& rule, const Vec3& a, const Vec3& b, const Vec3& c,
              std::vector<QuadratureNode>& out);

/// Per-panel nodes and weights; each panel's weights sum to its area.
struct QuadratureSet {
  int order = 0;
  std::vector<std::vector<QuadratureNode>> panels;
};

QuadratureSet panel_quadrature(const SurfaceMesh& mesh, int order);

/// Gauss-Legendre nodes and weights on [0, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule& gauss_legendre(int n);

/// Polar (Duffy-type) rule for a triangle and a point on it. The triangle is
/// split into sub-triangles with apex at the point; each is integrated in
/// (angle, scaled radius) with `order` Gauss points per direction. The r dr
/// Jacobian cancels a 1/r singularity at the point, so f/r is integrated with
/// spectral accuracy for smooth f.
std::vector<QuadratureNode> duffy_singular_rule(const Vec3& a, const Vec3& b, const Vec3& c,
                                                const Vec3& singular_point, int order);

/// Recursive 1->4 subdivision until every leaf satisfies
/// |target - leaf centroid| >= separation * leaf diameter (or the depth cap is
/// hit); each leaf gets `rule`.
void adaptive_rule(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& target,
                   const TriangleRule& rule, double separation, int max_depth,
                   std::vector<QuadratureNode>& out);

/// Exact integral of 1/|x - y| over a flat triangle for x in its (closed) plane
/// region.
double inverse_distance_integral(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& x);

/// Exact integral of the Stokeslet (I/r + r r^T/r^3) / (8 pi) over a flat
/// triangle for x lying on the triangle.
Mat3 stokeslet_panel_integral(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& x);

}  // namespace bbem
