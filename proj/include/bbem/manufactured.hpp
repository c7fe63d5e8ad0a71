#pragma once

// Exact homogeneous Brinkman solutions for verification: the k-th column of
// the fundamental solution centered at an exterior source point x0,
//
//   u*(x) = G^alpha(x - x0) e_k,   p*(x) = Pi_k(x - x0).

#include "bbem/fields.hpp"

#include <vector>

namespace bbem {

class ManufacturedSolution {
 public:
  /// column is 1-based (1, 2 or 3).
  ManufacturedSolution(const Vec3& source, int column, const BrinkmanParams& params);

  Vec3 velocity(const Vec3& x) const;
  double pressure(const Vec3& x) const;
  /// sigma(u*, p*) n.
  Vec3 traction(const Vec3& x, const Vec3& n) const;

  /// Values at the panel centroids.
  BoundaryField trace(const SurfaceMesh& mesh) const;
  BoundaryField traction(const SurfaceMesh& mesh) const;

  std::vector<Vec3> velocity(const std::vector<Vec3>& points) const;

  const Vec3& source() const { return source_; }
  int column() const { return column_; }
  const BrinkmanParams& params() const { return params_; }

 private:
  Vec3 source_;
  int column_;
  BrinkmanParams params_;
};

/// Source points closer to the surface than this fraction of the mesh
/// diameter are rejected.
inline constexpr double kMinSourceDistance = 0.25;

/// Throws InvalidSource if x0 lies inside the mesh or too close to it.
ManufacturedSolution manufactured_solution(const SurfaceMesh& mesh, const Vec3& source, int column,
                                           const BrinkmanParams& params);

/// Default source: twice the circumradius about the bounding-box center along
/// a fixed generic direction (distance 2 from the center of a unit sphere).
Vec3 default_source_point(const SurfaceMesh& mesh);

/// n points on a sphere of the given radius about center (Fibonacci lattice).
std::vector<Vec3> sphere_points(const Vec3& center, double radius, int n);

/// Interior sample points: sphere_points about the bounding-box center at
/// `fraction` of the largest inscribed radius about that center.
std::vector<Vec3> interior_sample_points(const SurfaceMesh& mesh, int n = 40, double fraction = 0.6);

/// sqrt(sum |a_i - b_i|^2 / sum |b_i|^2), 0 when both vanish.
double relative_l2_error(const std::vector<Vec3>& approx, const std::vector<Vec3>& exact);

}  // namespace bbem
