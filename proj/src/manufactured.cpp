#include "bbem/manufactured.hpp"

#include "bbem/kernels.hpp"

#include <cmath>

namespace bbem {

ManufacturedSolution::ManufacturedSolution(const Vec3& source, int column, const BrinkmanParams& params)
    : source_(source), column_(column), params_(params) {
  params_.validate();
  if (column < 1 || column > 3) throw UsageError("manufactured column must be 1, 2 or 3");
  if (!source.allFinite()) throw InvalidSource("source point is not finite");
}

Vec3 ManufacturedSolution::velocity(const Vec3& x) const {
  return brinkman_velocity_tensor(x - source_, params_).col(column_ - 1);
}

double ManufacturedSolution::pressure(const Vec3& x) const {
  return pressure_vector(x - source_)[column_ - 1];
}

Vec3 ManufacturedSolution::traction(const Vec3& x, const Vec3& n) const {
  const Tensor3 s = brinkman_stress_tensor(x, source_, params_);
  const int k = column_ - 1;
  Vec3 t;
  for (int i = 0; i < 3; ++i) t[i] = s(i, k, 0) * n[0] + s(i, k, 1) * n[1] + s(i, k, 2) * n[2];
  return t;
}

BoundaryField ManufacturedSolution::trace(const SurfaceMesh& mesh) const {
  BoundaryField f(mesh);
  for (int p = 0; p < mesh.num_panels(); ++p) f.set(p, velocity(mesh.centroid(p)));
  return f;
}

BoundaryField ManufacturedSolution::traction(const SurfaceMesh& mesh) const {
  BoundaryField f(mesh);
  for (int p = 0; p < mesh.num_panels(); ++p) f.set(p, traction(mesh.centroid(p), mesh.normal(p)));
  return f;
}

std::vector<Vec3> ManufacturedSolution::velocity(const std::vector<Vec3>& points) const {
  std::vector<Vec3> out;
  out.reserve(points.size());
  for (const Vec3& x : points) out.push_back(velocity(x));
  return out;
}

ManufacturedSolution manufactured_solution(const SurfaceMesh& mesh, const Vec3& source, int column,
                                           const BrinkmanParams& params) {
  if (!source.allFinite()) throw InvalidSource("source point is not finite");
  if (mesh.contains(source)) throw InvalidSource("source point lies inside the domain");
  const double dist = mesh.distance_to_surface(source);
  if (dist < kMinSourceDistance * mesh.scale())
    throw InvalidSource("source point is " + std::to_string(dist) + " from the boundary; at least " +
                        std::to_string(kMinSourceDistance * mesh.scale()) + " is required");
  return ManufacturedSolution(source, column, params);
}

Vec3 default_source_point(const SurfaceMesh& mesh) {
  const Vec3 center = 0.5 * (mesh.bbox_min() + mesh.bbox_max());
  double radius = 0.0;
  for (const Vec3& v : mesh.vertices()) radius = std::max(radius, (v - center).norm());
  return center + 2.0 * radius * Vec3(1.2, 1.0, 1.3).normalized();
}

std::vector<Vec3> sphere_points(const Vec3& center, double radius, int n) {
  std::vector<Vec3> out;
  out.reserve(n);
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / n;
    const double r = std::sqrt(1.0 - z * z);
    const double phi = golden * i;
    out.push_back(center + radius * Vec3(r * std::cos(phi), r * std::sin(phi), z));
  }
  return out;
}

std::vector<Vec3> interior_sample_points(const SurfaceMesh& mesh, int n, double fraction) {
  const Vec3 center = 0.5 * (mesh.bbox_min() + mesh.bbox_max());
  if (!mesh.contains(center)) throw UsageError("bounding-box center lies outside the domain");
  return sphere_points(center, fraction * mesh.distance_to_surface(center), n);
}

double relative_l2_error(const std::vector<Vec3>& approx, const std::vector<Vec3>& exact) {
  if (approx.size() != exact.size()) throw UsageError("point sets differ in size");
  double e = 0.0, n = 0.0;
  for (std::size_t i = 0; i < exact.size(); ++i) {
    e += (approx[i] - exact[i]).squaredNorm();
    n += exact[i].squaredNorm();
  }
  if (n == 0.0) return e == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::sqrt(e / n);
}

}  // namespace bbem
