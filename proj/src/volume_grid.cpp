#include "bbem/volume_grid.hpp"

#include <cmath>
#include <functional>

namespace bbem {

double VolumeGrid::equivalent_radius() const {
  return std::cbrt(3.0 * cell_volume() / (4.0 * kPi));
}

VolumeGrid build_volume_grid(const GridDomain& domain, int resolution) {
  if (resolution < 2) throw UsageError("volume grid resolution must be >= 2");
  if (resolution > 256) throw UsageError("volume grid resolution above 256 is not supported");

  Vec3 lo, hi;
  std::function<bool(const Vec3&)> inside;
  std::string provenance;
  if (const auto* cube = std::get_if<CubeDomain>(&domain)) {
    if (!(cube->side > 0.0)) throw UsageError("cube side must be positive");
    lo = cube->center.array() - 0.5 * cube->side;
    hi = cube->center.array() + 0.5 * cube->side;
    // Every voxel center of the aligned lattice is interior.
    inside = [](const Vec3&) { return true; };
    provenance = "cube";
  } else if (const auto* ball = std::get_if<BallDomain>(&domain)) {
    if (!(ball->radius > 0.0)) throw UsageError("ball radius must be positive");
    lo = ball->center.array() - ball->radius;
    hi = ball->center.array() + ball->radius;
    const BallDomain b = *ball;
    inside = [b](const Vec3& x) { return (x - b.center).norm() < b.radius; };
    provenance = "ball";
  } else {
    const SurfaceMesh* mesh = std::get<MeshDomain>(domain).mesh;
    if (mesh == nullptr) throw UsageError("mesh domain without a mesh");
    lo = mesh->bbox_min();
    hi = mesh->bbox_max();
    inside = [mesh](const Vec3& x) {
      return mesh->contains(x) && mesh->distance_to_surface(x) > 1e-12 * mesh->scale();
    };
    provenance = "mesh";
  }

  const Vec3 extent = hi - lo;
  VolumeGrid g;
  g.resolution = resolution;
  g.h = extent.maxCoeff() / resolution;
  g.provenance = provenance;
  std::array<int, 3> counts;
  for (int d = 0; d < 3; ++d) {
    counts[d] = std::max(1, static_cast<int>(std::lround(extent[d] / g.h)));
    // Center the lattice in the box along each axis.
    g.origin[d] = lo[d] + 0.5 * (extent[d] - counts[d] * g.h) + 0.5 * g.h;
  }
  for (int k = 0; k < counts[2]; ++k)
    for (int j = 0; j < counts[1]; ++j)
      for (int i = 0; i < counts[0]; ++i) {
        const Vec3 x = g.origin + g.h * Vec3(i, j, k);
        if (!inside(x)) continue;
        g.index.push_back({i, j, k});
        g.centers.push_back(x);
      }
  if (g.centers.empty()) throw UsageError("volume grid has no interior cells");
  return g;
}

double volume_norm(const VolumeGrid& grid, const VolumeField& f) {
  return std::sqrt(f.squaredNorm() * grid.cell_volume());
}

}  // namespace bbem
