#pragma once

#include "bbem/mesh.hpp"

#include <string>
#include <variant>
#include <vector>

namespace bbem {

struct CubeDomain {
  Vec3 center = Vec3::Zero();
  double side = 1.0;
};

struct BallDomain {
  Vec3 center = Vec3::Zero();
  double radius = 1.0;
};

/// Interior of a closed mesh, decided by the winding number.
struct MeshDomain {
  const SurfaceMesh* mesh = nullptr;
};

using GridDomain = std::variant<CubeDomain, BallDomain, MeshDomain>;

/// Uniform voxels of edge h whose centers lie strictly inside the domain.
/// Cell c has integer coordinates index[c] and center origin + h * index[c].
struct VolumeGrid {
  Vec3 origin = Vec3::Zero();
  double h = 0.0;
  int resolution = 0;
  std::vector<std::array<int, 3>> index;
  std::vector<Vec3> centers;
  std::string provenance;

  int size() const { return static_cast<int>(centers.size()); }
  double cell_volume() const { return h * h * h; }
  double total_volume() const { return size() * cell_volume(); }
  /// Radius of the ball with the cell's volume.
  double equivalent_radius() const;
};

/// `resolution` cells along the longest side of the domain's bounding box.
VolumeGrid build_volume_grid(const GridDomain& domain, int resolution);

/// Vector field on a volume grid: values[3 * cell + k].
using VolumeField = Eigen::VectorXd;

/// Discrete L2 norm sqrt(sum |f_c|^2 h^3).
double volume_norm(const VolumeGrid& grid, const VolumeField& f);

/// f_c = fn(center_c).
template <class Fn>
VolumeField sample_volume_field(const VolumeGrid& grid, Fn&& fn) {
  VolumeField f(3 * grid.size());
  for (int c = 0; c < grid.size(); ++c) f.segment<3>(3 * c) = fn(grid.centers[c]);
  return f;
}

}  // namespace bbem
