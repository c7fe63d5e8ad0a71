#pragma once

// Newtonian volume potentials of a voxel-sampled forcing f over the grid's
// cells:
//
//   (N f)(x) = -int G^alpha(x - y) f(y) dy,    (Q f)(x) = -int Pi(x - y) . f(y) dy,
//
// so that (Delta - alpha) N f - grad Q f = f and div N f = 0 inside.
// Cells use the midpoint rule. A point at a cell center gets the equal-volume
// ball value -(R^2 / 3) f for that cell and no pressure or stress from it;
// cells near other points are subdivided.

#include "bbem/fields.hpp"
#include "bbem/volume_grid.hpp"

#include <vector>

namespace bbem {

enum class NewtonianQuantity { Velocity, Pressure, Traction };

/// Self-cell velocity factor: N f at a cell center receives -(R^2 / 3) f_c.
double self_cell_factor(const VolumeGrid& grid);

/// (rows * P) x (3 M) map from the forcing to the quantity at the points.
Eigen::MatrixXd newtonian_matrix(const VolumeGrid& grid, const std::vector<Vec3>& points,
                                 const std::vector<Vec3>& normals, NewtonianQuantity q,
                                 const BrinkmanParams& params);

std::vector<Vec3> newtonian_velocity(const VolumeGrid& grid, const VolumeField& f,
                                     const std::vector<Vec3>& points, const BrinkmanParams& params);
std::vector<double> newtonian_pressure(const VolumeGrid& grid, const VolumeField& f,
                                       const std::vector<Vec3>& points);

/// Velocity and pressure at all cell centers via a translation-invariant
/// table over index offsets.
struct GridPotential {
  VolumeField velocity;        ///< 3 M
  Eigen::VectorXd pressure;    ///< M
};

class NewtonianGridOperator {
 public:
  NewtonianGridOperator(const VolumeGrid& grid, const BrinkmanParams& params);
  GridPotential apply(const VolumeField& f) const;
  /// Transpose of the velocity part of apply().
  VolumeField apply_velocity_transpose(const VolumeField& u) const;

 private:
  const VolumeGrid* grid_;
  std::array<int, 3> extent_{};
  std::vector<Mat3> velocity_table_;
  std::vector<Vec3> pressure_table_;
  int offset_index(int di, int dj, int dk) const;
};

/// Boundary trace and traction t = sigma(N f, Q f) nu at the panel centroids.
struct NewtonianBoundaryData {
  BoundaryField trace;
  BoundaryField traction;
};
NewtonianBoundaryData newtonian_boundary_data(const VolumeGrid& grid, const VolumeField& f,
                                              const SurfaceMesh& mesh, const BrinkmanParams& params);

/// Precomputed boundary maps for repeated forcing.
struct NewtonianBoundaryMaps {
  Eigen::MatrixXd trace;     ///< 3N x 3M
  Eigen::MatrixXd traction;  ///< 3N x 3M
  NewtonianBoundaryData apply(const SurfaceMesh& mesh, const VolumeField& f) const;
};
NewtonianBoundaryMaps newtonian_boundary_maps(const VolumeGrid& grid, const SurfaceMesh& mesh,
                                              const BrinkmanParams& params);

}  // namespace bbem
