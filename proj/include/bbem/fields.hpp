#pragma once

#include "bbem/mesh.hpp"

#include <functional>

namespace bbem {

/// Piecewise-constant vector field on a surface mesh: values[3 * panel + k].
/// Weights are the panel areas and define the pairing <u, v> = sum w_i u_i . v_i.
class BoundaryField {
 public:
  BoundaryField() = default;
  explicit BoundaryField(const SurfaceMesh& mesh);
  BoundaryField(const SurfaceMesh& mesh, Eigen::VectorXd values);
  BoundaryField(Eigen::VectorXd weights, Eigen::VectorXd values);

  /// Samples fn at the panel centroids.
  static BoundaryField sample(const SurfaceMesh& mesh, const std::function<Vec3(const Vec3&)>& fn);
  /// The outward normal field nu.
  static BoundaryField normals(const SurfaceMesh& mesh);

  int num_panels() const { return static_cast<int>(weights_.size()); }
  Vec3 at(int panel) const { return values_.segment<3>(3 * panel); }
  void set(int panel, const Vec3& v) { values_.segment<3>(3 * panel) = v; }

  const Eigen::VectorXd& values() const { return values_; }
  Eigen::VectorXd& values() { return values_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  /// Panel weights repeated per component (length 3N).
  Eigen::VectorXd component_weights() const;

  double pairing(const BoundaryField& other) const;
  /// sqrt(<u, u>)
  double norm() const;

  BoundaryField& operator+=(const BoundaryField& o);
  BoundaryField& operator-=(const BoundaryField& o);
  BoundaryField& operator*=(double s);

 private:
  void require_compatible(const BoundaryField& o) const;

  Eigen::VectorXd weights_;
  Eigen::VectorXd values_;
};

inline BoundaryField operator+(BoundaryField a, const BoundaryField& b) { return a += b; }
inline BoundaryField operator-(BoundaryField a, const BoundaryField& b) { return a -= b; }
inline BoundaryField operator*(double s, BoundaryField a) { return a *= s; }

/// Per-component weights (area repeated three times) for a mesh.
Eigen::VectorXd component_weights(const SurfaceMesh& mesh);

}  // namespace bbem
