#include "bbem/fields.hpp"

#include <cmath>

namespace bbem {

namespace {

Eigen::VectorXd panel_areas(const SurfaceMesh& mesh) {
  return Eigen::Map<const Eigen::VectorXd>(mesh.areas().data(), mesh.num_panels());
}

}  // namespace

BoundaryField::BoundaryField(const SurfaceMesh& mesh)
    : weights_(panel_areas(mesh)), values_(Eigen::VectorXd::Zero(mesh.num_unknowns())) {}

BoundaryField::BoundaryField(const SurfaceMesh& mesh, Eigen::VectorXd values)
    : BoundaryField(panel_areas(mesh), std::move(values)) {}

BoundaryField::BoundaryField(Eigen::VectorXd weights, Eigen::VectorXd values)
    : weights_(std::move(weights)), values_(std::move(values)) {
  if (values_.size() != 3 * weights_.size())
    throw UsageError("boundary field has " + std::to_string(values_.size()) +
                     " values for " + std::to_string(weights_.size()) + " panels");
}

BoundaryField BoundaryField::sample(const SurfaceMesh& mesh,
                                    const std::function<Vec3(const Vec3&)>& fn) {
  BoundaryField f(mesh);
  for (int p = 0; p < mesh.num_panels(); ++p) f.set(p, fn(mesh.centroid(p)));
  return f;
}

BoundaryField BoundaryField::normals(const SurfaceMesh& mesh) {
  BoundaryField f(mesh);
  for (int p = 0; p < mesh.num_panels(); ++p) f.set(p, mesh.normal(p));
  return f;
}

Eigen::VectorXd BoundaryField::component_weights() const {
  Eigen::VectorXd w(values_.size());
  for (int p = 0; p < num_panels(); ++p) w.segment<3>(3 * p).setConstant(weights_[p]);
  return w;
}

double BoundaryField::pairing(const BoundaryField& other) const {
  require_compatible(other);
  double s = 0.0;
  for (int p = 0; p < num_panels(); ++p) s += weights_[p] * at(p).dot(other.at(p));
  return s;
}

double BoundaryField::norm() const { return std::sqrt(pairing(*this)); }

BoundaryField& BoundaryField::operator+=(const BoundaryField& o) {
  require_compatible(o);
  values_ += o.values_;
  return *this;
}

BoundaryField& BoundaryField::operator-=(const BoundaryField& o) {
  require_compatible(o);
  values_ -= o.values_;
  return *this;
}

BoundaryField& BoundaryField::operator*=(double s) {
  values_ *= s;
  return *this;
}

void BoundaryField::require_compatible(const BoundaryField& o) const {
  if (o.weights_.size() != weights_.size())
    throw UsageError("boundary fields live on different meshes");
}

Eigen::VectorXd component_weights(const SurfaceMesh& mesh) {
  Eigen::VectorXd w(mesh.num_unknowns());
  for (int p = 0; p < mesh.num_panels(); ++p) w.segment<3>(3 * p).setConstant(mesh.area(p));
  return w;
}

}  // namespace bbem
