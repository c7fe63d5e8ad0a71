#include "bbem/diagnostics.hpp"

#include <cmath>
#include <numeric>
#include <random>

namespace bbem {

std::vector<Vec3> one_sided_limit(const SurfaceMesh& mesh, const BoundaryField& density,
                                  const BrinkmanParams& params, LayerQuantity quantity, bool exterior,
                                  const std::vector<int>& panels, double delta) {
  const double s = exterior ? 1.0 : -1.0;
  std::vector<Vec3> near, far, normals;
  for (int p : panels) {
    near.push_back(mesh.centroid(p) + s * delta * mesh.normal(p));
    far.push_back(mesh.centroid(p) + 2.0 * s * delta * mesh.normal(p));
    normals.push_back(mesh.normal(p));
  }
  const bool traction = quantity == LayerQuantity::SingleLayerTraction ||
                        quantity == LayerQuantity::DoubleLayerTraction;
  const std::vector<Vec3> none;
  const auto a = unflatten(evaluate_layer(mesh, density.values(), near, traction ? normals : none, quantity, params));
  const auto b = unflatten(evaluate_layer(mesh, density.values(), far, traction ? normals : none, quantity, params));
  std::vector<Vec3> out(panels.size());
  for (std::size_t i = 0; i < panels.size(); ++i) out[i] = 2.0 * a[i] - b[i];
  return out;
}

JumpErrors measure_jumps(const SurfaceMesh& mesh, const BoundaryField& density, const BrinkmanParams& params,
                         const std::vector<int>& selection) {
  if (density.num_panels() != mesh.num_panels()) throw UsageError("density does not match the mesh");
  std::vector<int> panels = selection;
  if (panels.empty()) {
    panels.resize(mesh.num_panels());
    std::iota(panels.begin(), panels.end(), 0);
  }
  const double d = mesh.max_panel_diameter();
  JumpErrors out;
  out.offset = 0.5 * d * d;

  auto rel = [&](const std::vector<Vec3>& plus, const std::vector<Vec3>& minus, bool subtract_density,
                 const std::vector<Vec3>& scale) {
    double e = 0.0, n = 0.0;
    for (std::size_t i = 0; i < panels.size(); ++i) {
      Vec3 r = plus[i] - minus[i];
      if (subtract_density) r -= density.at(panels[i]);
      const double w = mesh.area(panels[i]);
      e += w * r.squaredNorm();
      n += w * scale[i].squaredNorm();
    }
    return n > 0.0 ? std::sqrt(e / n) : std::sqrt(e);
  };
  std::vector<Vec3> g;
  for (int p : panels) g.push_back(density.at(p));

  const auto vi = one_sided_limit(mesh, density, params, LayerQuantity::SingleLayerVelocity, false, panels, out.offset);
  const auto vo = one_sided_limit(mesh, density, params, LayerQuantity::SingleLayerVelocity, true, panels, out.offset);
  out.single_layer_trace = rel(vi, vo, false, vi);
  const auto wi = one_sided_limit(mesh, density, params, LayerQuantity::DoubleLayerVelocity, false, panels, out.offset);
  const auto wo = one_sided_limit(mesh, density, params, LayerQuantity::DoubleLayerVelocity, true, panels, out.offset);
  out.double_layer_jump = rel(wo, wi, true, g);
  const auto ti = one_sided_limit(mesh, density, params, LayerQuantity::SingleLayerTraction, false, panels, out.offset);
  const auto to = one_sided_limit(mesh, density, params, LayerQuantity::SingleLayerTraction, true, panels, out.offset);
  out.traction_jump = rel(ti, to, true, g);
  return out;
}

BoundaryField smooth_random_density(const SurfaceMesh& mesh, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::array<double, 3> a;
  std::array<Vec3, 3> b;
  std::array<Mat3, 3> c;
  for (int k = 0; k < 3; ++k) {
    a[k] = normal(rng);
    for (int i = 0; i < 3; ++i) b[k][i] = normal(rng);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) c[k](i, j) = 0.5 * normal(rng);
  }
  return BoundaryField::sample(mesh, [&](const Vec3& x) {
    Vec3 v;
    for (int k = 0; k < 3; ++k) v[k] = a[k] + b[k].dot(x) + x.dot(c[k] * x);
    return v;
  });
}

}  // namespace bbem
