#pragma once

// Boundary-limit measurements shared by the verification suites and the
// convergence study.

#include "bbem/potentials.hpp"

#include <cstdint>
#include <vector>

namespace bbem {

/// Relative L2 errors of the jump relations for a density g:
///   single_layer_trace  (V g)_int - (V g)_ext        = 0
///   double_layer_jump   (W g)_ext - (W g)_int        = g
///   traction_jump       t_int(V g) - t_ext(V g)      = g
/// One-sided limits are taken at offsets delta and 2 delta along the normal
/// from each centroid and extrapolated linearly, delta = 0.5 D^2 with D the
/// largest panel diameter.
struct JumpErrors {
  double single_layer_trace = 0.0;
  double double_layer_jump = 0.0;
  double traction_jump = 0.0;
  double offset = 0.0;
};

/// `panels` selects the collocation panels (all when empty).
JumpErrors measure_jumps(const SurfaceMesh& mesh, const BoundaryField& density, const BrinkmanParams& params,
                         const std::vector<int>& panels = {});

/// Limits of a layer quantity at the selected centroids from one side:
/// 2 f(x + s delta nu) - f(x + 2 s delta nu) with s = -1 inside, +1 outside.
std::vector<Vec3> one_sided_limit(const SurfaceMesh& mesh, const BoundaryField& density,
                                  const BrinkmanParams& params, LayerQuantity quantity, bool exterior,
                                  const std::vector<int>& panels, double delta);

/// Density with components a + b . x + x^T C x whose coefficients are drawn
/// from a seeded standard normal distribution.
BoundaryField smooth_random_density(const SurfaceMesh& mesh, std::uint64_t seed);

}  // namespace bbem
