#include "bbem/semilinear.hpp"

#include "bbem/potentials.hpp"

#include <json.hpp>

#include <cmath>
#include <map>
#include <random>

namespace bbem {

void PicardConfig::validate() const {
  if (!(tol > 0.0) || !std::isfinite(tol)) throw ConfigError("picard tol must be positive");
  if (max_iter < 1) throw ConfigError("picard max_iter must be at least 1");
  if (!(damping > 0.0 && damping <= 1.0)) throw ConfigError("picard damping must lie in (0, 1]");
}

namespace {

nlohmann::ordered_json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

std::string ContractionReport::to_json() const {
  nlohmann::ordered_json j;
  j["iterates"] = iterates;
  j["measured_ratio"] = measured_ratio;
  j["C_est"] = constants.C_est;
  j["c1prime_est"] = constants.c1prime_est;
  j["zeta_est"] = finite_or_null(constants.zeta_est);
  j["eta_est"] = finite_or_null(constants.eta_est);
  j["converged"] = converged;
  j["ball_respected"] = ball_respected;
  j["iterations"] = iterations;
  j["iterate_norms"] = iterate_norms;
  j["seed"] = constants.seed;
  j["samples"] = constants.samples;
  return j.dump(2);
}

MixedPoissonMap::MixedPoissonMap(const SurfaceMesh& mesh, const PatchLabeling& labeling,
                                 const VolumeGrid& grid, const BrinkmanParams& params,
                                 const SolverOptions& options)
    : mesh_(&mesh), grid_(&grid), labeling_(labeling), params_(params) {
  params_.validate();
  if (params_.alpha == 0.0) throw UnsupportedParameter("the mixed problem requires alpha > 0");
  if (grid.size() == 0) throw UsageError("empty volume grid");
  system_ = std::make_unique<BoundarySystem>(mesh, params_, options);
  lu_ = &system_->mixed_lu(labeling_);
  newtonian_ = newtonian_boundary_maps(grid, mesh, params_);
  volume_ = std::make_unique<NewtonianGridOperator>(grid, params_);
  single_layer_on_grid_ =
      evaluation_matrix(mesh, grid.centers, {}, LayerQuantity::SingleLayerVelocity, params_);
}

Eigen::VectorXd MixedPoissonMap::boundary_rhs(const Eigen::VectorXd& dirichlet,
                                              const Eigen::VectorXd& neumann) const {
  Eigen::VectorXd b(mesh_->num_unknowns());
  for (int p = 0; p < mesh_->num_panels(); ++p)
    b.segment<3>(3 * p) = labeling_.is_dirichlet(p) ? dirichlet.segment<3>(3 * p) : neumann.segment<3>(3 * p);
  return b;
}

Eigen::VectorXd MixedPoissonMap::density(const VolumeField& forcing, const BoundaryField& h0,
                                         const BoundaryField& g0) const {
  if (h0.num_panels() != mesh_->num_panels() || g0.num_panels() != mesh_->num_panels())
    throw UsageError("boundary data do not match the mesh");
  const Eigen::VectorXd trace = newtonian_.trace * forcing;
  const Eigen::VectorXd traction = newtonian_.traction * forcing;
  return lu_->solve(boundary_rhs(h0.values() - trace, g0.values() - traction));
}

VolumeField MixedPoissonMap::velocity_from(const VolumeField& forcing, const Eigen::VectorXd& density) const {
  return volume_->apply(forcing).velocity + single_layer_on_grid_ * density;
}

VolumeField MixedPoissonMap::apply(const VolumeField& forcing, const BoundaryField& h0,
                                   const BoundaryField& g0) const {
  return velocity_from(forcing, density(forcing, h0, g0));
}

VolumeField MixedPoissonMap::forcing_block(const VolumeField& forcing) const {
  const Eigen::VectorXd b = boundary_rhs(-(newtonian_.trace * forcing), -(newtonian_.traction * forcing));
  return velocity_from(forcing, lu_->solve(b));
}

VolumeField MixedPoissonMap::forcing_block_adjoint(const VolumeField& u) const {
  // The boundary_rhs selection is a row mask; its transpose scatters back.
  const Eigen::VectorXd y = lu_->transpose().solve(single_layer_on_grid_.transpose() * u);
  Eigen::VectorXd yd = Eigen::VectorXd::Zero(y.size()), yn = Eigen::VectorXd::Zero(y.size());
  for (int p = 0; p < mesh_->num_panels(); ++p)
    (labeling_.is_dirichlet(p) ? yd : yn).segment<3>(3 * p) = y.segment<3>(3 * p);
  return volume_->apply_velocity_transpose(u) - newtonian_.trace.transpose() * yd -
         newtonian_.traction.transpose() * yn;
}

VolumeField MixedPoissonMap::boundary_block(const Eigen::VectorXd& data) const {
  return single_layer_on_grid_ * lu_->solve(data);
}

Eigen::VectorXd MixedPoissonMap::boundary_block_adjoint(const VolumeField& u) const {
  return lu_->transpose().solve(single_layer_on_grid_.transpose() * u);
}

VolumeField norm_weighted_product(const VolumeField& v, const VolumeField& w) {
  if (v.size() != w.size()) throw UsageError("volume fields differ in size");
  VolumeField out(v.size());
  for (Eigen::Index c = 0; c < v.size() / 3; ++c)
    out.segment<3>(3 * c) = v.segment<3>(3 * c).norm() * w.segment<3>(3 * c);
  return out;
}

namespace {

Eigen::VectorXd random_vector(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

// Largest singular value of a Euclidean-frame operator from its action and
// adjoint action, by power iteration on B^T B.
template <class Op, class Adj>
double power_norm(Eigen::Index n, Op&& op, Adj&& adj, std::mt19937_64& rng, int max_iter = 30,
                  double rtol = 1e-5) {
  Eigen::VectorXd x = random_vector(n, rng);
  x.normalize();
  double sigma = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    const Eigen::VectorXd y = adj(op(x));
    const double lambda = y.norm();
    if (lambda == 0.0) return 0.0;
    x = y / lambda;
    const double next = std::sqrt(lambda);
    if (it > 2 && std::abs(next - sigma) <= rtol * next) return next;
    sigma = next;
  }
  return sigma;
}

}  // namespace

SmallnessConstants estimate_constants(const MixedPoissonMap& map, double beta, int samples,
                                      std::uint64_t seed) {
  if (samples < 8) throw UsageError("at least 8 samples are required for the smallness constants");
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw DomainError("beta must be finite and >= 0");
  const SurfaceMesh& mesh = map.mesh();
  const VolumeGrid& grid = map.grid();
  const Eigen::Index m3 = 3 * grid.size(), n3 = mesh.num_unknowns();
  const double grid_scale = std::sqrt(grid.cell_volume());
  const Eigen::VectorXd w = component_weights(mesh);
  const Eigen::VectorXd sw = w.cwiseSqrt();

  std::mt19937_64 rng(seed);
  SmallnessConstants out;
  out.seed = seed;
  out.samples = samples;

  // The data norm is the sum of the three component norms, so the map's norm
  // is the largest of its three block norms.
  const double sigma_f = power_norm(
      m3, [&](const Eigen::VectorXd& x) { return Eigen::VectorXd(map.forcing_block(x)); },
      [&](const Eigen::VectorXd& y) { return Eigen::VectorXd(map.forcing_block_adjoint(y)); }, rng);
  double sigma_b = 0.0;
  for (PatchLabel patch : {PatchLabel::Dirichlet, PatchLabel::Neumann}) {
    Eigen::VectorXd mask = Eigen::VectorXd::Zero(n3);
    for (int p = 0; p < mesh.num_panels(); ++p)
      if (map.labeling().labels[p] == patch) mask.segment<3>(3 * p).setOnes();
    // x lives in the orthonormal boundary frame: data = mask * x / sqrt(w).
    const double s = power_norm(
        n3,
        [&](const Eigen::VectorXd& x) {
          return Eigen::VectorXd(grid_scale * map.boundary_block(mask.cwiseProduct(x).cwiseQuotient(sw)));
        },
        [&](const Eigen::VectorXd& y) {
          return Eigen::VectorXd(
              grid_scale * mask.cwiseProduct(map.boundary_block_adjoint(y)).cwiseQuotient(sw));
        },
        rng);
    sigma_b = std::max(sigma_b, s);
  }
  out.C_est = std::max(sigma_f, sigma_b);

  // c1' is sampled over outputs of the solution map (discretely smooth fields).
  std::vector<VolumeField> fields;
  for (int s = 0; s < samples; ++s) {
    const VolumeField f = random_vector(m3, rng);
    const BoundaryField h0(mesh, random_vector(n3, rng));
    const BoundaryField g0(mesh, random_vector(n3, rng));
    VolumeField v = map.apply(f, h0, g0);
    const double n = volume_norm(grid, v);
    if (n > 0.0) fields.push_back(v / n);
  }
  for (std::size_t i = 0; i < fields.size(); ++i)
    for (std::size_t j = i; j < fields.size(); ++j)
      out.c1prime_est =
          std::max(out.c1prime_est, volume_norm(grid, norm_weighted_product(fields[i], fields[j])));

  out.C2_est = out.c1prime_est * beta;
  if (out.C2_est > 0.0 && out.C_est > 0.0) {
    out.zeta_est = 3.0 / (16.0 * out.C2_est * out.C_est * out.C_est);
    out.eta_est = 1.0 / (4.0 * out.C2_est * out.C_est);
  }
  return out;
}

PicardResult picard_solve(const MixedPoissonMap& map, const VolumeField& f, const BoundaryField& h0,
                          const BoundaryField& g0, const PicardConfig& config,
                          const SmallnessConstants* constants) {
  config.validate();
  const VolumeGrid& grid = map.grid();
  const double beta = map.params().beta;
  if (f.size() != 3 * grid.size()) throw UsageError("forcing does not match the volume grid");
  if (!f.allFinite()) throw UsageError("forcing contains non-finite values");

  ContractionReport report;
  if (constants) report.constants = *constants;
  VolumeField v = config.initial ? *config.initial : VolumeField::Zero(f.size());
  if (v.size() != f.size()) throw UsageError("initial guess does not match the volume grid");

  // Boundary data enter the map linearly and do not change between iterates.
  const Eigen::VectorXd data_density = map.density(VolumeField::Zero(f.size()), h0, g0);

  VolumeField forcing;
  Eigen::VectorXd psi;
  int growths = 0;
  const int iterations = beta == 0.0 ? 1 : config.max_iter;
  for (int k = 0; k < iterations; ++k) {
    forcing = f;
    if (beta != 0.0) forcing += beta * norm_weighted_product(v, v);
    psi = data_density + map.density(forcing, BoundaryField(map.mesh()), BoundaryField(map.mesh()));
    VolumeField next = map.velocity_from(forcing, psi);
    if (config.damping < 1.0) next = (1.0 - config.damping) * v + config.damping * next;
    const double diff = volume_norm(grid, next - v);
    v = std::move(next);
    report.iterates.push_back(diff);
    report.iterate_norms.push_back(volume_norm(grid, v));
    report.iterations = k + 1;
    if (!std::isfinite(diff)) throw SmallnessViolated("Picard iteration produced non-finite values", report);
    if (k > 0) {
      const double prev = report.iterates[k - 1];
      growths = diff > prev ? growths + 1 : 0;
      // Ratios below the round-off floor of the iterate carry no information.
      if (prev > 1e3 * 2.2e-16 * std::max(report.iterate_norms[k], 1e-300))
        report.measured_ratio = std::max(report.measured_ratio, diff / prev);
      if (growths >= 3 && diff > 10.0 * report.iterates.front())
        throw SmallnessViolated("Picard iteration diverges: data exceed the smallness regime", report);
    }
    if (diff <= config.tol || beta == 0.0) {
      report.converged = true;
      break;
    }
  }
  if (constants)
    for (double n : report.iterate_norms)
      if (n > constants->eta_est) report.ball_respected = false;
  if (!report.converged)
    throw NotConverged("Picard iteration did not reach tol within max_iter iterations", report);

  PicardResult result;
  result.handle.representation = Representation::WithNewtonian;
  result.handle.layer = Representation::SingleLayer;
  result.handle.mesh = &map.mesh();
  result.handle.params = map.params();
  result.handle.density = BoundaryField(map.mesh(), psi);
  result.handle.forcing = VolumeForcing{&grid, forcing};
  result.report = std::move(report);
  result.velocity = std::move(v);
  return result;
}

PicardResult picard_solve(const SurfaceMesh& mesh, const PatchLabeling& labeling, const VolumeGrid& grid,
                          const BrinkmanParams& params, const VolumeField& f, const BoundaryField& h0,
                          const BoundaryField& g0, const PicardConfig& config) {
  config.validate();
  MixedPoissonMap map(mesh, labeling, grid, params);
  PicardResult r = picard_solve(map, f, h0, g0, config);
  // The handle must not point into the temporary map.
  r.handle.mesh = &mesh;
  r.handle.forcing->grid = &grid;
  return r;
}

double semilinear_residual(const SolutionHandle& handle, const VolumeGrid& grid,
                           const BrinkmanParams& params, const VolumeField& f, int max_points) {
  if (handle.mesh == nullptr) throw UsageError("solution handle has no mesh");
  if (f.size() != 3 * grid.size()) throw UsageError("forcing does not match the volume grid");
  if (max_points < 1) throw UsageError("max_points must be positive");
  const double h = grid.h;
  std::map<std::array<int, 3>, int> lookup;
  for (int c = 0; c < grid.size(); ++c) lookup[grid.index[c]] = c;

  // Cells whose full stencil exists and stays three cells from the boundary.
  std::vector<int> candidates;
  for (int c = 0; c < grid.size(); ++c) {
    bool ok = handle.mesh->distance_to_surface(grid.centers[c]) >= 3.0 * h;
    for (int d = 0; d < 3 && ok; ++d)
      for (int s : {-2, -1, 1, 2}) {
        auto idx = grid.index[c];
        idx[d] += s;
        if (!lookup.count(idx)) ok = false;
      }
    if (ok) candidates.push_back(c);
  }
  if (candidates.empty()) throw UsageError("no interior cells with a full finite-difference stencil");
  std::vector<int> chosen;
  const std::size_t count = std::min<std::size_t>(candidates.size(), max_points);
  for (std::size_t i = 0; i < count; ++i) chosen.push_back(candidates[i * candidates.size() / count]);

  std::vector<Vec3> points;
  for (int c : chosen) {
    points.push_back(grid.centers[c]);
    for (int d = 0; d < 3; ++d)
      for (int s : {-2, -1, 1, 2}) points.push_back(grid.centers[c] + s * h * Vec3::Unit(d));
  }
  const FieldSolution sol = evaluate_solution(handle, points);

  double r2 = 0.0, terms = 0.0;
  double lap2 = 0.0, lin2 = 0.0, nl2 = 0.0, grad2 = 0.0, f2 = 0.0;
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    const std::size_t base = 13 * i;
    const Vec3 u0 = sol.velocity[base];
    Vec3 lap = Vec3::Zero(), grad = Vec3::Zero();
    for (int d = 0; d < 3; ++d) {
      const std::size_t o = base + 1 + 4 * d;  // -2, -1, +1, +2
      lap += (-sol.velocity[o] + 16.0 * sol.velocity[o + 1] - 30.0 * u0 + 16.0 * sol.velocity[o + 2] -
              sol.velocity[o + 3]) / (12.0 * h * h);
      grad[d] = (sol.pressure[o] - 8.0 * sol.pressure[o + 1] + 8.0 * sol.pressure[o + 2] - sol.pressure[o + 3]) /
                (12.0 * h);
    }
    const Vec3 fc = f.segment<3>(3 * chosen[i]);
    const Vec3 nl = params.beta * u0.norm() * u0;
    const Vec3 r = lap - params.alpha * u0 - nl - grad - fc;
    r2 += r.squaredNorm();
    lap2 += lap.squaredNorm();
    lin2 += (params.alpha * u0).squaredNorm();
    nl2 += nl.squaredNorm();
    grad2 += grad.squaredNorm();
    f2 += fc.squaredNorm();
  }
  terms = std::sqrt(lap2) + std::sqrt(lin2) + std::sqrt(nl2) + std::sqrt(grad2) + std::sqrt(f2);
  if (terms == 0.0) return 0.0;
  return std::sqrt(r2) / terms;
}

}  // namespace bbem
