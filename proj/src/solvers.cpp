#include "bbem/solvers.hpp"

#include "bbem/potentials.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

namespace bbem {

std::string to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::Dirichlet: return "dirichlet";
    case ProblemKind::Neumann: return "neumann";
    case ProblemKind::Mixed: return "mixed";
  }
  return "unknown";
}

std::string to_string(Representation r) {
  switch (r) {
    case Representation::SingleLayer: return "single_layer";
    case Representation::DoubleLayer: return "double_layer";
    case Representation::MixedSingleLayer: return "mixed_single_layer";
    case Representation::WithNewtonian: return "with_newtonian";
  }
  return "unknown";
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void require_field(const SurfaceMesh& mesh, const BoundaryField& f, const char* what) {
  if (f.num_panels() != mesh.num_panels())
    throw UsageError(std::string(what) + " has " + std::to_string(f.num_panels()) +
                     " panels, mesh has " + std::to_string(mesh.num_panels()));
  if (!f.values().allFinite()) throw UsageError(std::string(what) + " contains non-finite values");
}

double relative_residual(const Eigen::MatrixXd& a, const Eigen::VectorXd& x, const Eigen::VectorXd& b,
                         const Eigen::VectorXd& w) {
  const double bn = std::sqrt(b.cwiseAbs2().dot(w));
  if (bn == 0.0) return 0.0;
  const Eigen::VectorXd r = a * x - b;
  return std::sqrt(r.cwiseAbs2().dot(w)) / bn;
}

void require_invertible(const Eigen::PartialPivLU<Eigen::MatrixXd>& lu, const char* what) {
  const double rc = lu.rcond();
  if (!(rc > 1e-14))
    throw IllConditioned(std::string(what) + " is numerically singular (rcond " + std::to_string(rc) + ")");
}

void fill_condition(const Eigen::MatrixXd& a, const Eigen::VectorXd& w, SolveReport& report) {
  const Eigen::MatrixXd aw = to_weighted_frame(a, w);
  report.sigma_min = smallest_singular_values(aw, 1).values[0];
  report.sigma_max = largest_singular_value(aw);
}

SolutionHandle layer_handle(const SurfaceMesh& mesh, const BrinkmanParams& params,
                            Representation representation, BoundaryField density) {
  SolutionHandle h;
  h.representation = representation;
  h.layer = representation == Representation::DoubleLayer ? Representation::DoubleLayer
                                                          : Representation::SingleLayer;
  h.mesh = &mesh;
  h.params = params;
  h.density = std::move(density);
  h.pressure_up_to_constant = representation == Representation::DoubleLayer;
  return h;
}

}  // namespace

BoundarySystem::BoundarySystem(const SurfaceMesh& mesh, const BrinkmanParams& params,
                               const SolverOptions& options)
    : mesh_(&mesh), params_(params), options_(options) {
  params_.validate();
  mesh.require_closed();
}

void BoundarySystem::ensure_layers() {
  if (!layers_) layers_ = assemble_layer_operators(*mesh_, params_, options_.quadrature);
}

const DenseOperator& BoundarySystem::single_layer() {
  ensure_layers();
  return layers_->single_layer;
}

const DenseOperator& BoundarySystem::double_layer() {
  ensure_layers();
  return layers_->double_layer;
}

const DenseOperator& BoundarySystem::adjoint_double_layer() {
  if (!adjoint_) adjoint_ = bbem::adjoint_double_layer(double_layer());
  return *adjoint_;
}

const TruncatedSVDSolver& BoundarySystem::dirichlet_svd() {
  if (!dirichlet_) {
    const Eigen::Index n = mesh_->num_unknowns();
    const Eigen::MatrixXd a = double_layer().matrix - 0.5 * Eigen::MatrixXd::Identity(n, n);
    dirichlet_.emplace(to_weighted_frame(a, component_weights(*mesh_)), options_.svd_cutoff);
  }
  return *dirichlet_;
}

const Eigen::PartialPivLU<Eigen::MatrixXd>& BoundarySystem::neumann_lu() {
  if (!neumann_) {
    const Eigen::Index n = mesh_->num_unknowns();
    neumann_.emplace(adjoint_double_layer().matrix + 0.5 * Eigen::MatrixXd::Identity(n, n));
    require_invertible(*neumann_, "1/2 I + K*");
  }
  return *neumann_;
}

Eigen::MatrixXd BoundarySystem::mixed_matrix(const PatchLabeling& labeling) {
  if (static_cast<int>(labeling.labels.size()) != mesh_->num_panels())
    throw InvalidLabeling("labeling has " + std::to_string(labeling.labels.size()) +
                          " labels for " + std::to_string(mesh_->num_panels()) + " panels");
  labeling.require_mixed();
  const Eigen::MatrixXd& v = single_layer().matrix;
  const Eigen::MatrixXd& ks = adjoint_double_layer().matrix;
  Eigen::MatrixXd s(v.rows(), v.cols());
  for (int p = 0; p < mesh_->num_panels(); ++p) {
    if (labeling.is_dirichlet(p)) {
      s.middleRows(3 * p, 3) = v.middleRows(3 * p, 3);
    } else {
      s.middleRows(3 * p, 3) = ks.middleRows(3 * p, 3);
      s.block<3, 3>(3 * p, 3 * p) += 0.5 * Mat3::Identity();
    }
  }
  return s;
}

const Eigen::PartialPivLU<Eigen::MatrixXd>& BoundarySystem::mixed_lu(const PatchLabeling& labeling) {
  auto it = mixed_.find(labeling.labels);
  if (it == mixed_.end()) {
    it = mixed_.emplace(labeling.labels, Eigen::PartialPivLU<Eigen::MatrixXd>(mixed_matrix(labeling))).first;
    require_invertible(it->second, "mixed operator");
  }
  return it->second;
}

SolveResult BoundarySystem::solve_dirichlet(const BoundaryField& h0, bool check_compatibility) {
  const auto t0 = Clock::now();
  require_field(*mesh_, h0, "Dirichlet data");
  SolveReport report;
  report.kind = to_string(ProblemKind::Dirichlet);
  report.alpha = params_.alpha;
  report.num_panels = mesh_->num_panels();

  const BoundaryField nu = BoundaryField::normals(*mesh_);
  const double flux = h0.pairing(nu);
  const double scale = h0.norm() * nu.norm();
  if (check_compatibility && std::abs(flux) > options_.flux_tol * scale) {
    std::ostringstream msg;
    msg << "Dirichlet data carry net flux: |<h0, nu>| / (||h0|| ||nu||) = " << std::abs(flux) / scale
        << " exceeds flux_tol = " << options_.flux_tol;
    throw FluxIncompatible(msg.str());
  }
  const BoundaryField hp = h0 - (flux / nu.pairing(nu)) * nu;
  if (scale > 0.0 && std::abs(flux) > 1e-14 * scale) {
    std::ostringstream msg;
    msg << "data projected onto the flux-free subspace (relative flux " << std::abs(flux) / scale << ")";
    report.warnings.push_back(msg.str());
  }

  const TruncatedSVDSolver& svd = dirichlet_svd();
  if (svd.dimension() - svd.rank() > 1)
    throw IllConditioned("-1/2 I + K has " + std::to_string(svd.dimension() - svd.rank()) +
                         " singular values below the cutoff; at most one is expected");
  const Eigen::VectorXd w = component_weights(*mesh_);
  const Eigen::VectorXd phi =
      from_weighted_frame(svd.solve(to_weighted_frame(hp.values(), w)), w);
  const Eigen::Index n = mesh_->num_unknowns();
  report.residual_l2 = relative_residual(double_layer().matrix - 0.5 * Eigen::MatrixXd::Identity(n, n),
                                         phi, hp.values(), w);
  report.sigma_max = svd.svd().sigma[0];
  report.sigma_min = svd.svd().sigma[svd.dimension() - 1];
  report.wall_time_s = seconds_since(t0);
  return {layer_handle(*mesh_, params_, Representation::DoubleLayer, BoundaryField(*mesh_, phi)), report};
}

SolveResult BoundarySystem::solve_neumann(const BoundaryField& g0) {
  const auto t0 = Clock::now();
  if (params_.alpha == 0.0)
    throw UnsupportedParameter("the Neumann problem requires alpha > 0 (Stokes traction problems have rigid-motion defects)");
  require_field(*mesh_, g0, "Neumann data");
  SolveReport report;
  report.kind = to_string(ProblemKind::Neumann);
  report.alpha = params_.alpha;
  report.num_panels = mesh_->num_panels();
  const Eigen::VectorXd psi = neumann_lu().solve(g0.values());
  const Eigen::Index n = mesh_->num_unknowns();
  const Eigen::MatrixXd a = adjoint_double_layer().matrix + 0.5 * Eigen::MatrixXd::Identity(n, n);
  const Eigen::VectorXd w = component_weights(*mesh_);
  report.residual_l2 = relative_residual(a, psi, g0.values(), w);
  if (options_.condition_numbers) fill_condition(a, w, report);
  report.wall_time_s = seconds_since(t0);
  return {layer_handle(*mesh_, params_, Representation::SingleLayer, BoundaryField(*mesh_, psi)), report};
}

SolveResult BoundarySystem::solve_mixed(const PatchLabeling& labeling, const BoundaryField& h0,
                                        const BoundaryField& g0) {
  const auto t0 = Clock::now();
  if (params_.alpha == 0.0)
    throw UnsupportedParameter("the mixed problem requires alpha > 0");
  require_field(*mesh_, h0, "Dirichlet data");
  require_field(*mesh_, g0, "Neumann data");
  const auto& lu = mixed_lu(labeling);
  SolveReport report;
  report.kind = to_string(ProblemKind::Mixed);
  report.alpha = params_.alpha;
  report.num_panels = mesh_->num_panels();
  Eigen::VectorXd b(mesh_->num_unknowns());
  for (int p = 0; p < mesh_->num_panels(); ++p)
    b.segment<3>(3 * p) = labeling.is_dirichlet(p) ? h0.at(p) : g0.at(p);
  const Eigen::VectorXd psi = lu.solve(b);
  const Eigen::MatrixXd s = mixed_matrix(labeling);
  const Eigen::VectorXd w = component_weights(*mesh_);
  report.residual_l2 = relative_residual(s, psi, b, w);
  if (options_.condition_numbers) fill_condition(s, w, report);
  report.wall_time_s = seconds_since(t0);
  return {layer_handle(*mesh_, params_, Representation::MixedSingleLayer, BoundaryField(*mesh_, psi)),
          report};
}

namespace {

void check_spec(const BVPSpec& spec) {
  if (spec.mesh == nullptr) throw UsageError("problem has no mesh");
  spec.params.validate();
  if (spec.kind == ProblemKind::Mixed && !spec.labeling)
    throw InvalidLabeling("mixed problem without a patch labeling");
}

const BoundaryField& data_or_zero(const BoundaryField& f, const SurfaceMesh& mesh, BoundaryField& zero) {
  if (f.num_panels() == 0) {
    zero = BoundaryField(mesh);
    return zero;
  }
  return f;
}

}  // namespace

SolveResult solve_with(BoundarySystem& system, const BVPSpec& spec) {
  check_spec(spec);
  if (&system.mesh() != spec.mesh) throw UsageError("operator cache belongs to a different mesh");
  const auto t0 = Clock::now();
  const SurfaceMesh& mesh = *spec.mesh;
  BoundaryField zero_h, zero_g;
  BoundaryField h0 = data_or_zero(spec.dirichlet_data, mesh, zero_h);
  BoundaryField g0 = data_or_zero(spec.neumann_data, mesh, zero_g);

  std::optional<NewtonianBoundaryData> shift;
  if (spec.forcing) {
    if (spec.forcing->grid == nullptr) throw UsageError("forcing without a volume grid");
    shift = newtonian_boundary_data(*spec.forcing->grid, spec.forcing->values, mesh, spec.params);
    if (spec.kind == ProblemKind::Dirichlet) {
      // Compatibility is a property of the user's data; the shifted data
      // differ from it by the (discretely flux-free) Newtonian trace.
      require_field(mesh, h0, "Dirichlet data");
      const BoundaryField nu = BoundaryField::normals(mesh);
      const double flux = h0.pairing(nu), scale = h0.norm() * nu.norm();
      if (std::abs(flux) > spec.options.flux_tol * scale)
        throw FluxIncompatible("Dirichlet data carry net flux beyond flux_tol");
    }
    h0 -= shift->trace;
    g0 -= shift->traction;
  }

  SolveResult result;
  switch (spec.kind) {
    case ProblemKind::Dirichlet:
      // Shifted data carry the Newtonian trace's discretization flux, which
      // the projection removes; compatibility was checked on the user's data.
      result = system.solve_dirichlet(h0, !spec.forcing);
      break;
    case ProblemKind::Neumann:
      result = system.solve_neumann(g0);
      break;
    case ProblemKind::Mixed:
      result = system.solve_mixed(*spec.labeling, h0, g0);
      break;
  }
  if (spec.forcing) {
    result.handle.representation = Representation::WithNewtonian;
    result.handle.forcing = spec.forcing;
  }
  result.report.wall_time_s = seconds_since(t0);
  return result;
}

SolveResult solve(const BVPSpec& spec) {
  check_spec(spec);
  BoundarySystem system(*spec.mesh, spec.params, spec.options);
  return solve_with(system, spec);
}

SolveResult solve_dirichlet(const BVPSpec& spec) {
  BVPSpec s = spec;
  s.kind = ProblemKind::Dirichlet;
  s.forcing.reset();
  return solve(s);
}

SolveResult solve_neumann(const BVPSpec& spec) {
  BVPSpec s = spec;
  s.kind = ProblemKind::Neumann;
  s.forcing.reset();
  return solve(s);
}

SolveResult solve_mixed(const BVPSpec& spec) {
  BVPSpec s = spec;
  s.kind = ProblemKind::Mixed;
  s.forcing.reset();
  return solve(s);
}

SolveResult solve_poisson(const BVPSpec& spec) {
  if (!spec.forcing) throw UsageError("Poisson problem without a volume forcing");
  return solve(spec);
}

FieldSolution evaluate_solution(const SolutionHandle& handle, const std::vector<Vec3>& points) {
  if (handle.mesh == nullptr) throw UsageError("solution handle has no mesh");
  const SurfaceMesh& mesh = *handle.mesh;
  FieldSolution out;
  Eigen::VectorXd u, p;
  if (handle.layer == Representation::DoubleLayer) {
    u = evaluate_layer(mesh, handle.density.values(), points, {}, LayerQuantity::DoubleLayerVelocity,
                       handle.params);
    p = evaluate_layer(mesh, handle.density.values(), points, {}, LayerQuantity::DoubleLayerPressure,
                       handle.params);
  } else {
    u = evaluate_layer(mesh, handle.density.values(), points, {}, LayerQuantity::SingleLayerVelocity,
                       handle.params);
    p = evaluate_layer(mesh, handle.density.values(), points, {}, LayerQuantity::SingleLayerPressure,
                       handle.params);
  }
  if (handle.forcing) {
    const auto& f = *handle.forcing;
    const auto nu = newtonian_velocity(*f.grid, f.values, points, handle.params);
    const auto np = newtonian_pressure(*f.grid, f.values, points);
    for (std::size_t i = 0; i < points.size(); ++i) {
      u.segment<3>(3 * i) += nu[i];
      p[i] += np[i];
    }
  }
  out.velocity = unflatten(u);
  out.pressure.assign(p.data(), p.data() + p.size());
  if (handle.pressure_up_to_constant && !points.empty()) {
    out.pressure_constant = p.mean();
    for (double& v : out.pressure) v -= out.pressure_constant;
  }
  return out;
}

NeumannToDirichlet::NeumannToDirichlet(BoundarySystem& system, const PatchLabeling& labeling) {
  const SurfaceMesh& mesh = system.mesh();
  if (system.params().alpha == 0.0)
    throw UnsupportedParameter("the Neumann-to-Dirichlet map requires alpha > 0");
  if (static_cast<int>(labeling.labels.size()) != mesh.num_panels())
    throw InvalidLabeling("labeling does not match the mesh");
  if (labeling.num_dirichlet() == 0) throw InvalidLabeling("empty Dirichlet patch");
  const Eigen::Index n = mesh.num_unknowns();
  full_ = system.single_layer().matrix *
          system.neumann_lu().solve(Eigen::MatrixXd::Identity(n, n));
  weights_ = component_weights(mesh);
  for (int p = 0; p < mesh.num_panels(); ++p)
    if (labeling.is_dirichlet(p))
      for (int k = 0; k < 3; ++k) dirichlet_unknowns_.push_back(3 * p + k);
}

Eigen::MatrixXd NeumannToDirichlet::restricted() const {
  const Eigen::Index m = static_cast<Eigen::Index>(dirichlet_unknowns_.size());
  Eigen::MatrixXd r(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) r(i, j) = full_(dirichlet_unknowns_[i], dirichlet_unknowns_[j]);
  return r;
}

BoundaryField NeumannToDirichlet::apply(const BoundaryField& g) const {
  if (g.values().size() != full_.cols()) throw UsageError("field does not match the map");
  Eigen::VectorXd masked = Eigen::VectorXd::Zero(g.values().size());
  for (int i : dirichlet_unknowns_) masked[i] = g.values()[i];
  if ((masked - g.values()).cwiseAbs().maxCoeff() > 0.0)
    throw UsageError("input must be supported on the Dirichlet patch");
  const Eigen::VectorXd full = full_ * masked;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(full.size());
  for (int i : dirichlet_unknowns_) out[i] = full[i];
  return BoundaryField(g.weights(), out);
}

double NeumannToDirichlet::sigma_min() const {
  Eigen::VectorXd w(dirichlet_unknowns_.size());
  for (std::size_t i = 0; i < dirichlet_unknowns_.size(); ++i) w[i] = weights_[dirichlet_unknowns_[i]];
  return smallest_singular_values(to_weighted_frame(restricted(), w), 1).values[0];
}

NeumannToDirichlet neumann_to_dirichlet(BoundarySystem& system, const PatchLabeling& labeling) {
  return NeumannToDirichlet(system, labeling);
}

std::vector<Vec3> greens_identity_residual(const SurfaceMesh& mesh, const BoundaryField& u_trace,
                                           const BoundaryField& traction, const BrinkmanParams& params,
                                           const std::vector<Vec3>& points,
                                           const std::vector<Vec3>& exact_velocity) {
  require_field(mesh, u_trace, "velocity trace");
  require_field(mesh, traction, "traction");
  if (exact_velocity.size() != points.size()) throw UsageError("one exact velocity per point required");
  const Eigen::VectorXd v = evaluate_layer(mesh, traction.values(), points, {},
                                           LayerQuantity::SingleLayerVelocity, params);
  const Eigen::VectorXd w = evaluate_layer(mesh, u_trace.values(), points, {},
                                           LayerQuantity::DoubleLayerVelocity, params);
  std::vector<Vec3> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i)
    out[i] = v.segment<3>(3 * i) - w.segment<3>(3 * i) - exact_velocity[i];
  return out;
}

}  // namespace bbem
