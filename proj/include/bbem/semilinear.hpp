#pragma once

// Fixed-point solver for the mixed problem of
//
//   Delta u - alpha u - beta |u| u - grad p = f,  div u = 0,
//   u = h0 on S_D,  t(u, p) = g0 on S_N,
//
// iterating v_{k+1} = A(f + beta |v_k| v_k, h0, g0), where A is the linear
// mixed Poisson solution map evaluated at the volume-grid cell centers.

#include "bbem/solvers.hpp"

#include <cstdint>
#include <limits>

namespace bbem {

struct PicardConfig {
  double tol = 1e-8;      ///< on the grid-L2 norm of successive differences
  int max_iter = 50;
  double damping = 1.0;   ///< v <- (1 - d) v + d A(v), d in (0, 1]
  std::optional<VolumeField> initial;  ///< defaults to zero

  void validate() const;
};

struct SmallnessConstants {
  double C_est = 0.0;        ///< norm of the solution map (data sum norm -> grid L2)
  double c1prime_est = 0.0;  ///< max ||(|v| w)|| / (||v|| ||w||) over sampled solutions
  double C2_est = 0.0;       ///< c1prime_est * beta
  double zeta_est = std::numeric_limits<double>::infinity();  ///< 3 / (16 C2 C^2)
  double eta_est = std::numeric_limits<double>::infinity();   ///< 1 / (4 C2 C)
  std::uint64_t seed = 0;
  int samples = 0;
};

struct ContractionReport {
  std::vector<double> iterates;  ///< successive-difference norms
  std::vector<double> iterate_norms;
  double measured_ratio = 0.0;
  SmallnessConstants constants;
  bool converged = false;
  bool ball_respected = true;
  int iterations = 0;

  /// JSON with the keys iterates, measured_ratio, C_est, c1prime_est,
  /// zeta_est, eta_est, converged, ball_respected (plus bookkeeping).
  std::string to_json() const;
};

class SmallnessViolated : public NumericalError {
 public:
  SmallnessViolated(const std::string& what, ContractionReport report)
      : NumericalError(what), report(std::move(report)) {}
  ContractionReport report;
};

class NotConverged : public NumericalError {
 public:
  NotConverged(const std::string& what, ContractionReport report)
      : NumericalError(what), report(std::move(report)) {}
  ContractionReport report;
};

/// The linear solution map A(F, h0, g0) -> u at the grid cell centers, with
/// every matrix it needs precomputed. The mesh and grid must outlive it.
class MixedPoissonMap {
 public:
  MixedPoissonMap(const SurfaceMesh& mesh, const PatchLabeling& labeling, const VolumeGrid& grid,
                  const BrinkmanParams& params, const SolverOptions& options = {});

  /// Boundary density of the solution.
  Eigen::VectorXd density(const VolumeField& forcing, const BoundaryField& h0,
                          const BoundaryField& g0) const;
  /// Velocity at the cell centers.
  VolumeField apply(const VolumeField& forcing, const BoundaryField& h0, const BoundaryField& g0) const;
  VolumeField velocity_from(const VolumeField& forcing, const Eigen::VectorXd& density) const;

  /// Blocks of the map and their adjoints in the L2 frames (grid: h^3,
  /// boundary: areas), for norm estimates.
  VolumeField forcing_block(const VolumeField& forcing) const;
  VolumeField forcing_block_adjoint(const VolumeField& u) const;
  VolumeField boundary_block(const Eigen::VectorXd& data) const;  ///< data on all panels
  Eigen::VectorXd boundary_block_adjoint(const VolumeField& u) const;

  const SurfaceMesh& mesh() const { return *mesh_; }
  const VolumeGrid& grid() const { return *grid_; }
  const PatchLabeling& labeling() const { return labeling_; }
  const BrinkmanParams& params() const { return params_; }
  BoundarySystem& system() const { return *system_; }

 private:
  Eigen::VectorXd boundary_rhs(const Eigen::VectorXd& dirichlet, const Eigen::VectorXd& neumann) const;

  const SurfaceMesh* mesh_;
  const VolumeGrid* grid_;
  PatchLabeling labeling_;
  BrinkmanParams params_;
  std::unique_ptr<BoundarySystem> system_;
  const Eigen::PartialPivLU<Eigen::MatrixXd>* lu_ = nullptr;
  NewtonianBoundaryMaps newtonian_;
  std::unique_ptr<NewtonianGridOperator> volume_;
  Eigen::MatrixXd single_layer_on_grid_;  ///< 3M x 3N
};

/// Pointwise |v| w on a volume field.
VolumeField norm_weighted_product(const VolumeField& v, const VolumeField& w);

SmallnessConstants estimate_constants(const MixedPoissonMap& map, double beta, int samples,
                                      std::uint64_t seed = 0x5a11a5e5u);

struct PicardResult {
  SolutionHandle handle;
  ContractionReport report;
  VolumeField velocity;  ///< last iterate on the grid
};

/// Throws SmallnessViolated on divergence (three consecutive growths of the
/// difference beyond ten times the first difference) and NotConverged after
/// max_iter iterations; both carry the report.
PicardResult picard_solve(const MixedPoissonMap& map, const VolumeField& f, const BoundaryField& h0,
                          const BoundaryField& g0, const PicardConfig& config,
                          const SmallnessConstants* constants = nullptr);

PicardResult picard_solve(const SurfaceMesh& mesh, const PatchLabeling& labeling, const VolumeGrid& grid,
                          const BrinkmanParams& params, const VolumeField& f, const BoundaryField& h0,
                          const BoundaryField& g0, const PicardConfig& config);

/// Finite-difference residual of the semilinear system at interior cell
/// centers whose fourth-order stencil stays in the grid, relative to the sum
/// of the norms of the equation's terms (0 when all vanish).
double semilinear_residual(const SolutionHandle& handle, const VolumeGrid& grid,
                           const BrinkmanParams& params, const VolumeField& f, int max_points = 64);

}  // namespace bbem
