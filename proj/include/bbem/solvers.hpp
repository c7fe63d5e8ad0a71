#pragma once

#include "bbem/linalg.hpp"
#include "bbem/newtonian.hpp"
#include "bbem/operators.hpp"

#include <Eigen/LU>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace bbem {

enum class ProblemKind { Dirichlet, Neumann, Mixed };
std::string to_string(ProblemKind kind);

enum class Representation { SingleLayer, DoubleLayer, MixedSingleLayer, WithNewtonian };
std::string to_string(Representation r);

struct SolverOptions {
  /// Dirichlet data must satisfy |<h0, nu>| <= flux_tol ||h0|| ||nu||.
  double flux_tol = 1e-2;
  /// Truncated-SVD cutoff relative to the largest singular value.
  double svd_cutoff = 1e-10;
  /// Compute sigma_min / sigma_max of the system matrix for Neumann and mixed
  /// solves (Dirichlet solves always have them from the SVD).
  bool condition_numbers = false;
  QuadratureOptions quadrature{};
};

/// Body force sampled on a volume grid. The grid must outlive every handle
/// built from it.
struct VolumeForcing {
  const VolumeGrid* grid = nullptr;
  VolumeField values;
};

struct BVPSpec {
  ProblemKind kind = ProblemKind::Dirichlet;
  BrinkmanParams params;
  const SurfaceMesh* mesh = nullptr;
  std::optional<PatchLabeling> labeling;
  /// Velocity data h0; for mixed problems only the Dirichlet panels are read.
  BoundaryField dirichlet_data;
  /// Traction data g0; for mixed problems only the Neumann panels are read.
  BoundaryField neumann_data;
  std::optional<VolumeForcing> forcing;
  SolverOptions options;
};

/// A representation formula: a layer potential of `density` plus, for
/// WithNewtonian, the Newtonian potential of the forcing.
struct SolutionHandle {
  Representation representation = Representation::SingleLayer;
  /// Layer used for the boundary part (SingleLayer or DoubleLayer).
  Representation layer = Representation::SingleLayer;
  const SurfaceMesh* mesh = nullptr;
  BrinkmanParams params;
  BoundaryField density;
  std::optional<VolumeForcing> forcing;
  /// Pressure is defined up to a constant (Dirichlet problems); evaluation
  /// then returns pressures with zero mean over the evaluation points.
  bool pressure_up_to_constant = false;
};

struct FieldSolution {
  std::vector<Vec3> velocity;
  std::vector<double> pressure;
  /// Constant subtracted from the raw pressure (0 unless normalized).
  double pressure_constant = 0.0;
};

struct SolveReport {
  std::string kind;
  double alpha = 0.0;
  /// ||A x - b|| / ||b|| of the boundary system (0 for zero data).
  double residual_l2 = 0.0;
  double sigma_min = 0.0;  ///< 0 when not computed
  double sigma_max = 0.0;
  double pressure_constant = 0.0;
  double wall_time_s = 0.0;
  int num_panels = 0;
  std::vector<std::string> warnings;

  /// Flat JSON object with the keys kind, alpha, residual_l2, sigma_min,
  /// sigma_max, pressure_constant, wall_time_s, warnings.
  std::string to_json(bool include_timing = true) const;
};

struct SolveResult {
  SolutionHandle handle;
  SolveReport report;
};

/// Assembled operators and factorizations for one mesh and parameter set,
/// created on first use. Not safe for concurrent first use.
class BoundarySystem {
 public:
  BoundarySystem(const SurfaceMesh& mesh, const BrinkmanParams& params,
                 const SolverOptions& options = {});

  const SurfaceMesh& mesh() const { return *mesh_; }
  const BrinkmanParams& params() const { return params_; }
  const SolverOptions& options() const { return options_; }

  const DenseOperator& single_layer();
  const DenseOperator& double_layer();
  const DenseOperator& adjoint_double_layer();

  /// -1/2 I + K in the weighted frame, factorized by SVD.
  const TruncatedSVDSolver& dirichlet_svd();
  /// 1/2 I + K*.
  const Eigen::PartialPivLU<Eigen::MatrixXd>& neumann_lu();
  /// Block rows from V on Dirichlet panels and 1/2 I + K* on Neumann panels.
  Eigen::MatrixXd mixed_matrix(const PatchLabeling& labeling);
  const Eigen::PartialPivLU<Eigen::MatrixXd>& mixed_lu(const PatchLabeling& labeling);

  SolveResult solve_dirichlet(const BoundaryField& h0, bool check_compatibility = true);
  SolveResult solve_neumann(const BoundaryField& g0);
  SolveResult solve_mixed(const PatchLabeling& labeling, const BoundaryField& h0,
                          const BoundaryField& g0);

 private:
  void ensure_layers();

  const SurfaceMesh* mesh_;
  BrinkmanParams params_;
  SolverOptions options_;
  std::optional<LayerOperators> layers_;
  std::optional<DenseOperator> adjoint_;
  std::optional<TruncatedSVDSolver> dirichlet_;
  std::optional<Eigen::PartialPivLU<Eigen::MatrixXd>> neumann_;
  std::map<std::vector<PatchLabel>, Eigen::PartialPivLU<Eigen::MatrixXd>> mixed_;
};

/// Double-layer solution u = W phi, (-1/2 I + K) phi = h0 after projecting h0
/// onto the nu-mean-zero subspace.
SolveResult solve_dirichlet(const BVPSpec& spec);
/// Single-layer solution u = V psi, (1/2 I + K*) psi = g0. Requires alpha > 0.
SolveResult solve_neumann(const BVPSpec& spec);
/// Single-layer solution with V psi = h0 on S_D and (1/2 I + K*) psi = g0 on S_N.
SolveResult solve_mixed(const BVPSpec& spec);
/// Any kind with a volume forcing: boundary data are shifted by the
/// Newtonian trace and traction, and the handle adds N f and Q f.
SolveResult solve_poisson(const BVPSpec& spec);
/// Dispatches on spec.kind and the presence of forcing.
SolveResult solve(const BVPSpec& spec);

/// Shared implementation with a caller-owned operator cache.
SolveResult solve_with(BoundarySystem& system, const BVPSpec& spec);

FieldSolution evaluate_solution(const SolutionHandle& handle, const std::vector<Vec3>& points);

/// Upsilon = (V (1/2 I + K*)^{-1}) restricted to Dirichlet panels.
class NeumannToDirichlet {
 public:
  NeumannToDirichlet(BoundarySystem& system, const PatchLabeling& labeling);

  const Eigen::MatrixXd& full() const { return full_; }
  /// Rows and columns of the Dirichlet panels only.
  Eigen::MatrixXd restricted() const;
  const std::vector<int>& dirichlet_unknowns() const { return dirichlet_unknowns_; }
  /// g must vanish off the Dirichlet patch; the result is zero off it too.
  BoundaryField apply(const BoundaryField& g) const;
  /// Smallest singular value of the restricted map in the weighted frame.
  double sigma_min() const;

 private:
  Eigen::MatrixXd full_;
  Eigen::VectorXd weights_;
  std::vector<int> dirichlet_unknowns_;
};

NeumannToDirichlet neumann_to_dirichlet(BoundarySystem& system, const PatchLabeling& labeling);

/// V t - W u_trace - u at the points for a homogeneous solution u with trace
/// u_trace and traction t.
std::vector<Vec3> greens_identity_residual(const SurfaceMesh& mesh, const BoundaryField& u_trace,
                                           const BoundaryField& traction, const BrinkmanParams& params,
                                           const std::vector<Vec3>& points,
                                           const std::vector<Vec3>& exact_velocity);

}  // namespace bbem
