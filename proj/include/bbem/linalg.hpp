#pragma once

#include "bbem/common.hpp"

#include <cstdint>

namespace bbem {

/// D A D^{-1} with D = diag(sqrt(w)): the matrix of A in the orthonormal frame
/// of the pairing <u, v> = sum w_i u_i v_i. Spectral quantities of boundary
/// operators are computed in this frame.
Eigen::MatrixXd to_weighted_frame(const Eigen::MatrixXd& a, const Eigen::VectorXd& weights);
Eigen::VectorXd to_weighted_frame(const Eigen::VectorXd& v, const Eigen::VectorXd& weights);
Eigen::VectorXd from_weighted_frame(const Eigen::VectorXd& v, const Eigen::VectorXd& weights);

/// Full SVD a = U diag(sigma) V^T (divide and conquer), sigma descending.
struct SVDResult {
  Eigen::VectorXd sigma;
  Eigen::MatrixXd u;
  Eigen::MatrixXd v;
};
SVDResult full_svd(const Eigen::MatrixXd& a);

/// Least-squares solver that drops singular values below cutoff * sigma_max.
class TruncatedSVDSolver {
 public:
  TruncatedSVDSolver() = default;
  TruncatedSVDSolver(const Eigen::MatrixXd& a, double relative_cutoff);

  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
  int rank() const { return rank_; }
  int dimension() const { return static_cast<int>(svd_.sigma.size()); }
  const SVDResult& svd() const { return svd_; }

 private:
  SVDResult svd_;
  int rank_ = 0;
};

/// The k smallest singular values of a square matrix and their right
/// singular vectors, by inverse subspace iteration on (A^T A)^{-1} with a
/// fixed-seed start.
struct SingularPairs {
  Eigen::VectorXd values;   ///< ascending
  Eigen::MatrixXd vectors;  ///< columns are unit right singular vectors
};
SingularPairs smallest_singular_values(const Eigen::MatrixXd& a, int k,
                                       std::uint64_t seed = 0x5eed0001u, int iterations = 60);

/// Largest singular value by power iteration on A^T A.
double largest_singular_value(const Eigen::MatrixXd& a, std::uint64_t seed = 0x5eed0002u,
                              int max_iterations = 300, double tol = 1e-12);

}  // namespace bbem
