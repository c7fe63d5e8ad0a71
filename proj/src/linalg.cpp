#include "bbem/linalg.hpp"

#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>
#include <random>

namespace bbem {

Eigen::MatrixXd to_weighted_frame(const Eigen::MatrixXd& a, const Eigen::VectorXd& weights) {
  if (a.rows() != weights.size() || a.cols() != weights.size())
    throw UsageError("weights do not match the matrix size");
  const Eigen::VectorXd s = weights.cwiseSqrt();
  return s.asDiagonal() * a * s.cwiseInverse().asDiagonal();
}

Eigen::VectorXd to_weighted_frame(const Eigen::VectorXd& v, const Eigen::VectorXd& weights) {
  return v.cwiseProduct(weights.cwiseSqrt());
}

Eigen::VectorXd from_weighted_frame(const Eigen::VectorXd& v, const Eigen::VectorXd& weights) {
  return v.cwiseQuotient(weights.cwiseSqrt());
}

SVDResult full_svd(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw UsageError("full_svd expects a square matrix");
  if (!a.allFinite()) throw NumericalError("SVD input contains non-finite values");
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.info() != Eigen::Success) throw NumericalError("SVD did not converge");
  return {svd.singularValues(), svd.matrixU(), svd.matrixV()};
}

TruncatedSVDSolver::TruncatedSVDSolver(const Eigen::MatrixXd& a, double relative_cutoff)
    : svd_(full_svd(a)) {
  const double cut = relative_cutoff * (svd_.sigma.size() ? svd_.sigma[0] : 0.0);
  rank_ = 0;
  for (Eigen::Index i = 0; i < svd_.sigma.size(); ++i)
    if (svd_.sigma[i] > cut) ++rank_;
}

Eigen::VectorXd TruncatedSVDSolver::solve(const Eigen::VectorXd& b) const {
  if (b.size() != svd_.u.rows()) throw UsageError("right-hand side has the wrong size");
  const Eigen::VectorXd c = svd_.u.leftCols(rank_).transpose() * b;
  return svd_.v.leftCols(rank_) * c.cwiseQuotient(svd_.sigma.head(rank_));
}

namespace {

Eigen::MatrixXd random_block(Eigen::Index n, int k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd x(n, k);
  for (Eigen::Index j = 0; j < k; ++j)
    for (Eigen::Index i = 0; i < n; ++i) x(i, j) = normal(rng);
  return x;
}

Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& x) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(x);
  return qr.householderQ() * Eigen::MatrixXd::Identity(x.rows(), x.cols());
}

}  // namespace

SingularPairs smallest_singular_values(const Eigen::MatrixXd& a, int k, std::uint64_t seed,
                                       int iterations) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw UsageError("smallest_singular_values expects a square matrix");
  if (k < 1 || k > n) throw UsageError("invalid number of singular values");
  const int block = static_cast<int>(std::min<Eigen::Index>(n, k + 4));
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  Eigen::MatrixXd x = orthonormalize(random_block(n, block, seed));
  for (int it = 0; it < iterations; ++it) {
    const Eigen::MatrixXd y = lu.transpose().solve(x);
    x = orthonormalize(lu.solve(y));
  }
  if (!x.allFinite()) throw NumericalError("inverse iteration broke down (singular matrix)");
  // Rayleigh-Ritz on the converged subspace.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a * x, Eigen::ComputeThinV);
  SingularPairs out;
  out.values.resize(k);
  out.vectors.resize(n, k);
  const Eigen::VectorXd& s = svd.singularValues();
  for (int j = 0; j < k; ++j) {
    const int src = block - 1 - j;
    out.values[j] = s[src];
    out.vectors.col(j) = (x * svd.matrixV().col(src)).normalized();
  }
  return out;
}

double largest_singular_value(const Eigen::MatrixXd& a, std::uint64_t seed, int max_iterations,
                              double tol) {
  Eigen::VectorXd x = random_block(a.cols(), 1, seed).col(0).normalized();
  double sigma = 0.0;
  for (int it = 0; it < max_iterations; ++it) {
    const Eigen::VectorXd y = a * x;
    const Eigen::VectorXd z = a.transpose() * y;
    const double next = std::sqrt(y.squaredNorm());
    const double zn = z.norm();
    if (zn == 0.0) return 0.0;
    x = z / zn;
    if (std::abs(next - sigma) <= tol * next) return next;
    sigma = next;
  }
  return sigma;
}

}  // namespace bbem
