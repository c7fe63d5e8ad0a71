#include "bbem/kernels.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace bbem;

namespace {

// Independent long-double power series for A1, A2 (valid for small z).
long double series_a1(long double z) {
  long double s = 0, term = 0.5L;  // z^m / (m+2)!
  for (int m = 0; m < 40; ++m) {
    s += ((m % 2) ? -1.0L : 1.0L) * (m + 1) * (m + 1) * term;
    term *= z / (m + 3);
  }
  return s;
}
long double series_a2(long double z) {
  long double s = 0, term = 0.5L;
  for (int m = 0; m < 40; ++m) {
    s += ((m % 2) ? 1.0L : -1.0L) * (static_cast<long double>(m) * m - 1) * term;
    term *= z / (m + 3);
  }
  return s;
}

Mat3 fd_laplacian(const Vec3& x, const BrinkmanParams& p, double h) {
  Mat3 lap = -6.0 * brinkman_velocity_tensor(x, p);
  for (int d = 0; d < 3; ++d) {
    Vec3 e = Vec3::Zero();
    e[d] = h;
    lap += brinkman_velocity_tensor(x + e, p) + brinkman_velocity_tensor(x - e, p);
  }
  return lap / (h * h);
}

}  // namespace

TEST(Kernels, ProfileValuesAtUnitArgument) {
  EXPECT_NEAR(a1(1.0), 3.0 / std::exp(1.0) - 1.0, 1e-14);
  EXPECT_NEAR(a2(1.0), 3.0 - 7.0 / std::exp(1.0), 1e-14);
  EXPECT_NEAR(a1(1.0), 0.1036383235, 1e-9);
  EXPECT_NEAR(a2(1.0), 0.4248439118, 1e-9);
}

TEST(Kernels, ProfileLimits) {
  EXPECT_DOUBLE_EQ(a1(0.0), 0.5);
  EXPECT_DOUBLE_EQ(a2(0.0), 0.5);
  EXPECT_NEAR(a1(10.0), std::exp(-10.0) * 1.11 - 0.01, 1e-15);
  EXPECT_NEAR(a2(50.0), 3.0 / 2500.0, 1e-15);
}

TEST(Kernels, SeriesAndClosedFormAgreeAcrossTheSwitch) {
  for (double z : {1e-8, 1e-5, 1e-3, 0.05, 0.2, 0.49, 0.51, 0.8}) {
    EXPECT_NEAR(a1(z), static_cast<double>(series_a1(z)), 1e-14) << z;
    EXPECT_NEAR(a2(z), static_cast<double>(series_a2(z)), 1e-14) << z;
  }
}

TEST(Kernels, DerivativesMatchFiniteDifferences) {
  for (double z : {1e-3, 0.3, 0.49, 0.5, 0.51, 1.0, 3.0, 12.0}) {
    const double h = 1e-5 * std::max(z, 1e-2);
    const double lo = std::max(z - h, 0.0), hi = z + h;
    EXPECT_NEAR(a1_prime(z), (a1(hi) - a1(lo)) / (hi - lo), 1e-8) << z;
    EXPECT_NEAR(a2_prime(z), (a2(hi) - a2(lo)) / (hi - lo), 1e-8) << z;
  }
}

TEST(Kernels, RejectsNegativeArgument) {
  EXPECT_THROW(a1(-1e-3), DomainError);
  EXPECT_THROW(a2_prime(std::nan("")), DomainError);
  BrinkmanParams p{-1.0, 0.0};
  EXPECT_THROW(brinkman_velocity_tensor(Vec3(1, 0, 0), p), DomainError);
  EXPECT_THROW(brinkman_velocity_tensor(Vec3(0, 0, 0), BrinkmanParams{1.0, 0.0}),
               SingularityError);
}

TEST(Kernels, StokesletClosedForm) {
  const Vec3 x(0.3, -0.4, 1.2);
  const double r = x.norm();
  const Mat3 expected = (Mat3::Identity() / r + x * x.transpose() / (r * r * r)) / (8 * kPi);
  EXPECT_LT((brinkman_velocity_tensor(x, {}) - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Kernels, SymmetricAndEven) {
  const Vec3 x(0.7, 0.2, -0.5);
  for (double alpha : {0.0, 0.5, 4.0}) {
    const Mat3 g = brinkman_velocity_tensor(x, {alpha, 0});
    EXPECT_LT((g - g.transpose()).cwiseAbs().maxCoeff(), 1e-16);
    EXPECT_LT((g - brinkman_velocity_tensor(-x, {alpha, 0})).cwiseAbs().maxCoeff(), 1e-16);
  }
}

TEST(Kernels, SolvesBrinkmanAwayFromPole) {
  const double h = 1e-3;
  for (double alpha : {0.0, 1.0, 9.0}) {
    BrinkmanParams p{alpha, 0.0};
    for (const Vec3& x : {Vec3(0.4, 0.1, -0.3), Vec3(1.0, 0.8, 0.6)}) {
      const Mat3 lap = fd_laplacian(x, p, h);
      // (Delta - alpha) G_jk - d_j Pi_k = 0; Pi is alpha-independent.
      Mat3 grad_pi;
      for (int j = 0; j < 3; ++j) {
        Vec3 e = Vec3::Zero();
        e[j] = h;
        grad_pi.row(j) = ((pressure_vector(x + e) - pressure_vector(x - e)) / (2 * h)).transpose();
      }
      const Mat3 res = lap - alpha * brinkman_velocity_tensor(x, p) - grad_pi;
      EXPECT_LT(res.cwiseAbs().maxCoeff(), 1e-4) << alpha;
      // Divergence-free columns.
      Vec3 div = Vec3::Zero();
      for (int j = 0; j < 3; ++j) {
        Vec3 e = Vec3::Zero();
        e[j] = h;
        div += ((brinkman_velocity_tensor(x + e, p) - brinkman_velocity_tensor(x - e, p)) /
                (2 * h)).row(j).transpose();
      }
      EXPECT_LT(div.norm(), 1e-5) << alpha;  // O(h^2) difference error
    }
  }
}

TEST(Kernels, GradientMatchesFiniteDifferences) {
  const Vec3 x(0.35, -0.6, 0.25);
  for (double alpha : {0.0, 2.0, 50.0}) {
    BrinkmanParams p{alpha, 0};
    const Tensor3 g = brinkman_velocity_gradient(x, p);
    for (int l = 0; l < 3; ++l) {
      Vec3 e = Vec3::Zero();
      e[l] = 1e-6;
      const Mat3 fd =
          (brinkman_velocity_tensor(x + e, p) - brinkman_velocity_tensor(x - e, p)) / 2e-6;
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) EXPECT_NEAR(g(l, j, k), fd(j, k), 1e-7);
    }
  }
}

TEST(Kernels, StressTensorFromDefinition) {
  const Vec3 x(0.2, 0.5, -0.1), y(-0.3, 0.1, 0.4);
  BrinkmanParams p{3.0, 0};
  const Tensor3 s = brinkman_stress_tensor(x, y, p);
  const Tensor3 g = brinkman_velocity_gradient(x - y, p);
  const Vec3 pi = pressure_vector(x - y);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int l = 0; l < 3; ++l) {
        const double ref = -pi[j] * (i == l) + g(l, i, j) + g(i, l, j);
        EXPECT_NEAR(s(i, j, l), ref, 1e-14);
      }
}

TEST(Kernels, StressIsDivergenceFreeUpToBrinkmanTerm) {
  // For the j-th fundamental solution (u_i = G_ij(x-y), p = Pi_j(x-y)):
  // d_l sigma_il = alpha u_i away from the pole.
  const Vec3 x(0.6, -0.2, 0.3), y(0.0, 0.1, -0.2);
  const double h = 1e-4, alpha = 2.5;
  BrinkmanParams p{alpha, 0};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double div = 0.0;
      for (int l = 0; l < 3; ++l) {
        Vec3 e = Vec3::Zero();
        e[l] = h;
        div += (brinkman_stress_tensor(x + e, y, p)(i, j, l) -
                brinkman_stress_tensor(x - e, y, p)(i, j, l)) / (2 * h);
      }
      EXPECT_NEAR(div, alpha * brinkman_velocity_tensor(x - y, p)(i, j), 1e-6);
    }
}

TEST(Kernels, StressTractionFluxOverSphere) {
  // The traction of the j-th fundamental solution integrates to -e_j over any
  // sphere around the pole when alpha = 0.
  const Vec3 y(0.1, 0.2, -0.1);
  const int n = 40;
  Mat3 total = Mat3::Zero();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < 2 * n; ++b) {
      const double th = kPi * (a + 0.5) / n, ph = kPi * (b + 0.5) / n;
      const Vec3 nu(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th));
      const double w = std::sin(th) * (kPi / n) * (kPi / n);
      const Tensor3 s = brinkman_stress_tensor(y + nu, y, {});
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          for (int l = 0; l < 3; ++l) total(i, j) += w * s(i, j, l) * nu[l];
    }
  EXPECT_LT((total + Mat3::Identity()).cwiseAbs().maxCoeff(), 2e-3);
}

TEST(Kernels, CorrectionIsRegularAtPole) {
  BrinkmanParams p{4.0, 0};
  const Mat3 c0 = velocity_tensor_correction(Vec3::Zero(), p);
  EXPECT_LT((c0 + (2.0 / (6 * kPi)) * Mat3::Identity()).cwiseAbs().maxCoeff(), 1e-15);
  const Vec3 x(1e-7, -2e-7, 1.5e-7);
  EXPECT_LT((velocity_tensor_correction(x, p) - c0).cwiseAbs().maxCoeff(), 1e-6);
  const Vec3 z(0.3, 0.4, 0.1);
  const Mat3 diff = brinkman_velocity_tensor(z, p) - brinkman_velocity_tensor(z, {});
  EXPECT_LT((velocity_tensor_correction(z, p) - diff).cwiseAbs().maxCoeff(), 1e-14);
  const Tensor3 sd = brinkman_stress_tensor(z, Vec3::Zero(), p) -
                     brinkman_stress_tensor(z, Vec3::Zero(), {});
  EXPECT_LT((stress_tensor_correction(z, Vec3::Zero(), p) - sd).max_abs(), 1e-12);
}

TEST(Kernels, PressureTensorPairsWithStress) {
  // (Delta_x - alpha) S_ijl(x, y) nu_l and Lambda form a Brinkman pair in x.
  const Vec3 y(0.0, 0.0, 0.0), nu(0.0, 0.6, 0.8);
  const double h = 1e-3;
  for (double alpha : {0.0, 1.5}) {
    BrinkmanParams p{alpha, 0};
    auto field = [&](const Vec3& x) {  // row i: velocity S_{i j l}(x, y) nu_l in index j
      Mat3 m;
      const Tensor3 s = brinkman_stress_tensor(x, y, p);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) = s(i, j, 0) * nu[0] + s(i, j, 1) * nu[1] + s(i, j, 2) * nu[2];
      return m;
    };
    const Vec3 x(0.5, -0.3, 0.4);
    // (Delta - alpha) v - grad q = 0 for v_j = S_ijl nu_l, q = Lambda_il nu_l.
    for (int i = 0; i < 3; ++i) {
      Vec3 lap = -6.0 * field(x).row(i).transpose();
      Vec3 gq;
      for (int d = 0; d < 3; ++d) {
        Vec3 e = Vec3::Zero();
        e[d] = h;
        lap += (field(x + e).row(i) + field(x - e).row(i)).transpose();
        gq[d] = ((brinkman_pressure_tensor(x + e, y, p) * nu)[i] -
                 (brinkman_pressure_tensor(x - e, y, p) * nu)[i]) / (2 * h);
      }
      lap /= h * h;
      const Vec3 res = lap - alpha * field(x).row(i).transpose() - gq;
      EXPECT_LT(res.norm(), 1e-3) << alpha << " " << i;
      // Divergence in x of the same field.
      double div = 0;
      for (int d = 0; d < 3; ++d) {
        Vec3 e = Vec3::Zero();
        e[d] = h;
        div += (field(x + e)(i, d) - field(x - e)(i, d)) / (2 * h);
      }
      EXPECT_LT(std::abs(div), 1e-4);
    }
  }
}
