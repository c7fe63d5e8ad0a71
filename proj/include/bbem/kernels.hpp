#pragma once

// Fundamental solutions of the Brinkman (alpha > 0) and Stokes (alpha = 0)
// systems in R^3:
//
//   (Delta - alpha) G(x) - grad Pi(x) = -delta_0 I,   div G = 0,
//
//   G_jk(x) = 1/(4 pi) [ delta_jk A1(z) / |x| + x_j x_k A2(z) / |x|^3 ],
//   Pi_k(x) = x_k / (4 pi |x|^3),     z = sqrt(alpha) |x|.

#include "bbem/common.hpp"

namespace bbem {

double a1(double z);
double a2(double z);
double a1_prime(double z);
double a2_prime(double z);

/// Radial coefficients of a kernel of the form (a(r) I + b(r) x x^T) / (4 pi)
/// together with their r-derivatives.
struct RadialProfile {
  double a = 0.0;
  double b = 0.0;
  double da = 0.0;
  double db = 0.0;
};

/// Profile of G^alpha. Requires r > 0.
RadialProfile velocity_profile(double r, double alpha);

/// Profile of the difference kernel G^alpha - G^0. Finite at r = 0 for the
/// velocity (a -> -2 sqrt(alpha) / 3, b x x^T -> 0).
RadialProfile correction_profile(double r, double alpha);

Mat3 profile_tensor(const RadialProfile& p, const Vec3& x);
/// (l, j, k) -> d/dx_l of the profile tensor at x.
Tensor3 profile_gradient(const RadialProfile& p, const Vec3& x, double r);

Mat3 brinkman_velocity_tensor(const Vec3& x, const BrinkmanParams& params);
Vec3 pressure_vector(const Vec3& x);

/// Gradient of G^alpha with layout (l, j, k) = d G_jk / d x_l.
Tensor3 brinkman_velocity_gradient(const Vec3& x, const BrinkmanParams& params);

/// S_ijl(x, y) = -Pi_j(x - y) delta_il + d_l G_ij(x - y) + d_i G_lj(x - y):
/// the stress of the j-th fundamental solution with pole y, evaluated at x.
Tensor3 brinkman_stress_tensor(const Vec3& x, const Vec3& y, const BrinkmanParams& params);

/// Lambda_ik(x, y), the pressure paired with the stress tensor.
Mat3 brinkman_pressure_tensor(const Vec3& x, const Vec3& y, const BrinkmanParams& params);

/// Laplace fundamental solution -1 / (4 pi |x|).
double harmonic_kernel(const Vec3& x);

/// G^alpha - G^0, including the removable value -(sqrt(alpha)/(6 pi)) I at x = 0.
Mat3 velocity_tensor_correction(const Vec3& x, const BrinkmanParams& params);

/// S^alpha - S^0. The pressure parts cancel; bounded but direction dependent
/// at the pole, so x != y is still required.
Tensor3 stress_tensor_correction(const Vec3& x, const Vec3& y, const BrinkmanParams& params);

}  // namespace bbem
