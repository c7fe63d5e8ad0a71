#include "bbem/kernels.hpp"

#include <cmath>
#include <string>

namespace bbem {

void BrinkmanParams::validate() const {
  if (!std::isfinite(alpha) || alpha < 0.0)
    throw DomainError("alpha must be finite and >= 0, got " + std::to_string(alpha));
  if (!std::isfinite(beta) || beta < 0.0)
    throw DomainError("beta must be finite and >= 0, got " + std::to_string(beta));
}

namespace {

// Below this argument the closed forms lose digits to the 1/z^2 cancellation,
// so the Taylor series is used instead. At z = 0.5 eighteen terms are far
// below double precision.
constexpr double kSeriesCutoff = 0.5;
constexpr int kSeriesTerms = 18;

// A1(z) = sum c1[m] z^m,  c1[m] = (-1)^m (m+1)^2 / (m+2)!
// A2(z) = sum c2[m] z^m,  c2[m] = (-1)^(m+1) (m^2-1) / (m+2)!
struct SeriesTable {
  std::array<double, kSeriesTerms> c1{};
  std::array<double, kSeriesTerms> c2{};
  SeriesTable() {
    double fact = 2.0;  // (m+2)!
    for (int m = 0; m < kSeriesTerms; ++m) {
      if (m > 0) fact *= (m + 2);
      const double sign = (m % 2 == 0) ? 1.0 : -1.0;
      c1[m] = sign * (m + 1.0) * (m + 1.0) / fact;
      c2[m] = -sign * (double(m) * m - 1.0) / fact;
    }
  }
};

const SeriesTable& series() {
  static const SeriesTable t;
  return t;
}

void check_argument(double z) {
  if (!std::isfinite(z) || z < 0.0)
    throw DomainError("Bessel coefficient argument must be finite and >= 0, got " +
                      std::to_string(z));
}

// sum_{m>=first} coeff[m] * factor(m) * z^(m - shift), by Horner from the top.
template <class Factor>
double series_sum(const std::array<double, kSeriesTerms>& c, int first, int shift, double z,
                  Factor factor) {
  double s = 0.0;
  for (int m = kSeriesTerms - 1; m >= first; --m) s = s * z + c[m] * factor(m);
  // Horner above produced sum c[m] f(m) z^(m-first); rescale to z^(m-shift).
  const int p = first - shift;
  if (p > 0) s *= std::pow(z, p);
  return s;
}

struct Coefficients {
  double a1, a2, da1, da2;
};

Coefficients coefficients(double z) {
  if (z < kSeriesCutoff) {
    const auto& t = series();
    auto one = [](int) { return 1.0; };
    auto deriv = [](int m) { return double(m); };
    return {series_sum(t.c1, 0, 0, z, one), series_sum(t.c2, 0, 0, z, one),
            series_sum(t.c1, 1, 1, z, deriv), series_sum(t.c2, 1, 1, z, deriv)};
  }
  const double e = std::exp(-z);
  const double iz = 1.0 / z, iz2 = iz * iz, iz3 = iz2 * iz;
  return {e * (1.0 + iz + iz2) - iz2, 3.0 * iz2 - e * (1.0 + 3.0 * iz + 3.0 * iz2),
          2.0 * iz3 - e * (1.0 + iz + 2.0 * iz2 + 2.0 * iz3),
          -6.0 * iz3 + e * (1.0 + 3.0 * iz + 6.0 * iz2 + 6.0 * iz3)};
}

void require_nonzero(double r, const char* what) {
  if (!(r > 0.0)) throw SingularityError(std::string(what) + " evaluated at its pole");
}

}  // namespace

double a1(double z) {
  check_argument(z);
  return coefficients(z).a1;
}
double a2(double z) {
  check_argument(z);
  return coefficients(z).a2;
}
double a1_prime(double z) {
  check_argument(z);
  return coefficients(z).da1;
}
double a2_prime(double z) {
  check_argument(z);
  return coefficients(z).da2;
}

namespace {

void check_alpha(double alpha) {
  if (!std::isfinite(alpha) || alpha < 0.0)
    throw DomainError("alpha must be finite and >= 0, got " + std::to_string(alpha));
}

}  // namespace

RadialProfile velocity_profile(double r, double alpha) {
  check_alpha(alpha);
  const double sa = std::sqrt(alpha);
  const Coefficients c = coefficients(sa * r);
  const double ir = 1.0 / r, ir2 = ir * ir, ir3 = ir2 * ir;
  return {c.a1 * ir, c.a2 * ir3, sa * c.da1 * ir - c.a1 * ir2,
          sa * c.da2 * ir3 - 3.0 * c.a2 * ir3 * ir};
}

RadialProfile correction_profile(double r, double alpha) {
  check_alpha(alpha);
  if (alpha == 0.0) return {};
  const double sa = std::sqrt(alpha);
  const double z = sa * r;
  if (z < kSeriesCutoff) {
    const auto& t = series();
    RadialProfile p;
    // (A1 - 1/2)/r = sqrt(alpha) sum_{m>=1} c1[m] z^(m-1)
    p.a = sa * series_sum(t.c1, 1, 1, z, [](int) { return 1.0; });
    p.da = alpha * series_sum(t.c1, 2, 2, z, [](int m) { return m - 1.0; });
    if (r > 0.0) {
      // (A2 - 1/2)/r^3 = alpha^(3/2) sum_{m>=2} c2[m] z^(m-3); the m = 2 term
      // carries the 1/z, handled separately to keep Horner on a polynomial.
      const double poly = series_sum(t.c2, 3, 3, z, [](int) { return 1.0; });
      p.b = alpha * sa * (t.c2[2] / z + poly);
      const double dpoly = series_sum(t.c2, 4, 4, z, [](int m) { return m - 3.0; });
      p.db = alpha * alpha * (-t.c2[2] / (z * z) + dpoly);
    }
    return p;
  }
  const Coefficients c = coefficients(z);
  const double ir = 1.0 / r, ir2 = ir * ir, ir3 = ir2 * ir;
  const double d1 = c.a1 - 0.5, d2 = c.a2 - 0.5;
  return {d1 * ir, d2 * ir3, sa * c.da1 * ir - d1 * ir2, sa * c.da2 * ir3 - 3.0 * d2 * ir3 * ir};
}

Mat3 profile_tensor(const RadialProfile& p, const Vec3& x) {
  Mat3 g = p.b * (x * x.transpose());
  g.diagonal().array() += p.a;
  return g / kFourPi;
}

Tensor3 profile_gradient(const RadialProfile& p, const Vec3& x, double r) {
  Tensor3 t;
  const double s = 1.0 / kFourPi;
  const double ir = r > 0.0 ? 1.0 / r : 0.0;
  for (int l = 0; l < 3; ++l) {
    const double xl = x[l] * ir;
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        double v = p.db * x[j] * x[k] * xl;
        if (j == k) v += p.da * xl;
        if (j == l) v += p.b * x[k];
        if (k == l) v += p.b * x[j];
        t(l, j, k) = s * v;
      }
  }
  return t;
}

Mat3 brinkman_velocity_tensor(const Vec3& x, const BrinkmanParams& params) {
  const double r = x.norm();
  require_nonzero(r, "velocity tensor");
  return profile_tensor(velocity_profile(r, params.alpha), x);
}

Vec3 pressure_vector(const Vec3& x) {
  const double r = x.norm();
  require_nonzero(r, "pressure vector");
  return x / (kFourPi * r * r * r);
}

Tensor3 brinkman_velocity_gradient(const Vec3& x, const BrinkmanParams& params) {
  const double r = x.norm();
  require_nonzero(r, "velocity gradient");
  return profile_gradient(velocity_profile(r, params.alpha), x, r);
}

namespace {

// Assemble S_ijl from a gradient (l, j, k) = d_l G_jk and a pressure vector.
Tensor3 stress_from(const Tensor3& grad, const Vec3& pi) {
  Tensor3 s;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int l = 0; l < 3; ++l)
        s(i, j, l) = grad(l, i, j) + grad(i, l, j) - (i == l ? pi[j] : 0.0);
  return s;
}

}  // namespace

Tensor3 brinkman_stress_tensor(const Vec3& x, const Vec3& y, const BrinkmanParams& params) {
  const Vec3 d = x - y;
  const double r = d.norm();
  require_nonzero(r, "stress tensor");
  return stress_from(profile_gradient(velocity_profile(r, params.alpha), d, r),
                     d / (kFourPi * r * r * r));
}

Mat3 brinkman_pressure_tensor(const Vec3& x, const Vec3& y, const BrinkmanParams& params) {
  const Vec3 e = y - x;
  const double r = e.norm();
  require_nonzero(r, "pressure tensor");
  const double r2 = r * r, r3 = r2 * r, r5 = r3 * r2;
  Mat3 m = (-6.0 / r5) * (e * e.transpose());
  m.diagonal().array() += 2.0 / r3 - params.alpha / r;
  return m / kFourPi;
}

double harmonic_kernel(const Vec3& x) {
  const double r = x.norm();
  require_nonzero(r, "harmonic kernel");
  return -1.0 / (kFourPi * r);
}

Mat3 velocity_tensor_correction(const Vec3& x, const BrinkmanParams& params) {
  return profile_tensor(correction_profile(x.norm(), params.alpha), x);
}

Tensor3 stress_tensor_correction(const Vec3& x, const Vec3& y, const BrinkmanParams& params) {
  const Vec3 d = x - y;
  const double r = d.norm();
  require_nonzero(r, "stress tensor correction");
  return stress_from(profile_gradient(correction_profile(r, params.alpha), d, r), Vec3::Zero());
}

}  // namespace bbem
