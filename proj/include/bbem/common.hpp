#pragma once

#include <Eigen/Dense>

#include <array>
#include <stdexcept>
#include <string>

namespace bbem {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Surface area of the unit sphere in R^3.
inline constexpr double kFourPi = 12.566370614359172953850573533118;
inline constexpr double kPi = 3.14159265358979323846264338327950;

/// Dense rank-3 tensor with index order (i, j, k).
struct Tensor3 {
  std::array<double, 27> a{};

  double& operator()(int i, int j, int k) { return a[9 * i + 3 * j + k]; }
  double operator()(int i, int j, int k) const { return a[9 * i + 3 * j + k]; }

  Tensor3& operator+=(const Tensor3& o) {
    for (int n = 0; n < 27; ++n) a[n] += o.a[n];
    return *this;
  }
  Tensor3& operator-=(const Tensor3& o) {
    for (int n = 0; n < 27; ++n) a[n] -= o.a[n];
    return *this;
  }
  Tensor3& operator*=(double s) {
    for (double& v : a) v *= s;
    return *this;
  }
  double max_abs() const {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
  }
};

inline Tensor3 operator-(Tensor3 a, const Tensor3& b) { return a -= b; }
inline Tensor3 operator+(Tensor3 a, const Tensor3& b) { return a += b; }

/// Physical constants of the Darcy-Forchheimer-Brinkman system.
struct BrinkmanParams {
  double alpha = 0.0;  ///< viscous damping (1/length^2)
  double beta = 0.0;   ///< Forchheimer coefficient (1/length)

  void validate() const;
};

// ---------------------------------------------------------------------------
// Errors. Every failure raised by the library derives from bbem::Error; the
// CLI maps NumericalError to exit code 1 and UsageError to exit code 2.

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain (negative or non-finite input).
class DomainError : public UsageError {
 public:
  using UsageError::UsageError;
};

/// Kernel evaluated at its pole.
class SingularityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class MeshError : public UsageError {
 public:
  using UsageError::UsageError;
};

class QuadratureError : public UsageError {
 public:
  using UsageError::UsageError;
};

class FluxIncompatible : public UsageError {
 public:
  using UsageError::UsageError;
};

class IllConditioned : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class UnsupportedParameter : public UsageError {
 public:
  using UsageError::UsageError;
};

class InvalidLabeling : public UsageError {
 public:
  using UsageError::UsageError;
};

class InvalidSource : public UsageError {
 public:
  using UsageError::UsageError;
};

class ConfigError : public UsageError {
 public:
  using UsageError::UsageError;
};

}  // namespace bbem
