#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace mellinstop {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kSqrtTwoPi = 2.50662827463100050241576528481104525;
inline constexpr double kLogTwoPi = 1.83787706640934548356065947281123527;

/// Evaluation point lies outside a Mellin strip or other analytic domain.
class strip_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Adaptive quadrature could not reach the requested tolerance.
class quadrature_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A transform that should be conjugate-symmetric produced a large
/// imaginary residual under inversion.
class symmetry_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Theorem-level hypothesis violated (reported with the failing condition).
class hypothesis_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

inline double require_finite(double x, const char* what) {
  if (!std::isfinite(x))
    throw std::invalid_argument(std::string(what) + ": value must be finite");
  return x;
}

inline Complex require_finite(Complex z, const char* what) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw std::invalid_argument(std::string(what) +
                                ": both components must be finite");
  return z;
}

inline double require_positive(double x, const char* what) {
  require_finite(x, what);
  if (!(x > 0.0))
    throw std::invalid_argument(std::string(what) + ": value must be > 0");
  return x;
}

}  // namespace mellinstop
