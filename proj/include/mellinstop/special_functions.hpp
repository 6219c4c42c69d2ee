#pragma once

#include <utility>

#include "mellinstop/common.hpp"

namespace mellinstop {

/// Principal-branch log Gamma for complex arguments.
///
/// Lanczos rational approximation on Re(z) >= 0.5, reflection formula below,
/// and a six-term Stirling series once |Im(z)| > 500 where the Lanczos
/// coefficients lose ground.  Relative accuracy ~1e-13 on the strips the
/// estimator uses (Re in [-50, 50], |Im| <= 500).
///
/// Throws std::invalid_argument for non-finite input and strip_error at the
/// poles z = 0, -1, -2, ...
Complex log_gamma(Complex z);

/// exp(log_gamma(z)); overflows to inf for large real part.
Complex gamma_fn(Complex z);

/// |Gamma(alpha + i v)| computed through log_gamma (no overflow on lines).
double abs_gamma(double alpha, double v);

/// Two-sided envelope C1|b|^{a-1/2}e^{-|b|pi/2} <= |Gamma(a+ib)| <= C2 ...
/// with constants calibrated per alpha at the frozen anchors |b| in {2, 500}
/// and fixed safety margins.  Requires |beta_im| >= 2.
std::pair<double, double> abs_gamma_bounds(double alpha, double beta_im);

/// \int_{-U}^{U} |Gamma(alpha + iv)|^{-delta} dv by adaptive quadrature.
/// Requires U > 2, delta > 0, alpha > 0.
double reciprocal_gamma_strip_integral(double alpha, double delta, double U);

}  // namespace mellinstop
