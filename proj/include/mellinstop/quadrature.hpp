#pragma once

#include <functional>

#include "mellinstop/common.hpp"

namespace mellinstop {
namespace quad {

struct Options {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_panels = 4000;  // global-adaptive panel budget (depth cap ~30 via width guard)
};

struct Result {
  double value = 0.0;
  double abs_error = 0.0;
  double l1 = 0.0;  // integral of |f|, useful as a cancellation scale
  int panels = 0;
  bool converged = false;
};

struct ResultC {
  Complex value{0.0, 0.0};
  double abs_error = 0.0;
  double l1 = 0.0;
  int panels = 0;
  bool converged = false;
};

/// Globally adaptive Gauss-Kronrod 15(7) on [a, b].
Result integrate(const std::function<double(double)>& f, double a, double b,
                 const Options& opt = {});

ResultC integrate_complex(const std::function<Complex(double)>& f, double a,
                          double b, const Options& opt = {});

/// As integrate(), but throws quadrature_error when the estimate misses tol.
double integrate_or_throw(const std::function<double(double)>& f, double a,
                          double b, const Options& opt, const char* what);

/// \int_0^\infty f(x) dx for integrands with integrable endpoint behaviour:
/// [0, s] directly plus [s, \infty) through x -> s/u.  `scale` centres the
/// split where the integrand lives.
Result integrate_positive_axis(const std::function<double(double)>& f,
                               const Options& opt, double scale = 1.0);

/// \int_{-\infty}^{\infty} f(t) dt by expanding symmetric windows until a
/// window's contribution falls below tol; intended for integrands with
/// Gaussian or exponential tails.
Result integrate_real_line(const std::function<double(double)>& f,
                           const Options& opt, double initial_halfwidth = 1.0,
                           double max_halfwidth = 60.0);

ResultC integrate_real_line_complex(const std::function<Complex(double)>& f,
                                    const Options& opt,
                                    double initial_halfwidth = 1.0,
                                    double max_halfwidth = 60.0);

}  // namespace quad
}  // namespace mellinstop
