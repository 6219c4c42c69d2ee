#include "mellinstop/special_functions.hpp"

#include <algorithm>
#include <cmath>

#include "mellinstop/quadrature.hpp"

namespace mellinstop {

namespace {

// Godfrey's 15-term Lanczos coefficients, g = 607/128.  Uniformly accurate
// (~1e-15 relative) on the half-plane Re(z) >= 0.5.
constexpr double kLanczosG = 4.7421875;
constexpr double kLanczosC[15] = {
    0.99999999999999709182,     57.156235665862923517,
    -59.597960355475491248,     14.136097974741747174,
    -0.49191381609762019978,    0.33994649984811888699e-4,
    0.46523628927048575665e-4,  -0.98374475304879564677e-4,
    0.15808870322491248884e-3,  -0.21026444172410488319e-3,
    0.21743961811521264320e-3,  -0.16431810653676389022e-3,
    0.84418223983852743293e-4,  -0.26190838401581408670e-4,
    0.36899182659531622704e-5};

// Requires Re(z) >= 0.5.
Complex lanczos_log_gamma(Complex z) {
  Complex sum(kLanczosC[0], 0.0);
  for (int k = 1; k < 15; ++k) sum += kLanczosC[k] / (z + double(k - 1));
  const Complex base = z + (kLanczosG - 0.5);
  return 0.5 * kLogTwoPi + (z - 0.5) * std::log(base) - base + std::log(sum);
}

// Six-term Stirling series; adequate whenever |z| is large and arg(z) is
// bounded away from pi (here only used with |Im(z)| > 500).
Complex stirling_log_gamma(Complex z) {
  static constexpr double kStirling[6] = {
      1.0 / 12.0,      -1.0 / 360.0,     1.0 / 1260.0,
      -1.0 / 1680.0,   1.0 / 1188.0,     -691.0 / 360360.0};
  const Complex inv = 1.0 / z;
  const Complex inv2 = inv * inv;
  Complex corr(0.0, 0.0);
  Complex p = inv;
  for (int k = 0; k < 6; ++k) {
    corr += kStirling[k] * p;
    p *= inv2;
  }
  return (z - 0.5) * std::log(z) - z + 0.5 * kLogTwoPi + corr;
}

// log(sin(pi z)) without overflow; for Im(z) large the e^{pi Im z} factor
// is peeled off analytically.  Branch is whatever the principal logs give;
// all callers only rely on exp() of the result.
Complex log_sin_pi(Complex z) {
  const Complex w = kPi * z;
  const double im = w.imag();
  if (std::abs(im) <= 30.0) return std::log(std::sin(w));
  if (im > 0.0) {
    // sin w = e^{-iw} (e^{2iw} - 1) / (2i),  |e^{2iw}| = e^{-2 im} tiny
    const Complex small = std::exp(Complex(0.0, 2.0) * w);
    return Complex(0.0, -1.0) * w + std::log(small - 1.0) -
           std::log(Complex(0.0, 2.0));
  }
  const Complex small = std::exp(Complex(0.0, -2.0) * w);
  return Complex(0.0, 1.0) * w + std::log(small - 1.0) -
         std::log(Complex(0.0, -2.0));
}

Complex log_gamma_upper(Complex z);  // Im(z) >= 0

Complex log_gamma_any(Complex z) {
  if (z.imag() < 0.0) return std::conj(log_gamma_upper(std::conj(z)));
  return log_gamma_upper(z);
}

Complex log_gamma_upper(Complex z) {
  if (z.imag() > 500.0) return stirling_log_gamma(z);
  if (z.real() >= 0.5) return lanczos_log_gamma(z);
  // Reflection: log G(z) = log pi - log sin(pi z) - log G(1 - z)
  return std::log(kPi) - log_sin_pi(z) - log_gamma_any(1.0 - z);
}

}  // namespace

Complex log_gamma(Complex z) {
  require_finite(z, "log_gamma");
  if (z.imag() == 0.0 && z.real() <= 0.0 &&
      z.real() == std::floor(z.real())) {
    throw strip_error("log_gamma: pole at nonpositive integer " +
                      std::to_string(z.real()));
  }
  return log_gamma_any(z);
}

Complex gamma_fn(Complex z) { return std::exp(log_gamma(z)); }

double abs_gamma(double alpha, double v) {
  return std::exp(log_gamma(Complex(alpha, v)).real());
}

std::pair<double, double> abs_gamma_bounds(double alpha, double beta_im) {
  require_finite(alpha, "abs_gamma_bounds");
  require_finite(beta_im, "abs_gamma_bounds");
  const double b = std::abs(beta_im);
  if (b < 2.0)
    throw std::domain_error("abs_gamma_bounds: requires |beta_im| >= 2");

  auto ratio = [alpha](double beta) {
    // |Gamma(alpha+i beta)| / (beta^{alpha-1/2} e^{-beta pi/2})
    const double log_env =
        (alpha - 0.5) * std::log(beta) - beta * kPi / 2.0;
    return std::exp(log_gamma(Complex(alpha, beta)).real() - log_env);
  };

  // Frozen anchors and margins; the ratio tends to sqrt(2 pi) as beta grows
  // and its excursion between the anchors stays well inside these margins
  // for alpha in [-2, 4].
  const double r2 = ratio(2.0);
  const double r500 = ratio(500.0);
  const double c1 = 0.80 * std::min(r2, r500);
  const double c2 = 1.25 * std::max(r2, r500);

  const double log_env = (alpha - 0.5) * std::log(b) - b * kPi / 2.0;
  const double env = std::exp(log_env);
  return {c1 * env, c2 * env};
}

double reciprocal_gamma_strip_integral(double alpha, double delta, double U) {
  require_finite(alpha, "reciprocal_gamma_strip_integral");
  require_finite(delta, "reciprocal_gamma_strip_integral");
  require_finite(U, "reciprocal_gamma_strip_integral");
  if (!(U > 2.0))
    throw std::domain_error("reciprocal_gamma_strip_integral: requires U > 2");
  if (!(delta > 0.0))
    throw std::domain_error(
        "reciprocal_gamma_strip_integral: requires delta > 0");
  if (!(alpha > 0.0))
    throw std::domain_error(
        "reciprocal_gamma_strip_integral: requires alpha > 0");
  if (delta * U * kPi / 2.0 > 690.0)
    throw std::domain_error(
        "reciprocal_gamma_strip_integral: integrand overflows double range");

  auto f = [alpha, delta](double v) {
    return std::exp(-delta * log_gamma(Complex(alpha, v)).real());
  };
  quad::Options opt;
  opt.abs_tol = 0.0;
  opt.rel_tol = 1e-11;
  // even integrand
  return 2.0 * quad::integrate_or_throw(f, 0.0, U, opt,
                                        "reciprocal_gamma_strip_integral");
}

}  // namespace mellinstop
