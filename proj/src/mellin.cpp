#include "mellinstop/mellin.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "mellinstop/quadrature.hpp"
#include "mellinstop/special_functions.hpp"

namespace mellinstop {

void MellinStrip::require(double re, const char* what) const {
  if (!contains(re)) {
    throw strip_error(std::string(what) + ": Re(s)=" + std::to_string(re) +
                      " outside Mellin strip (" + std::to_string(a) + ", " +
                      std::to_string(b) + ")");
  }
}

SampleBatch SampleBatch::from_values(std::vector<double> values,
                                     std::string provenance) {
  if (values.empty())
    throw std::invalid_argument("SampleBatch: batch must be nonempty");
  for (double v : values) {
    if (!std::isfinite(v) || v <= 0.0)
      throw std::invalid_argument(
          "SampleBatch: entries must be strictly positive and finite");
  }
  return SampleBatch(std::move(values), std::move(provenance));
}

SampleBatch SampleBatch::from_values(std::vector<double> values,
                                     std::uint64_t seed) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "seed:0x%016llx",
                static_cast<unsigned long long>(seed));
  return from_values(std::move(values), std::string(buf));
}

Complex mellin_of_gamma_density(double sigma, double rate, Complex s) {
  require_positive(sigma, "mellin_of_gamma_density: sigma");
  require_positive(rate, "mellin_of_gamma_density: rate");
  require_finite(s, "mellin_of_gamma_density");
  MellinStrip{1.0 - sigma}.require(s.real(), "mellin_of_gamma_density");
  return std::exp((1.0 - s) * std::log(rate) + log_gamma(s + (sigma - 1.0)) -
                  log_gamma(Complex(sigma, 0.0)));
}

Complex mellin_of_bessel_marginal(double d, Complex s) {
  require_finite(d, "mellin_of_bessel_marginal: d");
  if (d < 1.0)
    throw std::invalid_argument("mellin_of_bessel_marginal: requires d >= 1");
  require_finite(s, "mellin_of_bessel_marginal");
  MellinStrip{1.0 - d}.require(s.real(), "mellin_of_bessel_marginal");
  const double log2 = 0.6931471805599453094172321214581766;
  return std::exp(log_gamma((s + (d - 1.0)) / 2.0) +
                  (s - 1.0) * (0.5 * log2) - log_gamma(Complex(d / 2.0, 0.0)));
}

Complex empirical_mellin(const SampleBatch& batch, Complex s) {
  require_finite(s, "empirical_mellin");
  const Complex p = s - 1.0;
  Complex acc(0.0, 0.0);
  for (double x : batch.values()) acc += std::exp(p * std::log(x));
  return acc / static_cast<double>(batch.size());
}

Complex mellin_numeric(const std::function<double(double)>& density,
                       const MellinStrip& strip, Complex s, double tol) {
  require_finite(s, "mellin_numeric");
  strip.require(s.real(), "mellin_numeric");
  require_positive(tol, "mellin_numeric: tol");

  // Log substitution: x = e^{-u} on (0,1], x = e^{u} on [1,inf).
  //   \int_0^1 f x^{s-1} dx = \int_0^inf f(e^{-u}) e^{-u s} du
  //   \int_1^inf f x^{s-1} dx = \int_0^inf f(e^{u}) e^{u s} du
  quad::Options opt;
  opt.abs_tol = tol * 0.2;
  opt.rel_tol = 0.0;

  auto tail = [&](auto integrand) -> Complex {
    Complex total(0.0, 0.0);
    double err = 0.0;
    double lo = 0.0, hi = 1.0;
    bool done = false;
    while (lo < 700.0) {
      quad::ResultC r = quad::integrate_complex(
          std::function<Complex(double)>(integrand), lo, hi, opt);
      total += r.value;
      err += r.abs_error;
      if (std::abs(r.value) + r.abs_error < tol * 0.05 && lo >= 2.0) {
        done = true;
        break;
      }
      lo = hi;
      hi = std::min(700.0, hi * 2.0);
    }
    if (!done && lo < 700.0)
      throw quadrature_error("mellin_numeric: tail did not converge");
    if (err > tol)
      throw quadrature_error("mellin_numeric: error estimate exceeds tol");
    return total;
  };

  const Complex lower = tail([&](double u) {
    const double fx = density(std::exp(-u));
    return fx == 0.0 ? Complex(0.0, 0.0) : fx * std::exp(-u * s);
  });
  const Complex upper = tail([&](double u) {
    const double fx = density(std::exp(u));
    return fx == 0.0 ? Complex(0.0, 0.0) : fx * std::exp(u * s);
  });
  return lower + upper;
}

double mellin_invert(const MellinFunction& mf, double gamma_line, double x,
                     double cutoff, double step_control) {
  require_positive(x, "mellin_invert: x");
  require_finite(gamma_line, "mellin_invert: gamma_line");
  mf.strip.require(gamma_line, "mellin_invert");
  if (cutoff < 0.0)
    throw std::invalid_argument("mellin_invert: cutoff must be >= 0");
  if (cutoff == 0.0) return 0.0;

  // Composite Simpson on [-cutoff, cutoff]; the integrand oscillates like
  // e^{-iv ln x}, so the step shrinks with |ln x|.
  const double lnx = std::log(x);
  const double h_target = std::min(0.02, step_control / (1.0 + std::abs(lnx)));
  const std::size_t half = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(cutoff / h_target / 2.0)));
  const std::size_t n = 2 * half;  // intervals per half-line, even
  const double h = cutoff / static_cast<double>(n);

  Complex sum(0.0, 0.0);
  double l1 = 0.0;
  for (std::size_t j = 0; j <= 2 * n; ++j) {
    const double v = -cutoff + h * static_cast<double>(j);
    const Complex val =
        mf(Complex(gamma_line, v)) * std::exp(Complex(0.0, -v * lnx));
    const double w = (j == 0 || j == 2 * n) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
    sum += w * val;
    l1 += w * std::abs(val);
  }
  sum *= h / 3.0;
  l1 *= h / 3.0;

  const double scale = std::pow(x, -gamma_line) / kTwoPi;
  const double re = sum.real() * scale;
  const double im = sum.imag() * scale;
  const double ref = std::max(std::abs(re), l1 * scale);
  if (std::abs(im) > 1e-8 * std::max(ref, 1e-300)) {
    throw symmetry_error(
        "mellin_invert: imaginary residual " + std::to_string(im) +
        " exceeds 1e-8 relative; transform is not conjugate-symmetric");
  }
  return re;
}

double mellin_convolve(const std::function<double(double)>& f,
                       const std::function<double(double)>& g, double x,
                       double tol) {
  require_positive(x, "mellin_convolve: x");
  require_positive(tol, "mellin_convolve: tol");
  // u = e^t:  \int f(x/u) g(u)/u du = \int f(x e^{-t}) g(e^t) dt
  quad::Options opt;
  opt.abs_tol = tol;
  opt.rel_tol = 0.0;
  quad::Result r = quad::integrate_real_line(
      [&](double t) {
        const double u = std::exp(t);
        const double gv = g(u);
        return gv == 0.0 ? 0.0 : f(x * std::exp(-t)) * gv;
      },
      opt, 2.0, 120.0);
  if (!r.converged)
    throw quadrature_error("mellin_convolve: quadrature did not converge");
  return r.value;
}

std::pair<double, double> parseval_check(const DensityWithMellin& f,
                                         const DensityWithMellin& g,
                                         double gamma_line) {
  g.mellin.strip.require(gamma_line, "parseval_check: gamma for M[g]");
  f.mellin.strip.require(1.0 - gamma_line, "parseval_check: 1-gamma for M[f]");

  quad::Options opt;
  opt.abs_tol = 1e-9;
  opt.rel_tol = 1e-9;
  quad::Result lhs = quad::integrate_positive_axis(
      [&](double xx) { return f.density(xx) * g.density(xx); }, opt, 1.0);
  if (!lhs.converged)
    throw quadrature_error("parseval_check: lhs quadrature did not converge");

  quad::ResultC rhs = quad::integrate_real_line_complex(
      [&](double v) {
        return f.mellin(Complex(1.0 - gamma_line, -v)) *
               g.mellin(Complex(gamma_line, v));
      },
      opt, 4.0, 400.0);
  if (!rhs.converged)
    throw quadrature_error("parseval_check: rhs quadrature did not converge");
  return {lhs.value, rhs.value.real() / kTwoPi};
}

}  // namespace mellinstop
