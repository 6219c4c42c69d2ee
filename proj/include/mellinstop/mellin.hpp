#pragma once

#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "mellinstop/common.hpp"

namespace mellinstop {

/// Vertical strip a < Re(s) < b on which a Mellin transform converges.
struct MellinStrip {
  double a = 0.0;
  double b = std::numeric_limits<double>::infinity();

  bool contains(double re) const { return re > a && re < b; }
  void require(double re, const char* what) const;
};

enum class MellinKind { Analytic, NumericQuadrature, Empirical };

/// A Mellin transform together with its strip of definition.  Evaluation
/// outside the strip is a hard error, never silent analytic continuation.
struct MellinFunction {
  MellinStrip strip;
  MellinKind kind = MellinKind::Analytic;
  std::function<Complex(Complex)> eval;

  Complex operator()(Complex s) const {
    require_finite(s, "MellinFunction");
    strip.require(s.real(), "MellinFunction");
    return eval(s);
  }
};

/// Positive observations of |Y_T| with a record of where they came from.
class SampleBatch {
 public:
  static SampleBatch from_values(std::vector<double> values,
                                 std::string provenance = "external");
  static SampleBatch from_values(std::vector<double> values,
                                 std::uint64_t seed);

  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  const std::string& provenance() const { return provenance_; }

 private:
  SampleBatch(std::vector<double> v, std::string p)
      : values_(std::move(v)), provenance_(std::move(p)) {}
  std::vector<double> values_;
  std::string provenance_;
};

/// A density paired with its Mellin transform (for Parseval-style checks).
struct DensityWithMellin {
  std::function<double(double)> density;
  MellinFunction mellin;
};

/// Gamma(sigma, rate) density transform r^{1-s} Gamma(s+sigma-1)/Gamma(sigma),
/// valid for Re(s) > 1 - sigma.
Complex mellin_of_gamma_density(double sigma, double rate, Complex s);

/// Transform of the unit-time marginal of a d-dimensional Bessel-type process,
/// Gamma((s+d-1)/2) 2^{(s-1)/2} / Gamma(d/2), valid for Re(s) > 1 - d.
Complex mellin_of_bessel_marginal(double d, Complex s);

/// (1/n) sum_k x_k^{s-1}; exact finite sum, conjugate-symmetric in s.
Complex empirical_mellin(const SampleBatch& batch, Complex s);

/// Quadrature fallback: \int_0^\infty f(x) x^{s-1} dx to absolute error tol.
Complex mellin_numeric(const std::function<double(double)>& density,
                       const MellinStrip& strip, Complex s, double tol);

/// Truncated Mellin inversion on the line Re(s)=gamma_line:
///   (1/2pi) \int_{-cutoff}^{cutoff} mf(gamma+iv) x^{-gamma-iv} dv
/// by composite Simpson with step  min(0.02, step_control/(1+|ln x|)).
/// The imaginary part must vanish by conjugate symmetry; a relative residual
/// above 1e-8 raises symmetry_error.
double mellin_invert(const MellinFunction& mf, double gamma_line, double x,
                     double cutoff, double step_control = 0.25);

/// Mellin convolution (f ⊙ g)(x) = \int_0^\infty f(x/u) g(u) u^{-1} du.
double mellin_convolve(const std::function<double(double)>& f,
                       const std::function<double(double)>& g, double x,
                       double tol);

/// Both sides of the Parseval identity
///   \int f g dx  =  (1/2pi) \int M[f](1-gamma-iv) M[g](gamma+iv) dv .
std::pair<double, double> parseval_check(const DensityWithMellin& f,
                                         const DensityWithMellin& g,
                                         double gamma_line);

}  // namespace mellinstop
