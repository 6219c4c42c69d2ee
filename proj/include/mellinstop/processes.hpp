#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "mellinstop/mellin.hpp"

namespace mellinstop {

enum class ProcessFamily { Bessel, GaussianSS, GammaSS };

/// A self-similar process observed through the absolute value of its unit-time
/// marginal: scaling exponent H, closed-form Mellin transform of |Y_1|, and a
/// seed-deterministic sampler of |Y_1|.  Everything the estimator needs
/// follows from T^H |Y_1| =_d |Y_T|.
class ProcessModel {
 public:
  /// Bessel process of dimension d >= 1 started at 0 (H = 1/2 exactly).
  static ProcessModel bessel(double d);
  /// H-self-similar process with Y_1 ~ N(0,1), observed as |Y_1|.
  static ProcessModel gaussian_ss(double H);
  /// H-self-similar process with Y_1 ~ Gamma(sigma_shape, rate 1).
  static ProcessModel gamma_ss(double H, double sigma_shape);

  ProcessFamily family() const { return family_; }
  double H() const { return H_; }
  double dimension() const { return d_; }          // bessel only
  double sigma_shape() const { return sigma_; }    // gamma_ss only
  std::string name() const;

  MellinStrip marginal_strip() const;
  Complex marginal_mellin(Complex s) const;
  MellinFunction marginal_mellin_function() const;

  /// One draw of |Y_1|, a pure function of the seed.
  double sample_y1(std::uint64_t seed) const;

  /// One draw of |Y_T| given T = t_sample:  t^H * |Y_1|-draw.
  double sample_stopped(double t_sample, std::uint64_t seed) const;

  /// Density of |Y_t| at y (closed form per family).
  double marginal_density(double t, double y) const;

 private:
  ProcessModel(ProcessFamily f, double H, double d, double sigma)
      : family_(f), H_(H), d_(d), sigma_(sigma) {}
  ProcessFamily family_;
  double H_;
  double d_ = 0.0;
  double sigma_ = 0.0;
};

/// Mixture density of |Y_T|:  p(y) = \int_0^\infty g_t(y) f_T(t) dt by
/// adaptive quadrature with absolute error <= tol.  f_T may be signed (used
/// by the minimax construction for difference densities).
double stopped_density(const ProcessModel& process,
                       const std::function<double(double)>& t_density,
                       double y, double tol);

}  // namespace mellinstop
