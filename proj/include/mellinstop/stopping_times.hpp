#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "mellinstop/mellin.hpp"

namespace mellinstop {

enum class TimeFamily {
  Gamma,
  Exponential,
  Weibull,
  LogNormal,
  InverseGaussian,
  Beta
};

/// Sector-holomorphy metadata of a density class: f extends holomorphically
/// to |arg z| <= beta_angle with f = O(x^{-a}) at 0 and O(x^{-b}) at infinity.
struct Smoothness {
  double beta_angle;
  double a;
  double b;  // may be +infinity
};

/// A stopping-time density family: density, seed-deterministic sampler,
/// Mellin transform (closed form where available, cached line quadrature for
/// inverse Gaussian), and smoothness-class metadata.
class StoppingTimeModel {
 public:
  static StoppingTimeModel gamma(double shape, double rate);
  static StoppingTimeModel exponential(double rate);
  static StoppingTimeModel weibull(double k, double lambda);
  static StoppingTimeModel lognormal(double mu, double sigma);
  static StoppingTimeModel inverse_gaussian(double mu, double lambda);
  static StoppingTimeModel beta(double p, double q);  // requires p, q >= 1

  TimeFamily family() const { return family_; }
  const std::vector<double>& params() const { return params_; }
  std::string name() const;

  double density(double x) const;
  double sample(std::uint64_t seed) const;
  Complex mellin(Complex z) const;
  MellinStrip strip() const { return strip_; }
  const Smoothness& smoothness() const { return smoothness_; }

  MellinFunction mellin_function() const;
  DensityWithMellin density_with_mellin() const;

 private:
  StoppingTimeModel(TimeFamily f, std::vector<double> params,
                    MellinStrip strip, Smoothness smooth);

  TimeFamily family_;
  std::vector<double> params_;
  MellinStrip strip_;
  Smoothness smoothness_;

  struct LineCache;
  std::shared_ptr<LineCache> cache_;  // inverse Gaussian quadrature lines
};

/// Registry constructor used by the CLI/config layer.
StoppingTimeModel make_stopping_time(TimeFamily family,
                                     const std::vector<double>& params);
StoppingTimeModel make_stopping_time(const std::string& family,
                                     const std::vector<double>& params);
TimeFamily time_family_from_string(const std::string& name);

}  // namespace mellinstop
