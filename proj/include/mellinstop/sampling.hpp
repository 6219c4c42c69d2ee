#pragma once

#include <cmath>

#include "mellinstop/rng.hpp"

namespace mellinstop {
namespace sampling {

// Exact, seed-deterministic variate generators on top of CounterRng.
// Rejection loops consume the stream in order, so a draw is still a pure
// function of its seed.

/// Gamma(shape, scale 1) via Marsaglia-Tsang squeeze; shape < 1 handled by
/// the boost G(a) = G(a+1) U^{1/a}.
inline double gamma_draw(CounterRng& rng, double shape) {
  if (shape < 1.0) {
    const double u = rng.next_unit();
    return gamma_draw(rng, shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.next_normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.next_unit();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

inline double exponential_draw(CounterRng& rng, double rate) {
  return -std::log(rng.next_unit()) / rate;
}

inline double weibull_draw(CounterRng& rng, double k, double lambda) {
  return lambda * std::pow(-std::log(rng.next_unit()), 1.0 / k);
}

inline double lognormal_draw(CounterRng& rng, double mu, double sigma) {
  return std::exp(mu + sigma * rng.next_normal());
}

/// Inverse Gaussian via the reciprocal-root transform (Michael-Schucany-Haas).
inline double inverse_gaussian_draw(CounterRng& rng, double mu,
                                    double lambda) {
  const double z = rng.next_normal();
  const double nu = z * z;
  const double x = mu + mu * mu * nu / (2.0 * lambda) -
                   mu / (2.0 * lambda) *
                       std::sqrt(4.0 * mu * lambda * nu + mu * mu * nu * nu);
  const double u = rng.next_unit();
  return (u <= mu / (mu + x)) ? x : mu * mu / x;
}

inline double beta_draw(CounterRng& rng, double p, double q) {
  const double g1 = gamma_draw(rng, p);
  const double g2 = gamma_draw(rng, q);
  return g1 / (g1 + g2);
}

}  // namespace sampling
}  // namespace mellinstop
