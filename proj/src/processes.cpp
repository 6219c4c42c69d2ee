#include "mellinstop/processes.hpp"

#include <algorithm>
#include <cmath>

#include "mellinstop/quadrature.hpp"
#include "mellinstop/rng.hpp"
#include "mellinstop/sampling.hpp"
#include "mellinstop/special_functions.hpp"

namespace mellinstop {

ProcessModel ProcessModel::bessel(double d) {
  require_finite(d, "ProcessModel::bessel: d");
  if (d < 1.0)
    throw std::invalid_argument("ProcessModel::bessel: requires d >= 1");
  return ProcessModel(ProcessFamily::Bessel, 0.5, d, 0.0);
}

ProcessModel ProcessModel::gaussian_ss(double H) {
  require_finite(H, "ProcessModel::gaussian_ss: H");
  if (!(H > 0.0 && H <= 4.0))
    throw std::invalid_argument(
        "ProcessModel::gaussian_ss: requires H in (0, 4]");
  return ProcessModel(ProcessFamily::GaussianSS, H, 1.0, 0.0);
}

ProcessModel ProcessModel::gamma_ss(double H, double sigma_shape) {
  require_finite(H, "ProcessModel::gamma_ss: H");
  require_positive(sigma_shape, "ProcessModel::gamma_ss: sigma_shape");
  if (!(H > 0.0 && H <= 4.0))
    throw std::invalid_argument("ProcessModel::gamma_ss: requires H in (0, 4]");
  return ProcessModel(ProcessFamily::GammaSS, H, 0.0, sigma_shape);
}

std::string ProcessModel::name() const {
  switch (family_) {
    case ProcessFamily::Bessel:
      return "bessel(d=" + std::to_string(d_) + ")";
    case ProcessFamily::GaussianSS:
      return "gaussian_ss(H=" + std::to_string(H_) + ")";
    default:
      return "gamma_ss(H=" + std::to_string(H_) +
             ", sigma=" + std::to_string(sigma_) + ")";
  }
}

MellinStrip ProcessModel::marginal_strip() const {
  switch (family_) {
    case ProcessFamily::Bessel:
      return MellinStrip{1.0 - d_};
    case ProcessFamily::GaussianSS:
      return MellinStrip{0.0};
    default:
      return MellinStrip{1.0 - sigma_};
  }
}

Complex ProcessModel::marginal_mellin(Complex s) const {
  switch (family_) {
    case ProcessFamily::Bessel:
      return mellin_of_bessel_marginal(d_, s);
    case ProcessFamily::GaussianSS:
      return mellin_of_bessel_marginal(1.0, s);
    default:
      return mellin_of_gamma_density(sigma_, 1.0, s);
  }
}

MellinFunction ProcessModel::marginal_mellin_function() const {
  ProcessModel self = *this;
  return MellinFunction{marginal_strip(), MellinKind::Analytic,
                        [self](Complex s) { return self.marginal_mellin(s); }};
}

double ProcessModel::sample_y1(std::uint64_t seed) const {
  CounterRng rng(seed);
  switch (family_) {
    case ProcessFamily::Bessel:
      // chi_d draw: sqrt of Gamma(d/2, scale 2); valid for all real d >= 1
      return std::sqrt(2.0 * sampling::gamma_draw(rng, d_ / 2.0));
    case ProcessFamily::GaussianSS:
      return std::abs(rng.next_normal());
    default:
      return sampling::gamma_draw(rng, sigma_);
  }
}

double ProcessModel::sample_stopped(double t_sample,
                                    std::uint64_t seed) const {
  require_positive(t_sample, "sample_stopped: t_sample");
  return std::pow(t_sample, H_) * sample_y1(seed);
}

double ProcessModel::marginal_density(double t, double y) const {
  if (y <= 0.0 || t <= 0.0) return 0.0;
  switch (family_) {
    case ProcessFamily::Bessel: {
      const double logv = (1.0 - d_ / 2.0) * std::log(2.0) -
                          (d_ / 2.0) * std::log(t) +
                          (d_ - 1.0) * std::log(y) - y * y / (2.0 * t) -
                          std::lgamma(d_ / 2.0);
      return std::exp(logv);
    }
    case ProcessFamily::GaussianSS: {
      const double sd = std::pow(t, H_);
      const double z = y / sd;
      return std::sqrt(2.0 / kPi) / sd * std::exp(-0.5 * z * z);
    }
    default: {
      const double scale = std::pow(t, H_);
      const double u = y / scale;
      const double logv = (sigma_ - 1.0) * std::log(u) - u -
                          std::lgamma(sigma_) - std::log(scale);
      return std::exp(logv);
    }
  }
}

double stopped_density(const ProcessModel& process,
                       const std::function<double(double)>& t_density,
                       double y, double tol) {
  require_positive(y, "stopped_density: y");
  require_positive(tol, "stopped_density: tol");

  // The time-marginal peaks near t* (solved from d/dt g_t(y) = 0); centring
  // the positive-axis split there keeps the adaptive pass cheap for y far
  // from 1.
  double scale;
  switch (process.family()) {
    case ProcessFamily::Bessel:
      scale = y * y / std::max(1.0, process.dimension());
      break;
    case ProcessFamily::GaussianSS:
      scale = std::pow(y * y, 1.0 / (2.0 * process.H()));
      break;
    default:
      scale = std::pow(y / process.sigma_shape(), 1.0 / process.H());
      break;
  }
  scale = std::clamp(scale, 1e-8, 1e12);
  scale = std::max(scale, 1.0);  // T mass usually lives near O(1)

  quad::Options opt;
  opt.abs_tol = tol;
  opt.rel_tol = 1e-9;
  quad::Result r = quad::integrate_positive_axis(
      [&](double t) {
        const double ft = t_density(t);
        return ft == 0.0 ? 0.0 : process.marginal_density(t, y) * ft;
      },
      opt, scale);
  if (!r.converged)
    throw quadrature_error("stopped_density: quadrature did not converge");
  return r.value;
}

}  // namespace mellinstop
