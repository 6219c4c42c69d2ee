#include "mellinstop/stopping_times.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <mutex>

#include "mellinstop/quadrature.hpp"
#include "mellinstop/rng.hpp"
#include "mellinstop/sampling.hpp"
#include "mellinstop/special_functions.hpp"

namespace mellinstop {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDefaultBeta = kPi / 2.0 - 0.05;
constexpr double kLineSpacing = 0.005;  // IG cache grid in Im(z)
}  // namespace

struct StoppingTimeModel::LineCache {
  std::mutex mu;
  // abscissa -> transform values at v = j * kLineSpacing, j = 0..size-1
  std::map<double, std::vector<Complex>> lines;
};

StoppingTimeModel::StoppingTimeModel(TimeFamily f, std::vector<double> params,
                                     MellinStrip strip, Smoothness smooth)
    : family_(f),
      params_(std::move(params)),
      strip_(strip),
      smoothness_(smooth) {
  if (family_ == TimeFamily::InverseGaussian)
    cache_ = std::make_shared<LineCache>();
}

StoppingTimeModel StoppingTimeModel::gamma(double shape, double rate) {
  require_positive(shape, "gamma: shape");
  require_positive(rate, "gamma: rate");
  return StoppingTimeModel(
      TimeFamily::Gamma, {shape, rate}, MellinStrip{1.0 - shape, kInf},
      Smoothness{kDefaultBeta, std::max(0.0, 1.0 - shape), kInf});
}

StoppingTimeModel StoppingTimeModel::exponential(double rate) {
  require_positive(rate, "exponential: rate");
  return StoppingTimeModel(TimeFamily::Exponential, {rate},
                           MellinStrip{0.0, kInf},
                           Smoothness{kDefaultBeta, 0.0, kInf});
}

StoppingTimeModel StoppingTimeModel::weibull(double k, double lambda) {
  require_positive(k, "weibull: k");
  require_positive(lambda, "weibull: lambda");
  return StoppingTimeModel(
      TimeFamily::Weibull, {k, lambda}, MellinStrip{1.0 - k, kInf},
      Smoothness{kDefaultBeta, std::max(0.0, 1.0 - k), kInf});
}

StoppingTimeModel StoppingTimeModel::lognormal(double mu, double sigma) {
  require_finite(mu, "lognormal: mu");
  require_positive(sigma, "lognormal: sigma");
  return StoppingTimeModel(TimeFamily::LogNormal, {mu, sigma},
                           MellinStrip{-kInf, kInf},
                           Smoothness{kDefaultBeta, 0.0, kInf});
}

StoppingTimeModel StoppingTimeModel::inverse_gaussian(double mu,
                                                      double lambda) {
  require_positive(mu, "inverse_gaussian: mu");
  require_positive(lambda, "inverse_gaussian: lambda");
  return StoppingTimeModel(TimeFamily::InverseGaussian, {mu, lambda},
                           MellinStrip{-kInf, kInf},
                           Smoothness{kDefaultBeta, 0.0, kInf});
}

StoppingTimeModel StoppingTimeModel::beta(double p, double q) {
  require_finite(p, "beta: p");
  require_finite(q, "beta: q");
  if (p < 1.0 || q < 1.0)
    throw std::invalid_argument(
        "beta: requires p, q >= 1 (sector holomorphy at the right endpoint)");
  return StoppingTimeModel(TimeFamily::Beta, {p, q},
                           MellinStrip{1.0 - p, kInf},
                           Smoothness{kDefaultBeta, 0.0, kInf});
}

std::string StoppingTimeModel::name() const {
  auto fmt = [](double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", x);
    return std::string(buf);
  };
  switch (family_) {
    case TimeFamily::Gamma:
      return "gamma(" + fmt(params_[0]) + "," + fmt(params_[1]) + ")";
    case TimeFamily::Exponential:
      return "exponential(" + fmt(params_[0]) + ")";
    case TimeFamily::Weibull:
      return "weibull(" + fmt(params_[0]) + "," + fmt(params_[1]) + ")";
    case TimeFamily::LogNormal:
      return "lognormal(" + fmt(params_[0]) + "," + fmt(params_[1]) + ")";
    case TimeFamily::InverseGaussian:
      return "inverse_gaussian(" + fmt(params_[0]) + "," + fmt(params_[1]) +
             ")";
    default:
      return "beta(" + fmt(params_[0]) + "," + fmt(params_[1]) + ")";
  }
}

double StoppingTimeModel::density(double x) const {
  if (!(x > 0.0)) return 0.0;
  switch (family_) {
    case TimeFamily::Gamma: {
      const double s = params_[0], r = params_[1];
      return std::exp(s * std::log(r) + (s - 1.0) * std::log(x) - r * x -
                      std::lgamma(s));
    }
    case TimeFamily::Exponential: {
      const double r = params_[0];
      return r * std::exp(-r * x);
    }
    case TimeFamily::Weibull: {
      const double k = params_[0], lam = params_[1];
      const double u = x / lam;
      return k / lam * std::pow(u, k - 1.0) * std::exp(-std::pow(u, k));
    }
    case TimeFamily::LogNormal: {
      const double mu = params_[0], sig = params_[1];
      const double z = (std::log(x) - mu) / sig;
      return std::exp(-0.5 * z * z) / (x * sig * kSqrtTwoPi);
    }
    case TimeFamily::InverseGaussian: {
      const double mu = params_[0], lam = params_[1];
      const double dev = x - mu;
      return std::sqrt(lam / (kTwoPi * x * x * x)) *
             std::exp(-lam * dev * dev / (2.0 * mu * mu * x));
    }
    default: {  // Beta on (0,1)
      const double p = params_[0], q = params_[1];
      if (x >= 1.0) return 0.0;
      const double logB =
          std::lgamma(p) + std::lgamma(q) - std::lgamma(p + q);
      return std::exp((p - 1.0) * std::log(x) + (q - 1.0) * std::log1p(-x) -
                      logB);
    }
  }
}

double StoppingTimeModel::sample(std::uint64_t seed) const {
  CounterRng rng(seed);
  switch (family_) {
    case TimeFamily::Gamma:
      return sampling::gamma_draw(rng, params_[0]) / params_[1];
    case TimeFamily::Exponential:
      return sampling::exponential_draw(rng, params_[0]);
    case TimeFamily::Weibull:
      return sampling::weibull_draw(rng, params_[0], params_[1]);
    case TimeFamily::LogNormal:
      return sampling::lognormal_draw(rng, params_[0], params_[1]);
    case TimeFamily::InverseGaussian:
      return sampling::inverse_gaussian_draw(rng, params_[0], params_[1]);
    default:
      return sampling::beta_draw(rng, params_[0], params_[1]);
  }
}

Complex StoppingTimeModel::mellin(Complex z) const {
  require_finite(z, "StoppingTimeModel::mellin");
  strip_.require(z.real(), "StoppingTimeModel::mellin");
  switch (family_) {
    case TimeFamily::Gamma:
      return mellin_of_gamma_density(params_[0], params_[1], z);
    case TimeFamily::Exponential:
      return mellin_of_gamma_density(1.0, params_[0], z);
    case TimeFamily::Weibull: {
      const double k = params_[0], lam = params_[1];
      return std::exp((z - 1.0) * std::log(lam) +
                      log_gamma(1.0 + (z - 1.0) / k));
    }
    case TimeFamily::LogNormal: {
      const double mu = params_[0], sig = params_[1];
      const Complex w = z - 1.0;
      return std::exp(mu * w + 0.5 * sig * sig * w * w);
    }
    case TimeFamily::Beta: {
      const double p = params_[0], q = params_[1];
      return std::exp(log_gamma(p + z - 1.0) +
                      log_gamma(Complex(p + q, 0.0)) -
                      log_gamma(Complex(p, 0.0)) - log_gamma(p + q + z - 1.0));
    }
    default:
      break;
  }

  // Inverse Gaussian: no elementary closed form here.  Quadrature nodes on
  // the requested vertical line are cached at spacing kLineSpacing and
  // interpolated (4-point Lagrange keeps the absolute error under 1e-8).
  const double c = z.real();
  const double v = std::abs(z.imag());
  const std::size_t want = static_cast<std::size_t>(v / kLineSpacing) + 4;

  std::vector<Complex>* line;
  {
    std::lock_guard<std::mutex> lk(cache_->mu);
    line = &cache_->lines[c];
    if (line->size() < want) {
      const std::size_t old = line->size();
      line->resize(want);
      for (std::size_t j = old; j < want; ++j) {
        const Complex node(c, static_cast<double>(j) * kLineSpacing);
        (*line)[j] = mellin_numeric(
            [this](double x) { return density(x); }, strip_, node, 1e-10);
      }
    }
  }

  Complex val;
  if (v == 0.0) {
    val = (*line)[0];
  } else {
    const double pos = v / kLineSpacing;
    std::size_t j1 = static_cast<std::size_t>(pos);
    if (j1 == 0) j1 = 1;
    const std::size_t j0 = j1 - 1;
    const double t = pos - static_cast<double>(j0);  // in [0, 3]
    // Lagrange through nodes j0..j0+3 at offsets 0,1,2,3
    const double l0 = -(t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0;
    const double l1 = t * (t - 2.0) * (t - 3.0) / 2.0;
    const double l2 = -t * (t - 1.0) * (t - 3.0) / 2.0;
    const double l3 = t * (t - 1.0) * (t - 2.0) / 6.0;
    val = l0 * (*line)[j0] + l1 * (*line)[j0 + 1] + l2 * (*line)[j0 + 2] +
          l3 * (*line)[j0 + 3];
  }
  return z.imag() >= 0.0 ? val : std::conj(val);
}

MellinFunction StoppingTimeModel::mellin_function() const {
  StoppingTimeModel self = *this;
  return MellinFunction{
      strip_,
      family_ == TimeFamily::InverseGaussian ? MellinKind::NumericQuadrature
                                             : MellinKind::Analytic,
      [self](Complex z) { return self.mellin(z); }};
}

DensityWithMellin StoppingTimeModel::density_with_mellin() const {
  StoppingTimeModel self = *this;
  return DensityWithMellin{[self](double x) { return self.density(x); },
                           mellin_function()};
}

TimeFamily time_family_from_string(const std::string& name) {
  if (name == "gamma") return TimeFamily::Gamma;
  if (name == "exponential") return TimeFamily::Exponential;
  if (name == "weibull") return TimeFamily::Weibull;
  if (name == "lognormal") return TimeFamily::LogNormal;
  if (name == "inverse_gaussian") return TimeFamily::InverseGaussian;
  if (name == "beta") return TimeFamily::Beta;
  throw std::invalid_argument("unknown stopping-time family '" + name + "'");
}

StoppingTimeModel make_stopping_time(TimeFamily family,
                                     const std::vector<double>& params) {
  auto need = [&](std::size_t n) {
    if (params.size() != n)
      throw std::invalid_argument(
          "make_stopping_time: wrong number of parameters");
  };
  switch (family) {
    case TimeFamily::Gamma:
      need(2);
      return StoppingTimeModel::gamma(params[0], params[1]);
    case TimeFamily::Exponential:
      need(1);
      return StoppingTimeModel::exponential(params[0]);
    case TimeFamily::Weibull:
      need(2);
      return StoppingTimeModel::weibull(params[0], params[1]);
    case TimeFamily::LogNormal:
      need(2);
      return StoppingTimeModel::lognormal(params[0], params[1]);
    case TimeFamily::InverseGaussian:
      need(2);
      return StoppingTimeModel::inverse_gaussian(params[0], params[1]);
    default:
      need(2);
      return StoppingTimeModel::beta(params[0], params[1]);
  }
}

StoppingTimeModel make_stopping_time(const std::string& family,
                                     const std::vector<double>& params) {
  return make_stopping_time(time_family_from_string(family), params);
}

}  // namespace mellinstop
