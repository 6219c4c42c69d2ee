#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "mellinstop/quadrature.hpp"
#include "mellinstop/rng.hpp"
#include "mellinstop/special_functions.hpp"
#include "mellinstop/stopping_times.hpp"

using namespace mellinstop;

namespace {

std::vector<StoppingTimeModel> all_families() {
  return {StoppingTimeModel::gamma(2.0, 1.0),
          StoppingTimeModel::exponential(1.0),
          StoppingTimeModel::weibull(2.0, 1.0),
          StoppingTimeModel::lognormal(0.0, 1.0),
          StoppingTimeModel::inverse_gaussian(1.0, 1.0),
          StoppingTimeModel::beta(2.0, 3.0)};
}

// numeric CDF on a fine grid for the KS comparison
struct NumericCdf {
  std::vector<double> xs, cdf;
  explicit NumericCdf(const StoppingTimeModel& m, double lo, double hi) {
    const int n = 8192;
    xs.resize(n + 1);
    cdf.resize(n + 1);
    const double h = (hi - lo) / n;
    double acc = 0.0;
    double prev = m.density(lo);
    xs[0] = lo;
    quad::Options opt;
    opt.abs_tol = 1e-12;
    opt.rel_tol = 1e-10;
    cdf[0] = lo > 0.0 ? quad::integrate(
                            [&](double t) { return m.density(t); }, 0.0, lo,
                            opt)
                            .value
                      : 0.0;
    acc = cdf[0];
    for (int i = 1; i <= n; ++i) {
      const double x = lo + h * i;
      const double cur = m.density(x);
      acc += 0.5 * (prev + cur) * h;
      xs[i] = x;
      cdf[i] = acc;
      prev = cur;
    }
  }
  double operator()(double x) const {
    if (x <= xs.front()) return cdf.front();
    if (x >= xs.back()) return cdf.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t j = static_cast<std::size_t>(it - xs.begin());
    const double w = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
    return cdf[j - 1] + w * (cdf[j] - cdf[j - 1]);
  }
};

}  // namespace

TEST_SUITE_BEGIN("stopping_times");

TEST_CASE("registry examples") {
  const StoppingTimeModel g21 = StoppingTimeModel::gamma(2.0, 1.0);
  CHECK(g21.density(1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));

  const StoppingTimeModel w11 = StoppingTimeModel::weibull(1.0, 1.0);
  CHECK(w11.mellin(Complex(2.0, 0.0)).real() ==
        doctest::Approx(1.0).epsilon(1e-12));

  const StoppingTimeModel ln01 = StoppingTimeModel::lognormal(0.0, 1.0);
  CHECK(ln01.mellin(Complex(3.0, 0.0)).real() ==
        doctest::Approx(std::exp(2.0)).epsilon(1e-12));

  CHECK_THROWS_AS(StoppingTimeModel::gamma(-1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(StoppingTimeModel::beta(0.5, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(make_stopping_time("gamma", {2.0}), std::invalid_argument);
  CHECK_THROWS_AS(make_stopping_time("cauchy", {1.0}), std::invalid_argument);
}

TEST_CASE("densities integrate to one") {
  quad::Options opt;
  opt.abs_tol = 1e-10;
  opt.rel_tol = 1e-9;
  for (const auto& m : all_families()) {
    const double mass =
        quad::integrate_positive_axis([&](double x) { return m.density(x); },
                                      opt, 1.0)
            .value;
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("sampler moments") {
  const int n = 100000;
  {
    const StoppingTimeModel m = StoppingTimeModel::gamma(2.0, 1.0);
    double m1 = 0.0, m2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double t = m.sample(derive_seed(21, {static_cast<std::uint64_t>(i)}));
      m1 += t;
      m2 += t * t;
    }
    m1 /= n;
    m2 /= n;
    CHECK(std::abs(m1 - 2.0) <= 4.0 * std::sqrt((m2 - m1 * m1) / n));
  }
  {
    const StoppingTimeModel m = StoppingTimeModel::exponential(1.0);
    int over = 0;
    for (int i = 0; i < n; ++i)
      if (m.sample(derive_seed(22, {static_cast<std::uint64_t>(i)})) > 1.0)
        ++over;
    const double p_hat = static_cast<double>(over) / n;
    const double se = std::sqrt(p_hat * (1.0 - p_hat) / n);
    CHECK(std::abs(p_hat - std::exp(-1.0)) <= 4.0 * se);
  }
  {
    const StoppingTimeModel m = StoppingTimeModel::inverse_gaussian(1.0, 1.0);
    double m1 = 0.0, m2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double t = m.sample(derive_seed(23, {static_cast<std::uint64_t>(i)}));
      m1 += t;
      m2 += t * t;
    }
    m1 /= n;
    m2 /= n;
    CHECK(std::abs(m1 - 1.0) <= 4.0 * std::sqrt((m2 - m1 * m1) / n));
  }
}

TEST_CASE("transform values on the real axis") {
  const StoppingTimeModel g21 = StoppingTimeModel::gamma(2.0, 1.0);
  // M[T](z) = Gamma(z+1) for gamma(2,1); checked at the two readings of the
  // worked example and against direct quadrature
  CHECK(g21.mellin(Complex(0.4, 0.0)).real() ==
        doctest::Approx(std::exp(std::lgamma(1.4))).epsilon(1e-10));
  CHECK(g21.mellin(Complex(1.4, 0.0)).real() ==
        doctest::Approx(std::exp(std::lgamma(2.4))).epsilon(1e-10));
  const Complex quad04 = mellin_numeric(
      [&](double x) { return g21.density(x); }, g21.strip(),
      Complex(0.4, 0.0), 1e-10);
  CHECK(g21.mellin(Complex(0.4, 0.0)).real() ==
        doctest::Approx(quad04.real()).epsilon(1e-8));

  const StoppingTimeModel e1 = StoppingTimeModel::exponential(1.0);
  CHECK(e1.mellin(Complex(0.5, 0.0)).real() ==
        doctest::Approx(std::sqrt(kPi)).epsilon(1e-10));

  for (const auto& m : all_families()) {
    CHECK(m.mellin(Complex(1.0, 0.0)).real() ==
          doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(m.mellin(Complex(1.0, 0.0)).imag()) < 1e-10);
  }
}

TEST_CASE("transforms match integrated moments") {
  quad::Options opt;
  opt.abs_tol = 1e-12;
  opt.rel_tol = 1e-11;
  for (const auto& m : all_families()) {
    for (double z : {2.0, 3.0}) {
      const double moment =
          quad::integrate_positive_axis(
              [&](double x) { return m.density(x) * std::pow(x, z - 1.0); },
              opt, 1.0)
              .value;
      CHECK(m.mellin(Complex(z, 0.0)).real() ==
            doctest::Approx(moment).epsilon(1e-7));
    }
  }
}

TEST_CASE("inverse gaussian line cache against direct quadrature") {
  const StoppingTimeModel ig = StoppingTimeModel::inverse_gaussian(1.0, 1.0);
  for (const Complex z : {Complex(1.3, 2.7), Complex(0.5, 0.0137),
                          Complex(2.0, -4.4)}) {
    const Complex direct = mellin_numeric(
        [&](double x) { return ig.density(x); }, ig.strip(), z, 1e-11);
    const Complex cached = ig.mellin(z);
    CHECK(std::abs(cached - direct) <= 1e-8);
  }
}

TEST_CASE("exponential transform decay on vertical lines") {
  // |M[T](1.5+iv)| e^{beta |v|} stays bounded for gamma(2,1) at the stored
  // smoothness angle; the envelope peaks near v = 40 at ~5.4e2.
  const StoppingTimeModel g21 = StoppingTimeModel::gamma(2.0, 1.0);
  const double beta = g21.smoothness().beta_angle;
  CHECK(beta == doctest::Approx(kPi / 2.0 - 0.05));
  double sup = 0.0;
  for (double v = -40.0; v <= 40.0; v += 0.25) {
    const double val =
        std::abs(g21.mellin(Complex(1.5, v))) * std::exp(beta * std::abs(v));
    sup = std::max(sup, val);
  }
  CHECK(sup > 100.0);
  CHECK(sup <= 700.0);
}

TEST_CASE("samplers agree with their densities (KS)") {
  const int n = 10000;
  std::size_t fam = 0;
  for (const auto& m : all_families()) {
    std::vector<double> draws(n);
    for (int i = 0; i < n; ++i)
      draws[i] = m.sample(
          derive_seed(24, {fam, static_cast<std::uint64_t>(i)}));
    std::sort(draws.begin(), draws.end());
    const NumericCdf cdf(m, std::max(1e-9, draws.front() * 0.5),
                         draws.back() * 1.05);
    double d = 0.0;
    for (int i = 0; i < n; ++i) {
      const double f = cdf(draws[i]);
      d = std::max(d, std::abs(f - static_cast<double>(i) / n));
      d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    }
    CHECK(d <= 0.015);
    ++fam;
  }
}

TEST_CASE("strip violations are hard errors") {
  const StoppingTimeModel g21 = StoppingTimeModel::gamma(2.0, 1.0);
  CHECK_THROWS_AS(g21.mellin(Complex(-1.5, 0.0)), strip_error);
  const StoppingTimeModel w = StoppingTimeModel::weibull(2.0, 1.0);
  CHECK_THROWS_AS(w.mellin(Complex(-0.75, 1.0)), strip_error);
}

TEST_SUITE_END();
