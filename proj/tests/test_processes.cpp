#include <doctest.h>

#include <cmath>
#include <vector>

#include "mellinstop/mellin.hpp"
#include "mellinstop/processes.hpp"
#include "mellinstop/quadrature.hpp"
#include "mellinstop/rng.hpp"
#include "mellinstop/stats.hpp"
#include "mellinstop/stopping_times.hpp"

using namespace mellinstop;

TEST_SUITE_BEGIN("processes");

TEST_CASE("marginal transform dispatch") {
  CHECK(ProcessModel::bessel(5.0).marginal_mellin(Complex(1.0, 0.0)).real() ==
        doctest::Approx(1.0).epsilon(1e-12));
  // E[Z^2] = 1 for the gaussian marginal
  CHECK(ProcessModel::gaussian_ss(0.5)
            .marginal_mellin(Complex(3.0, 0.0))
            .real() == doctest::Approx(1.0).epsilon(1e-12));
  // mean of Gamma(2,1)
  CHECK(ProcessModel::gamma_ss(1.0, 2.0)
            .marginal_mellin(Complex(2.0, 0.0))
            .real() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(
      ProcessModel::bessel(2.0).marginal_mellin(Complex(-1.5, 0.0)),
      strip_error);
  CHECK_THROWS_AS(ProcessModel::bessel(0.5), std::invalid_argument);
  CHECK_THROWS_AS(ProcessModel::gaussian_ss(5.0), std::invalid_argument);
}

TEST_CASE("stopped sampling moments") {
  const int n = 100000;
  // bessel d=5 at t=4: E[X^2 | T=4] = t*d = 20
  {
    const ProcessModel p = ProcessModel::bessel(5.0);
    double m2 = 0.0, m4 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x =
          p.sample_stopped(4.0, derive_seed(11, {static_cast<std::uint64_t>(i)}));
      m2 += x * x;
      m4 += x * x * x * x;
    }
    m2 /= n;
    m4 /= n;
    const double se = std::sqrt((m4 - m2 * m2) / n);
    CHECK(std::abs(m2 - 20.0) <= 4.0 * se);
  }
  // gaussian H=1/2 at t=1: E[X^2] = 1
  {
    const ProcessModel p = ProcessModel::gaussian_ss(0.5);
    double m2 = 0.0, m4 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x =
          p.sample_stopped(1.0, derive_seed(12, {static_cast<std::uint64_t>(i)}));
      m2 += x * x;
      m4 += x * x * x * x;
    }
    m2 /= n;
    m4 /= n;
    CHECK(std::abs(m2 - 1.0) <= 4.0 * std::sqrt((m4 - m2 * m2) / n));
  }
  // gamma_ss H=1 sigma=3 at t=2: mean 6
  {
    const ProcessModel p = ProcessModel::gamma_ss(1.0, 3.0);
    double m1 = 0.0, m2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x =
          p.sample_stopped(2.0, derive_seed(13, {static_cast<std::uint64_t>(i)}));
      m1 += x;
      m2 += x * x;
    }
    m1 /= n;
    m2 /= n;
    CHECK(std::abs(m1 - 6.0) <= 4.0 * std::sqrt((m2 - m1 * m1) / n));
  }
}

TEST_CASE("scaling law at non-integer dimension") {
  const double d = 2.5, t = 1.7;
  const ProcessModel p = ProcessModel::bessel(d);
  const int n = 100000;
  double m2 = 0.0, m4 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x =
        p.sample_stopped(t, derive_seed(14, {static_cast<std::uint64_t>(i)}));
    m2 += x * x;
    m4 += x * x * x * x;
  }
  m2 /= n;
  m4 /= n;
  CHECK(std::abs(m2 - t * d) <= 4.0 * std::sqrt((m4 - m2 * m2) / n));
}

TEST_CASE("sampler matches the marginal transform") {
  const std::vector<ProcessModel> models = {ProcessModel::bessel(5.0),
                                            ProcessModel::gaussian_ss(0.5),
                                            ProcessModel::gamma_ss(1.0, 2.0)};
  const int n = 100000;
  for (std::size_t mi = 0; mi < models.size(); ++mi) {
    std::vector<double> draws(n);
    for (int i = 0; i < n; ++i)
      draws[i] = models[mi].sample_y1(
          derive_seed(15, {mi, static_cast<std::uint64_t>(i)}));
    const SampleBatch batch = SampleBatch::from_values(std::move(draws));
    for (double s : {1.2, 1.6, 2.4}) {
      const double expected =
          models[mi].marginal_mellin(Complex(s, 0.0)).real();
      const double got = empirical_mellin(batch, Complex(s, 0.0)).real();
      double var = 0.0;
      for (double x : batch.values()) {
        const double term = std::pow(x, s - 1.0) - got;
        var += term * term;
      }
      const double se = std::sqrt(var) / n;
      CHECK(std::abs(got - expected) <= 4.0 * se);
    }
  }
}

TEST_CASE("the chi sampler equals the norm-of-normals construction") {
  // two construction paths for BES_1 with integer d = 3
  const ProcessModel p = ProcessModel::bessel(3.0);
  const int n = 100000;
  std::vector<double> a(n), b(n);
  for (int i = 0; i < n; ++i) {
    a[i] = p.sample_y1(derive_seed(16, {static_cast<std::uint64_t>(i)}));
    CounterRng rng(derive_seed(17, {static_cast<std::uint64_t>(i)}));
    double ss = 0.0;
    for (int k = 0; k < 3; ++k) {
      const double z = rng.next_normal();
      ss += z * z;
    }
    b[i] = std::sqrt(ss);
  }
  CHECK(stats::two_sample_ks(a, b) <= 0.01);
}

TEST_CASE("stopped density against a simulation histogram") {
  const ProcessModel p = ProcessModel::bessel(1.0);
  const StoppingTimeModel t_model = StoppingTimeModel::exponential(1.0);
  const double at = 1.0, width = 0.05;
  const double dens = stopped_density(
      p, [&](double t) { return t_model.density(t); }, at, 1e-8);

  const int n = 1000000;
  int hits = 0;
  for (int i = 0; i < n; ++i) {
    const std::uint64_t rep = derive_seed(18, {static_cast<std::uint64_t>(i)});
    const double t = t_model.sample(derive_seed(rep, {0}));
    const double x = p.sample_stopped(t, derive_seed(rep, {1}));
    if (std::abs(x - at) <= width / 2.0) ++hits;
  }
  const double p_hat = static_cast<double>(hits) / n;
  const double se = std::sqrt(p_hat * (1.0 - p_hat) / n);
  CHECK(std::abs(dens * width - p_hat) <= 3.0 * se + 1e-4 * width);
}

TEST_CASE("stopped density vanishes far out and integrates to one") {
  const std::vector<ProcessModel> procs = {ProcessModel::bessel(5.0),
                                           ProcessModel::gaussian_ss(0.5),
                                           ProcessModel::gamma_ss(1.0, 2.0)};
  const std::vector<StoppingTimeModel> times = {
      StoppingTimeModel::gamma(2.0, 1.0), StoppingTimeModel::exponential(1.0),
      StoppingTimeModel::weibull(2.0, 1.0),
      StoppingTimeModel::lognormal(0.0, 1.0),
      StoppingTimeModel::inverse_gaussian(1.0, 1.0),
      StoppingTimeModel::beta(2.0, 3.0)};

  for (const auto& p : procs)
    CHECK(stopped_density(
              p, [&](double t) { return times[0].density(t); }, 60.0, 1e-10) <
          1e-8);

  quad::Options opt;
  opt.abs_tol = 5e-8;
  opt.rel_tol = 1e-7;
  for (const auto& p : procs) {
    for (const auto& tm : times) {
      auto dens = [&](double y) {
        return stopped_density(
            p, [&](double t) { return tm.density(t); }, y, 1e-10);
      };
      const quad::Result mass = quad::integrate_positive_axis(dens, opt, 2.0);
      CHECK(mass.value == doctest::Approx(1.0).epsilon(1e-6));
    }
  }
}

TEST_SUITE_END();
