#include <doctest.h>

#include <cmath>
#include <vector>

#include "mellinstop/mellin.hpp"
#include "mellinstop/processes.hpp"
#include "mellinstop/rng.hpp"
#include "mellinstop/stopping_times.hpp"

using namespace mellinstop;

namespace {

DensityWithMellin uniform01() {
  return DensityWithMellin{
      [](double x) { return (x > 0.0 && x < 1.0) ? 1.0 : 0.0; },
      MellinFunction{MellinStrip{0.0}, MellinKind::Analytic,
                     [](Complex s) { return 1.0 / s; }}};
}

}  // namespace

TEST_SUITE_BEGIN("mellin");

TEST_CASE("gamma-density transform examples") {
  CHECK(mellin_of_gamma_density(2.0, 1.0, Complex(1.0, 0.0)).real() ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mellin_of_gamma_density(2.0, 1.0, Complex(2.0, 0.0)).real() ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(mellin_of_gamma_density(1.0, 2.0, Complex(3.0, 0.0)).real() ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_AS(mellin_of_gamma_density(2.0, 1.0, Complex(-1.5, 0.0)),
                  strip_error);
}

TEST_CASE("bessel-marginal transform examples") {
  CHECK(mellin_of_bessel_marginal(5.0, Complex(1.0, 0.0)).real() ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mellin_of_bessel_marginal(1.0, Complex(2.0, 0.0)).real() ==
        doctest::Approx(std::sqrt(2.0 / kPi)).epsilon(1e-12));
  CHECK(mellin_of_bessel_marginal(2.0, Complex(3.0, 0.0)).real() ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(mellin_of_bessel_marginal(1.0, Complex(-0.5, 3.0)),
                  strip_error);
}

TEST_CASE("empirical transform is an exact finite sum") {
  const SampleBatch b124 = SampleBatch::from_values({1.0, 2.0, 4.0});
  CHECK(empirical_mellin(b124, Complex(3.0, 0.0)).real() ==
        doctest::Approx(7.0).epsilon(1e-15));

  const SampleBatch ones = SampleBatch::from_values({1.0, 1.0, 1.0});
  CHECK(empirical_mellin(ones, Complex(2.7, 13.9)).real() ==
        doctest::Approx(1.0));
  CHECK(std::abs(empirical_mellin(ones, Complex(2.7, 13.9)).imag()) < 1e-15);

  const SampleBatch two = SampleBatch::from_values({2.0});
  const Complex v = empirical_mellin(two, Complex(1.0, 1.0));
  CHECK(v.real() == doctest::Approx(std::cos(std::log(2.0))).epsilon(1e-14));
  CHECK(v.imag() == doctest::Approx(std::sin(std::log(2.0))).epsilon(1e-14));

  CHECK_THROWS_AS(SampleBatch::from_values({}), std::invalid_argument);
  CHECK_THROWS_AS(SampleBatch::from_values({1.0, -2.0}),
                  std::invalid_argument);
}

TEST_CASE("numeric transform against closed forms") {
  const StoppingTimeModel g21 = StoppingTimeModel::gamma(2.0, 1.0);
  const Complex m1 = mellin_numeric([&](double x) { return g21.density(x); },
                                    MellinStrip{-1.0}, Complex(2.0, 0.0),
                                    1e-9);
  CHECK(m1.real() == doctest::Approx(2.0).epsilon(1e-8));

  const Complex m2 = mellin_numeric(
      [](double x) { return (x > 0.0 && x < 1.0) ? 1.0 : 0.0; },
      MellinStrip{0.0}, Complex(3.0, 0.0), 1e-10);
  CHECK(m2.real() == doctest::Approx(1.0 / 3.0).epsilon(1e-8));

  const StoppingTimeModel ln01 = StoppingTimeModel::lognormal(0.0, 1.0);
  const Complex m3 = mellin_numeric([&](double x) { return ln01.density(x); },
                                    ln01.strip(), Complex(2.0, 0.0), 1e-8);
  CHECK(m3.real() == doctest::Approx(std::exp(0.5)).epsilon(1e-7));
}

TEST_CASE("inversion round trip on the gamma(2,1) family") {
  const StoppingTimeModel g21 = StoppingTimeModel::gamma(2.0, 1.0);
  const MellinFunction mf = g21.mellin_function();
  CHECK(mellin_invert(mf, 1.5, 1.0, 60.0) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-6));
  CHECK(mellin_invert(mf, 1.5, 3.0, 60.0) ==
        doctest::Approx(3.0 * std::exp(-3.0)).epsilon(1e-5));
  CHECK(mellin_invert(mf, 1.5, 1.0, 0.0) == 0.0);
}

TEST_CASE("inversion flags a non-symmetric transform") {
  // a transform with a deliberately broken conjugate symmetry
  const MellinFunction broken{
      MellinStrip{0.0}, MellinKind::Analytic, [](Complex s) {
        return mellin_of_gamma_density(2.0, 1.0, s) +
               Complex(0.0, 0.1) * s.imag() * std::exp(-std::abs(s.imag()));
      }};
  CHECK_THROWS_AS(mellin_invert(broken, 1.5, 2.0, 40.0), symmetry_error);
}

TEST_CASE("inversion round-trip sup error over families") {
  const std::vector<StoppingTimeModel> models = {
      StoppingTimeModel::gamma(2.0, 1.0), StoppingTimeModel::weibull(2.0, 1.0),
      StoppingTimeModel::lognormal(0.0, 1.0)};
  for (const auto& model : models) {
    const MellinFunction mf = model.mellin_function();
    double worst = 0.0;
    for (int i = 0; i < 12; ++i) {
      const double x = 0.05 + (10.0 - 0.05) * i / 11.0;
      worst = std::max(worst,
                       std::abs(mellin_invert(mf, 1.5, x, 60.0) -
                                model.density(x)));
    }
    CHECK(worst <= 1e-5);
  }
}

TEST_CASE("mellin convolution of two uniforms") {
  auto u = [](double x) { return (x > 0.0 && x < 1.0) ? 1.0 : 0.0; };
  CHECK(mellin_convolve(u, u, 0.5, 1e-9) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-7));
  // supports make the integrand vanish
  CHECK(mellin_convolve(u, u, 3.0, 1e-9) == doctest::Approx(0.0));
}

TEST_CASE("mellin convolution against a Monte Carlo histogram") {
  // density of T*U at x = 1, T ~ Gamma(2,1), U ~ U(0,1)
  const StoppingTimeModel g21 = StoppingTimeModel::gamma(2.0, 1.0);
  const double conv = mellin_convolve(
      [&](double x) { return g21.density(x); },
      [](double x) { return (x > 0.0 && x < 1.0) ? 1.0 : 0.0; }, 1.0, 1e-9);

  const int n = 1000000;
  const double width = 0.05;
  int hits = 0;
  for (int i = 0; i < n; ++i) {
    CounterRng rng(derive_seed(2024, {static_cast<std::uint64_t>(i)}));
    const double t = g21.sample(rng.next_u64());
    const double prod = t * rng.next_unit();
    if (std::abs(prod - 1.0) <= width / 2.0) ++hits;
  }
  const double p_hat = static_cast<double>(hits) / n;
  const double se = std::sqrt(p_hat * (1.0 - p_hat) / n);
  CHECK(std::abs(conv * width - p_hat) <= 3.0 * se + 1e-4 * width);
}

TEST_CASE("parseval identity") {
  const DensityWithMellin g21 =
      StoppingTimeModel::gamma(2.0, 1.0).density_with_mellin();
  auto [lhs1, rhs1] = parseval_check(g21, g21, 1.5);
  CHECK(lhs1 == doctest::Approx(0.25).epsilon(1e-7));
  CHECK(std::abs(lhs1 - rhs1) <= 1e-6);

  const DensityWithMellin u = uniform01();
  auto [lhs2, rhs2] = parseval_check(u, u, 0.5);
  CHECK(lhs2 == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(std::abs(lhs2 - rhs2) <= 1e-6);

  const DensityWithMellin g31 =
      StoppingTimeModel::gamma(3.0, 1.0).density_with_mellin();
  const DensityWithMellin e1 =
      StoppingTimeModel::exponential(1.0).density_with_mellin();
  auto [lhs3, rhs3] = parseval_check(g31, e1, 1.5);
  CHECK(lhs3 == doctest::Approx(0.125).epsilon(1e-6));
  CHECK(std::abs(lhs3 - rhs3) <= 1e-6);
}

TEST_CASE("product rule under the scaling identity (Monte Carlo)") {
  const ProcessModel bes = ProcessModel::bessel(5.0);
  const StoppingTimeModel g21 = StoppingTimeModel::gamma(2.0, 1.0);
  const int n = 100000;
  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i) {
    const std::uint64_t rep = derive_seed(7042, {static_cast<std::uint64_t>(i)});
    const double t = g21.sample(derive_seed(rep, {0}));
    xs[i] = bes.sample_stopped(t, derive_seed(rep, {1}));
  }
  const SampleBatch batch = SampleBatch::from_values(std::move(xs));
  for (double s : {1.3, 1.7, 2.0}) {
    const double expected =
        (g21.mellin(Complex((s + 1.0) / 2.0, 0.0)) *
         mellin_of_bessel_marginal(5.0, Complex(s, 0.0)))
            .real();
    const double got = empirical_mellin(batch, Complex(s, 0.0)).real();
    // Monte Carlo standard error of the empirical transform at real s
    double var = 0.0;
    for (double x : batch.values()) {
      const double term = std::pow(x, s - 1.0) - got;
      var += term * term;
    }
    const double se = std::sqrt(var / n / n);
    CHECK(std::abs(got - expected) <= 4.0 * se);
  }
}

TEST_CASE("empirical transform is unbiased (replicated means)") {
  const StoppingTimeModel g21 = StoppingTimeModel::gamma(2.0, 1.0);
  const Complex s(1.8, 0.0);
  const double expected = g21.mellin(s).real();
  const int reps = 500, n = 200;
  std::vector<double> means(reps);
  for (int r = 0; r < reps; ++r) {
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i)
      xs[i] = g21.sample(derive_seed(31337, {static_cast<std::uint64_t>(r),
                                             static_cast<std::uint64_t>(i)}));
    means[r] = empirical_mellin(SampleBatch::from_values(std::move(xs)), s)
                   .real();
  }
  double m = 0.0;
  for (double v : means) m += v;
  m /= reps;
  double var = 0.0;
  for (double v : means) var += (v - m) * (v - m);
  const double se = std::sqrt(var / (reps - 1.0) / reps);
  CHECK(std::abs(m - expected) <= 4.0 * se);
}

TEST_CASE("conjugate symmetry of built-in transforms at random strip points") {
  CounterRng rng(0xFEEDull);
  const std::vector<MellinFunction> mfs = {
      StoppingTimeModel::gamma(2.0, 1.0).mellin_function(),
      StoppingTimeModel::weibull(1.5, 2.0).mellin_function(),
      StoppingTimeModel::lognormal(0.3, 0.8).mellin_function(),
      ProcessModel::bessel(3.5).marginal_mellin_function()};
  for (const MellinFunction& mf : mfs) {
    for (int i = 0; i < 100; ++i) {
      const double lo = std::max(mf.strip.a, -4.0);
      const double hi = std::min(mf.strip.b, 6.0);
      const double re = lo + (hi - lo) * (0.05 + 0.9 * rng.next_unit());
      const double im = -30.0 + 60.0 * rng.next_unit();
      const Complex a = mf(Complex(re, im));
      const Complex b = std::conj(mf(Complex(re, -im)));
      CHECK(std::abs(a - b) <= 1e-10 * (1.0 + std::abs(a)));
    }
  }
}

TEST_CASE("built-in transforms are normalized at s = 1") {
  const std::vector<MellinFunction> mfs = {
      StoppingTimeModel::gamma(2.0, 1.0).mellin_function(),
      StoppingTimeModel::exponential(1.3).mellin_function(),
      StoppingTimeModel::weibull(2.0, 1.0).mellin_function(),
      StoppingTimeModel::lognormal(0.0, 1.0).mellin_function(),
      StoppingTimeModel::inverse_gaussian(1.0, 1.0).mellin_function(),
      StoppingTimeModel::beta(2.0, 3.0).mellin_function(),
      ProcessModel::bessel(5.0).marginal_mellin_function(),
      ProcessModel::gaussian_ss(0.5).marginal_mellin_function(),
      ProcessModel::gamma_ss(1.0, 2.0).marginal_mellin_function()};
  for (const MellinFunction& mf : mfs) {
    const Complex v = mf(Complex(1.0, 0.0));
    CHECK(v.real() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(v.imag()) < 1e-10);
  }
}

TEST_SUITE_END();
