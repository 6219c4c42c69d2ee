#include <doctest.h>

#include <cmath>
#include <vector>

#include "mellinstop/rng.hpp"
#include "mellinstop/sampling.hpp"

using namespace mellinstop;

TEST_SUITE_BEGIN("rng");

TEST_CASE("streams are pure functions of the seed") {
  CounterRng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

  CounterRng c(42), d(43);
  bool all_equal = true;
  for (int i = 0; i < 10; ++i) all_equal &= (c.next_u64() == d.next_u64());
  CHECK(!all_equal);
}

TEST_CASE("derive_seed separates ids") {
  const std::uint64_t s1 = derive_seed(7, {1, 2, 3});
  const std::uint64_t s2 = derive_seed(7, {1, 2, 4});
  const std::uint64_t s3 = derive_seed(7, {1, 3, 2});
  CHECK(s1 != s2);
  CHECK(s1 != s3);
  CHECK(s1 == derive_seed(7, {1, 2, 3}));
}

TEST_CASE("unit draws live strictly inside (0,1)") {
  CounterRng rng(9001);
  double lo = 1.0, hi = 0.0, acc = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.next_unit();
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    acc += u;
  }
  CHECK(lo > 0.0);
  CHECK(hi < 1.0);
  CHECK(acc / n == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("normal moments") {
  CounterRng rng(314159);
  const int n = 200000;
  double m1 = 0.0, m2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.next_normal();
    m1 += z;
    m2 += z * z;
  }
  m1 /= n;
  m2 /= n;
  CHECK(std::abs(m1) < 4.0 / std::sqrt(double(n)));
  CHECK(m2 == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("gamma_draw matches mean/variance") {
  const double shape = 2.7;
  const int n = 100000;
  double m1 = 0.0, m2 = 0.0;
  for (int i = 0; i < n; ++i) {
    CounterRng rng(derive_seed(555, {static_cast<std::uint64_t>(i)}));
    const double g = sampling::gamma_draw(rng, shape);
    m1 += g;
    m2 += g * g;
  }
  m1 /= n;
  m2 = m2 / n - m1 * m1;
  CHECK(m1 == doctest::Approx(shape).epsilon(0.02));
  CHECK(m2 == doctest::Approx(shape).epsilon(0.05));
}

TEST_SUITE_END();
