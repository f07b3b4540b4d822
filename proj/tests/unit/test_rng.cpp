#include <cmath>
#include <set>

#include "amc/rng.hpp"
#include "doctest.h"

TEST_CASE("same seed gives the same stream") {
  amc::Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) CHECK(a.next() == b.next());
}

TEST_CASE("uniform lies in [0, 1) with mean 1/2") {
  amc::Rng r(7);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = r.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(sum / 100000.0 == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("normal has zero mean and unit variance") {
  amc::Rng r(11);
  const int n = 200000;
  double s1 = 0.0, s2 = 0.0, s4 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = r.normal();
    s1 += x;
    s2 += x * x;
    s4 += x * x * x * x;
  }
  CHECK(std::abs(s1 / n) < 0.01);
  CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.01));
  CHECK((s4 / n) / ((s2 / n) * (s2 / n)) == doctest::Approx(3.0).epsilon(0.03));
}

TEST_CASE("complex_normal splits the variance between I and Q") {
  amc::Rng r(3);
  double pi = 0.0, pq = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const auto z = r.complex_normal(2.0);
    pi += z.real() * z.real();
    pq += z.imag() * z.imag();
  }
  CHECK(pi / n == doctest::Approx(1.0).epsilon(0.02));
  CHECK(pq / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("below stays in range and hits every value") {
  amc::Rng r(5);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 1000; ++i) {
    const auto v = r.below(7);
    REQUIRE(v < 7);
    seen.insert(v);
  }
  CHECK(seen.size() == 7);
}

TEST_CASE("derive_seed separates paths") {
  CHECK(amc::derive_seed(1, {0}) != amc::derive_seed(1, {1}));
  CHECK(amc::derive_seed(1, {0, 1}) != amc::derive_seed(1, {1, 0}));
  CHECK(amc::derive_seed(1, {2, 3}) == amc::derive_seed(1, {2, 3}));
  CHECK(amc::hash_string("snr=10") != amc::hash_string("snr=15"));
}
