#include <doctest.h>

#include <cmath>
#include <set>

#include "tumorage/errors.hpp"
#include "tumorage/normal.hpp"
#include "tumorage/random.hpp"

using namespace tumorage;

TEST_CASE("normal_cdf reference values") {
  // Reference values from mpmath (0.5 * erfc(-x / sqrt 2)).
  CHECK(normal_cdf(0.0) == 0.5);
  CHECK(normal_cdf(1.0) == doctest::Approx(0.841344746068542948585).epsilon(1e-14));
  CHECK(normal_cdf(-1.959963984540054) == doctest::Approx(0.025).epsilon(1e-13));
  CHECK(normal_cdf(-8.0) == doctest::Approx(6.22096057427178e-16).epsilon(1e-10));
}

TEST_CASE("normal_quantile inverts normal_cdf across the unit interval") {
  for (int i = 1; i < 10000; ++i) {
    const double u = i / 10000.0;
    CHECK(std::abs(normal_cdf(normal_quantile(u)) - u) < 1e-14);
  }
  for (double u : {1e-300, 1e-100, 1e-20, 1e-10, 1e-5}) {
    CHECK(normal_cdf(normal_quantile(u)) == doctest::Approx(u).epsilon(1e-12));
  }
  // 1 - u is inexact, so the mirrored quantile only agrees to the rounding of 1 - u.
  for (double u : {1e-10, 1e-5, 0.01}) {
    CHECK(normal_quantile(1.0 - u) == doctest::Approx(-normal_quantile(u)).epsilon(1e-6));
  }
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-15));
  CHECK(normal_quantile(0.5) == 0.0);
}

TEST_CASE("normal_quantile rejects probabilities outside (0, 1)") {
  CHECK_THROWS_AS(normal_quantile(0.0), DomainError);
  CHECK_THROWS_AS(normal_quantile(1.0), DomainError);
  CHECK_THROWS_AS(normal_quantile(-0.1), DomainError);
  CHECK_THROWS_AS(normal_quantile(std::nan("")), DomainError);
}

TEST_CASE("uniform_open01 never hits the endpoints and is reproducible") {
  Rng a(7);
  Rng b(7);
  for (int i = 0; i < 100000; ++i) {
    const double u = uniform_open01(a);
    CHECK(u > 0.0);
    CHECK(u < 1.0);
    CHECK(u == uniform_open01(b));
  }
}

TEST_CASE("derive_seed gives distinct streams") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t seed : {0ULL, 1ULL, 42ULL}) {
    for (std::uint64_t k = 0; k < 1000; ++k) seen.insert(derive_seed(seed, k));
  }
  CHECK(seen.size() == 3000);
  CHECK(derive_seed(42, 3) == derive_seed(42, 3));
}
