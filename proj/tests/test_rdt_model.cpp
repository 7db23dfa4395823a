#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "tumorage/errors.hpp"
#include "tumorage/rdt_model.hpp"

using namespace tumorage;

namespace {

std::vector<double> draw(const RdtMixture& model, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> out(n);
  for (auto& x : out) x = model.sample(rng);
  return out;
}

}  // namespace

TEST_CASE("default model parameters") {
  const auto m = default_model();
  CHECK(m == RdtMixture{0.35, 0.79, 5.0});
  CHECK(m.cdf(0.0) == 0.35);
  CHECK(m.mean() == doctest::Approx(0.752784810126582).epsilon(1e-14));
}

TEST_CASE("default model mean agrees with a Monte Carlo average") {
  const auto m = default_model();
  const auto xs = draw(m, 1'000'000, 11);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double x : xs) {
    sum += x;
    sum_sq += x * x;
  }
  const double n = static_cast<double>(xs.size());
  const double mean = sum / n;
  const double se = std::sqrt((sum_sq / n - mean * mean) / n);
  CHECK(std::abs(mean - 0.752784810126582) < 4.0 * se);
}

TEST_CASE("cdf examples and limits") {
  const auto m = default_model();
  CHECK(m.cdf(std::numbers::ln2 / 0.79) == doctest::Approx(0.675).epsilon(1e-14));
  CHECK(m.cdf(1e6) == 1.0);
  CHECK(m.cdf(-20.0) < 1e-10);
  CHECK(1.0 - m.cdf(40.0) < 1e-10);
  CHECK(m.cdf(-1e-15) == doctest::Approx(0.35).epsilon(1e-12));
  CHECK_THROWS_AS(m.cdf(std::nan("")), DomainError);
}

TEST_CASE("cdf is nondecreasing") {
  const auto m = default_model();
  double previous = 0.0;
  for (double x = -25.0; x <= 45.0; x += 0.001) {
    const double f = m.cdf(x);
    CHECK(f >= previous);
    previous = f;
  }
}

TEST_CASE("quantile examples") {
  const auto m = default_model();
  CHECK(m.quantile(0.35) == 0.0);
  CHECK(m.quantile(0.675) == doctest::Approx(0.877401494379678).epsilon(1e-13));
  CHECK(m.quantile(0.175) == doctest::Approx(-0.138629436111989).epsilon(1e-13));
  CHECK(m.cdf(m.quantile(0.175)) == doctest::Approx(0.175).epsilon(1e-14));
}

TEST_CASE("cdf(quantile(u)) == u on a 999-point grid") {
  const auto m = default_model();
  for (int i = 1; i <= 999; ++i) {
    const double u = i / 1000.0;
    CHECK(std::abs(m.cdf(m.quantile(u)) - u) < 1e-10);
  }
}

TEST_CASE("quantile rejects u outside (0, 1)") {
  const auto m = default_model();
  CHECK_THROWS_AS(m.quantile(0.0), DomainError);
  CHECK_THROWS_AS(m.quantile(1.0), DomainError);
  CHECK_THROWS_AS(m.quantile(1.5), DomainError);
}

TEST_CASE("sampling statistics") {
  const auto m = default_model();
  const auto xs = draw(m, 1'000'000, 3);
  std::size_t negatives = 0;
  double positive_sum = 0.0;
  for (double x : xs) {
    if (x < 0.0) {
      ++negatives;
    } else {
      positive_sum += x;
    }
  }
  const double n = static_cast<double>(xs.size());
  CHECK(std::abs(negatives / n - 0.35) < 3.0 * std::sqrt(0.35 * 0.65 / n));
  const double n_pos = n - static_cast<double>(negatives);
  // Exponential standard deviation equals its mean.
  CHECK(std::abs(positive_sum / n_pos - 1.0 / 0.79) < 3.0 * (1.0 / 0.79) / std::sqrt(n_pos));
  CHECK(draw(m, 1000, 5) == draw(m, 1000, 5));
}

TEST_CASE("fit: direct MLE arithmetic") {
  const std::vector<double> xs = {-0.2, -0.2, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
  const auto m = fit(xs);
  CHECK(m.p_negative == doctest::Approx(0.25));
  CHECK(m.lambda_pos == doctest::Approx(1.0));
  CHECK(m.lambda_neg == doctest::Approx(5.0));
}

TEST_CASE("fit: zero counts as positive") {
  const std::vector<double> xs = {-1.0, -1.0, 0.0, 2.0};
  const auto m = fit(xs);
  CHECK(m.p_negative == doctest::Approx(0.5));
  CHECK(m.lambda_pos == doctest::Approx(1.0));
  CHECK(m.lambda_neg == doctest::Approx(1.0));
}

TEST_CASE("fit: insufficient data") {
  CHECK_THROWS_AS(fit(std::vector<double>{1.0, 2.0, 3.0}), InsufficientDataError);
  CHECK_THROWS_AS(fit(std::vector<double>{-0.2, 1.0, 1.0, 1.0}), InsufficientDataError);
  CHECK_THROWS_AS(fit(std::vector<double>{}), InsufficientDataError);
  CHECK_THROWS_AS(fit(std::vector<double>{-1.0, -2.0, 0.0, 0.0}), InsufficientDataError);
}

TEST_CASE("fit recovers parameters from synthetic samples") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto m = fit(draw(default_model(), 100'000, seed));
    CHECK(std::abs(m.p_negative - 0.35) <= 0.01);
    CHECK(std::abs(m.lambda_pos / 0.79 - 1.0) <= 0.03);
    CHECK(std::abs(m.lambda_neg / 5.0 - 1.0) <= 0.06);
  }
}

TEST_CASE("ks_distance") {
  const auto m = default_model();
  CHECK(ks_distance(m, draw(m, 1'000'000, 17)) < 0.005);
  CHECK(ks_distance(m, std::vector<double>{0.0}) == doctest::Approx(0.65));
  CHECK_THROWS_AS(ks_distance(m, std::vector<double>{}), DomainError);
  // A shifted model is clearly rejected.
  CHECK(ks_distance(RdtMixture{0.2, 0.79, 5.0}, draw(m, 100'000, 19)) > 0.1);
}

TEST_CASE("read_rdt_csv") {
  std::istringstream good("rdt\n0.5\n-0.25\n\n1e-1\r\n");
  CHECK(read_rdt_csv(good) == std::vector<double>{0.5, -0.25, 0.1});

  std::istringstream header_only("rdt\n");
  CHECK(read_rdt_csv(header_only).empty());

  std::istringstream empty("");
  CHECK_THROWS_AS(read_rdt_csv(empty), ParseError);

  std::istringstream bad_header("x\n1\n");
  CHECK_THROWS_AS(read_rdt_csv(bad_header), ParseError);

  std::istringstream bad_rows("rdt\n1.0\nabc\n2.0\n3,4\n");
  try {
    read_rdt_csv(bad_rows);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("3, 5") != std::string::npos);
  }
}
