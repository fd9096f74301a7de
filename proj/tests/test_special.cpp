#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lbs/special.hpp"

using namespace lbs::special;

TEST_CASE("normal cdf matches tabulated values") {
  CHECK(norm_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(norm_cdf(1.0) == doctest::Approx(0.841344746068543).epsilon(1e-14));
  CHECK(norm_cdf(2.0) == doctest::Approx(0.977249868051821).epsilon(1e-14));
  CHECK(norm_cdf(-1.959963984540054) == doctest::Approx(0.025).epsilon(1e-13));
  CHECK(norm_ccdf(3.0) == doctest::Approx(1.0 - norm_cdf(3.0)).epsilon(1e-12));
}

TEST_CASE("normal quantile inverts the cdf") {
  CHECK(norm_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-14));
  CHECK(norm_quantile(0.5) == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
  for (double p : {1e-12, 1e-6, 0.01, 0.3, 0.5, 0.77, 0.999, 1.0 - 1e-10}) {
    CHECK(norm_cdf(norm_quantile(p)) == doctest::Approx(p).epsilon(1e-12));
  }
  CHECK_THROWS_AS((void)norm_quantile(0.0), std::domain_error);
  CHECK_THROWS_AS((void)norm_quantile(1.0), std::domain_error);
}

TEST_CASE("log of the upper tail stays accurate past erfc underflow") {
  for (double x : {0.0, 1.0, 5.0, 20.0, 35.0}) {
    CHECK(log_norm_ccdf(x) == doctest::Approx(std::log(norm_ccdf(x))).epsilon(1e-13));
  }
  // Reference values from 50-digit arithmetic.
  CHECK(log_norm_ccdf(40.0) == doctest::Approx(-804.60844201375379).epsilon(1e-13));
  CHECK(log_norm_ccdf(100.0) == doctest::Approx(-5005.5242086942051).epsilon(1e-13));
  CHECK(std::isfinite(log_norm_ccdf(1e4)));
}

TEST_CASE("incomplete gamma against closed forms") {
  // Shape 1: P(1, x) = 1 - exp(-x).
  for (double x : {0.1, 1.0, 3.5, 10.0}) {
    CHECK(gamma_p(1.0, x) == doctest::Approx(-std::expm1(-x)).epsilon(1e-14));
  }
  // Shape 1/2: P(1/2, x) = erf(sqrt(x)).
  for (double x : {0.2, 1.0, 4.0}) {
    CHECK(gamma_p(0.5, x) == doctest::Approx(std::erf(std::sqrt(x))).epsilon(1e-14));
  }
  // Shape 3/2: P(3/2, x) = erf(sqrt(x)) - 2 sqrt(x/pi) exp(-x).
  for (double x : {0.2, 1.0, 4.0, 9.0}) {
    const double expected =
        std::erf(std::sqrt(x)) - 2.0 * std::sqrt(x / M_PI) * std::exp(-x);
    CHECK(gamma_p(1.5, x) == doctest::Approx(expected).epsilon(1e-13));
  }
  // Integer shape 5: complement is the Poisson tail sum.
  const double x = 7.3;
  double poisson = 0.0, term = std::exp(-x);
  for (int k = 0; k < 5; ++k) {
    poisson += term;
    term *= x / (k + 1);
  }
  CHECK(gamma_q(5.0, x) == doctest::Approx(poisson).epsilon(1e-13));

  CHECK(gamma_p(2.0, 0.0) == 0.0);
  CHECK(gamma_q(2.0, 0.0) == 1.0);
  CHECK(gamma_p(0.5, 500.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS((void)gamma_p(-1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS((void)gamma_p(1.0, -1.0), std::domain_error);
}

TEST_CASE("p and q are complements") {
  for (double a : {0.5, 1.5, 4.0, 20.0}) {
    for (double x : {0.01, 0.5, 2.0, 8.0, 50.0}) {
      CHECK(gamma_p(a, x) + gamma_q(a, x) == doctest::Approx(1.0).epsilon(1e-13));
    }
  }
}
