#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lbs/distribution.hpp"
#include "lbs/rng.hpp"
#include "lbs/shape.hpp"

using lbs::LbsParams;

namespace {

double eval_cubic(const std::array<double, 4>& c, double t) {
  return ((c[0] * t + c[1]) * t + c[2]) * t + c[3];
}

}  // namespace

TEST_CASE("cubic coefficients collapse at alpha = 1 and factor correctly") {
  const auto c = lbs::cubic_coefficients(LbsParams(1.0, 1.0));
  CHECK(c[0] == 1.0);
  CHECK(c[1] == 0.0);
  CHECK(c[2] == 0.0);
  CHECK(c[3] == -1.0);

  lbs::RngStream rng(3);
  for (int i = 0; i < 200; ++i) {
    const double alpha = 0.2 + 4.0 * rng.uniform();
    const double theta = 0.2 + 5.0 * rng.uniform();
    const LbsParams p(alpha, theta);
    const auto coef = lbs::cubic_coefficients(p);
    // theta is always a critical point.
    CHECK(eval_cubic(coef, theta) ==
          doctest::Approx(0.0).scale(theta * theta * theta).epsilon(1e-12));
    // (t - theta)(t^2 - theta(alpha^2-2) t + theta^2) expands to the same cubic.
    const double t = theta * (0.3 + 3.0 * rng.uniform());
    const double factored =
        (t - theta) * (t * t - theta * (alpha * alpha - 2.0) * t + theta * theta);
    CHECK(eval_cubic(coef, t) == doctest::Approx(factored).epsilon(1e-12));
  }
}

TEST_CASE("classification at the alpha = 2 boundary and the frozen cases") {
  const lbs::ModeReport at2 = lbs::classify_modes(LbsParams(2.0, 5.0));
  CHECK(at2.kind == lbs::ModeKind::Unimodal);
  CHECK(at2.mode == doctest::Approx(5.0));
  CHECK(at2.discriminant == doctest::Approx(0.0).scale(1.0));

  const lbs::ModeReport at3 = lbs::classify_modes(LbsParams(3.0, 1.0));
  CHECK(at3.kind == lbs::ModeKind::Bimodal);
  CHECK(at3.upper_mode == doctest::Approx((7.0 + 3.0 * std::sqrt(5.0)) / 2.0).epsilon(1e-14));
  CHECK(at3.lower_mode == doctest::Approx((7.0 - 3.0 * std::sqrt(5.0)) / 2.0).epsilon(1e-12));
  CHECK(at3.antimode == doctest::Approx(1.0));
  CHECK(at3.upper_mode * at3.lower_mode == doctest::Approx(1.0).epsilon(1e-12));

  const lbs::ModeReport at1 = lbs::classify_modes(LbsParams(1.0, 1.0));
  CHECK(at1.kind == lbs::ModeKind::Unimodal);
  CHECK(at1.discriminant == doctest::Approx(-27.0).epsilon(1e-14));
}

TEST_CASE("unimodal mode matches the numeric argmax of the density") {
  lbs::RngStream rng(5);
  for (int i = 0; i < 200; ++i) {
    const double alpha = 0.2 + 1.8 * rng.uniform();
    const double theta = 0.2 + 5.0 * rng.uniform();
    const LbsParams p(alpha, theta);
    // Coarse-to-fine argmax around the reported mode.
    double best_t = theta * 0.5, best_f = lbs::pdf(p, best_t);
    for (double step : {0.1, 0.01, 0.001, 1e-4, 1e-5}) {
      const double center = best_t;
      for (int k = -12; k <= 12; ++k) {
        const double t = center * (1.0 + step * k);
        if (t <= 0.0) continue;
        const double f = lbs::pdf(p, t);
        if (f > best_f) {
          best_f = f;
          best_t = t;
        }
      }
    }
    CHECK(best_t == doctest::Approx(theta).epsilon(1e-4));
  }
}

TEST_CASE("bimodal roots are local maxima and the antimode a local minimum") {
  lbs::RngStream rng(7);
  for (int i = 0; i < 200; ++i) {
    const double alpha = 2.05 + 2.0 * rng.uniform();
    const double theta = 0.2 + 5.0 * rng.uniform();
    const LbsParams p(alpha, theta);
    const lbs::ModeReport report = lbs::classify_modes(p);
    REQUIRE(report.kind == lbs::ModeKind::Bimodal);
    CHECK(report.lower_mode < report.antimode);
    CHECK(report.antimode < report.upper_mode);
    CHECK(report.lower_mode * report.upper_mode ==
          doctest::Approx(theta * theta).epsilon(1e-10));
    CHECK(report.lower_mode + report.upper_mode ==
          doctest::Approx(theta * (alpha * alpha - 2.0)).epsilon(1e-10));
    for (double mode : {report.lower_mode, report.upper_mode}) {
      const double f = lbs::pdf(p, mode);
      CHECK(f > lbs::pdf(p, mode * (1.0 + 1e-4)));
      CHECK(f > lbs::pdf(p, mode * (1.0 - 1e-4)));
    }
    const double fmin = lbs::pdf(p, report.antimode);
    CHECK(fmin < lbs::pdf(p, report.antimode * (1.0 + 1e-4)));
    CHECK(fmin < lbs::pdf(p, report.antimode * (1.0 - 1e-4)));

    // All three roots annihilate the cubic (relative to theta^3 scale).
    const auto c = lbs::cubic_coefficients(p);
    const double th3 = theta * theta * theta;
    const double a6 = std::pow(alpha, 6.0);
    CHECK(std::fabs(eval_cubic(c, report.lower_mode)) < 1e-9 * th3 * (1.0 + a6));
    CHECK(std::fabs(eval_cubic(c, report.antimode)) < 1e-9 * th3);
    CHECK(std::fabs(eval_cubic(c, report.upper_mode)) < 1e-9 * th3 * (1.0 + a6));
  }
}

TEST_CASE("derivatives of a(t)") {
  const LbsParams p(0.8, 1.7);
  CHECK(lbs::a_derivative(p, p.theta, 0) == doctest::Approx(0.0).scale(1.0));
  lbs::RngStream rng(11);
  for (int i = 0; i < 100; ++i) {
    const double t = p.theta * std::exp(2.0 * (2.0 * rng.uniform() - 1.0));
    CHECK(lbs::a_derivative(p, t, 1) > 0.0);
    CHECK(lbs::a_derivative(p, t, 2) < 0.0);
    CHECK(lbs::a_derivative(p, t, 3) > 0.0);
    const double h = 1e-6 * t;
    const double fd =
        (lbs::a_derivative(p, t + h, 0) - lbs::a_derivative(p, t - h, 0)) / (2.0 * h);
    CHECK(lbs::a_derivative(p, t, 1) == doctest::Approx(fd).epsilon(1e-6));
    const double fd2 =
        (lbs::a_derivative(p, t + h, 1) - lbs::a_derivative(p, t - h, 1)) / (2.0 * h);
    CHECK(lbs::a_derivative(p, t, 2) == doctest::Approx(fd2).epsilon(1e-6));
  }
  CHECK_THROWS_AS((void)lbs::a_derivative(p, 1.0, 4), std::domain_error);
  CHECK_THROWS_AS((void)lbs::a_derivative(p, 0.0, 0), std::domain_error);
}

TEST_CASE("hazard shape scan") {
  // alpha <= 2: increasing everywhere in the scan window.
  const lbs::HazardShapeReport flat =
      lbs::hazard_shape(LbsParams(1.0, 1.0), 0.01, 1.0, 64);
  REQUIRE(flat.increasing.size() == 1);
  CHECK(flat.decreasing.empty());
  CHECK(flat.turning_points.empty());

  // alpha = 3: increasing, then a decreasing stretch, then increasing again;
  // turning points pinned by 60-digit bisection of the hazard derivative.
  const lbs::HazardShapeReport bimodal =
      lbs::hazard_shape(LbsParams(3.0, 1.0), 0.01, 10.0, 256);
  REQUIRE(bimodal.turning_points.size() == 2);
  CHECK(bimodal.turning_points[0] == doctest::Approx(0.1480836714).epsilon(1e-4));
  CHECK(bimodal.turning_points[1] == doctest::Approx(0.8574877279).epsilon(1e-4));
  REQUIRE(bimodal.increasing.size() == 2);
  REQUIRE(bimodal.decreasing.size() == 1);
  // Increasing somewhere in (theta, t+), per the bimodal-case proposition.
  CHECK(bimodal.increasing.back().first < 6.854);
  CHECK(bimodal.increasing.back().second == doctest::Approx(10.0));
  // Intervals are ordered and alternate.
  CHECK(bimodal.increasing[0].second == doctest::Approx(bimodal.decreasing[0].first));
  CHECK(bimodal.decreasing[0].second == doctest::Approx(bimodal.increasing[1].first));

  CHECK_THROWS_AS((void)lbs::hazard_shape(LbsParams(1, 1), 1.0, 1.0, 64), std::domain_error);
  CHECK_THROWS_AS((void)lbs::hazard_shape(LbsParams(1, 1), 0.1, 1.0, 8), std::domain_error);
}
