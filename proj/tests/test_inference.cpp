#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lbs/inference.hpp"
#include "lbs/sampling.hpp"
#include "lbs/special.hpp"

using lbs::BootstrapRun;
using lbs::IntervalEstimate;
using lbs::IntervalMethod;
using lbs::LbsParams;
using lbs::RegressionSpec;

namespace {

RegressionSpec simulate_spec(Eigen::Index n, lbs::RngStream& rng) {
  RegressionSpec spec;
  spec.X.resize(n, 2);
  spec.W.resize(n, 2);
  spec.t.resize(n);
  spec.X.col(0).setOnes();
  spec.W.col(0).setOnes();
  for (Eigen::Index i = 0; i < n; ++i) {
    spec.X(i, 1) = 2.0 * rng.uniform() - 1.0;
    spec.W(i, 1) = 2.0 * rng.uniform() - 1.0;
    const double theta = std::exp(1.0 - spec.X(i, 1));
    const double alpha = std::exp(-1.0 + 0.25 * spec.W(i, 1));
    spec.t[i] = lbs::sample_one(LbsParams(alpha, theta), rng);
  }
  return spec;
}

}  // namespace

TEST_CASE("type-7 quantiles reproduce hand-computed values") {
  const std::vector<double> replicas{10.0, 20.0, 30.0, 40.0, 50.0};
  // h = (n-1)p + 1: p=0.025 -> 1.1 -> 11; p=0.25 -> 2 -> 20; p=0.5 -> 30;
  // p=0.975 -> 4.9 -> 49.
  CHECK(lbs::quantile_type7(replicas, 0.025) == doctest::Approx(11.0).epsilon(1e-14));
  CHECK(lbs::quantile_type7(replicas, 0.25) == doctest::Approx(20.0).epsilon(1e-14));
  CHECK(lbs::quantile_type7(replicas, 0.5) == doctest::Approx(30.0).epsilon(1e-14));
  CHECK(lbs::quantile_type7(replicas, 0.975) == doctest::Approx(49.0).epsilon(1e-14));
  CHECK(lbs::quantile_type7(replicas, 0.0) == 10.0);
  CHECK(lbs::quantile_type7(replicas, 1.0) == 50.0);
  CHECK_THROWS_AS((void)lbs::quantile_type7({}, 0.5), std::invalid_argument);
}

TEST_CASE("aci uses z = 1.959964 at 95% and degenerates when the SE is zero") {
  lbs::FitResult fit;
  fit.delta.resize(2);
  fit.delta << 1.5, -0.5;
  fit.covariance = Eigen::MatrixXd::Zero(2, 2);
  fit.covariance(0, 0) = 0.04;  // SE 0.2
  fit.has_covariance = true;
  fit.converged = true;
  const auto intervals = lbs::aci(fit, 0.95);
  REQUIRE(intervals.size() == 2);
  CHECK(intervals[0].lower == doctest::Approx(1.5 - 1.959963984540054 * 0.2).epsilon(1e-12));
  CHECK(intervals[0].upper == doctest::Approx(1.5 + 1.959963984540054 * 0.2).epsilon(1e-12));
  CHECK(intervals[1].lower == intervals[1].upper);
  CHECK(intervals[1].lower == -0.5);

  lbs::FitResult bare;
  bare.delta = fit.delta;
  CHECK_THROWS_AS((void)lbs::aci(bare, 0.95), std::runtime_error);
  CHECK_THROWS_AS((void)lbs::aci(fit, 1.5), std::domain_error);
}

TEST_CASE("level nesting: the 99% ACI contains the 95% ACI") {
  lbs::FitResult fit;
  fit.delta.resize(1);
  fit.delta << 0.7;
  fit.covariance = Eigen::MatrixXd::Constant(1, 1, 0.09);
  fit.has_covariance = true;
  fit.converged = true;
  const auto narrow = lbs::aci(fit, 0.95);
  const auto wide = lbs::aci(fit, 0.99);
  CHECK(wide[0].lower < narrow[0].lower);
  CHECK(wide[0].upper > narrow[0].upper);
}

TEST_CASE("parametric bootstrap: determinism, emptiness, replica means") {
  lbs::RngStream rng(21);
  const RegressionSpec spec = simulate_spec(120, rng);
  const lbs::FitResult fit = lbs::fit(spec);
  REQUIRE(fit.converged);

  const BootstrapRun empty = lbs::parametric_bootstrap(spec, fit, 0, 9, 1);
  CHECK(empty.replicas.rows() == 0);
  CHECK(empty.failures == 0);

  const BootstrapRun a = lbs::parametric_bootstrap(spec, fit, 60, 1234, 1);
  const BootstrapRun b = lbs::parametric_bootstrap(spec, fit, 60, 1234, 2);
  CHECK(a.replicas.rows() + a.failures == 60);
  REQUIRE(a.replicas.rows() == b.replicas.rows());
  CHECK((a.replicas - b.replicas).cwiseAbs().maxCoeff() == 0.0);

  const BootstrapRun big = lbs::parametric_bootstrap(spec, fit, 500, 77, 2);
  REQUIRE(big.replicas.rows() > 450);
  for (int j = 0; j < 4; ++j) {
    const double se = std::sqrt(fit.covariance(j, j));
    const double drift = std::fabs(big.replicas.col(j).mean() - fit.delta[j]);
    CHECK(drift < 3.0 * se / std::sqrt(static_cast<double>(big.replicas.rows())) +
                      0.2 * se);  // parametric bootstrap bias stays small
  }
  CHECK_FALSE(big.unreliable());
}

TEST_CASE("pci: zero-width for constant replicas, hand quantiles otherwise") {
  BootstrapRun run;
  run.requested = 4;
  run.replicas = Eigen::MatrixXd::Constant(4, 1, 2.5);
  const auto constant = lbs::pci(run, 0.95);
  CHECK(constant[0].lower == 2.5);
  CHECK(constant[0].upper == 2.5);

  run.replicas.resize(5, 1);
  run.replicas << 10.0, 20.0, 30.0, 40.0, 50.0;
  const auto spread = lbs::pci(run, 0.95);
  CHECK(spread[0].lower == doctest::Approx(11.0).epsilon(1e-14));
  CHECK(spread[0].upper == doctest::Approx(49.0).epsilon(1e-14));

  BootstrapRun tiny;
  tiny.requested = 1;
  tiny.replicas = Eigen::MatrixXd::Constant(1, 1, 0.0);
  CHECK_THROWS_AS((void)lbs::pci(tiny, 0.95), std::runtime_error);
}

TEST_CASE("bci reduces to pci for a symmetric replica cloud centered at the estimate") {
  lbs::RngStream rng(22);
  const RegressionSpec spec = simulate_spec(40, rng);
  lbs::FitResult fit = lbs::fit(spec);
  REQUIRE(fit.converged);

  const int B = 400;
  BootstrapRun run;
  run.requested = B;
  run.master_seed = 0;
  run.replicas.resize(B, fit.delta.size());
  for (int b = 0; b < B / 2; ++b) {
    for (int j = 0; j < fit.delta.size(); ++j) {
      const double offset = 0.05 * (b + 1);
      run.replicas(2 * b, j) = fit.delta[j] - offset;
      run.replicas(2 * b + 1, j) = fit.delta[j] + offset;
    }
  }
  const auto percentile = lbs::pci(run, 0.95);
  const auto corrected = lbs::bci(run, fit, spec, 0.95, 1);
  for (std::size_t j = 0; j < percentile.size(); ++j) {
    // z0 = 0 by symmetry; the acceleration is the jackknife skewness of the
    // real sample, so allow a small wobble.
    CHECK(corrected[j].lower == doctest::Approx(percentile[j].lower).epsilon(0.05));
    CHECK(corrected[j].upper == doctest::Approx(percentile[j].upper).epsilon(0.05));
    CHECK_FALSE(corrected[j].pci_fallback);
  }
}

TEST_CASE("z0 is zero when exactly half the replicas lie below the estimate") {
  CHECK(lbs::special::norm_quantile(0.5) == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("bci falls back to pci when every replica sits on one side") {
  lbs::RngStream rng(23);
  const RegressionSpec spec = simulate_spec(30, rng);
  lbs::FitResult fit = lbs::fit(spec);
  REQUIRE(fit.converged);

  BootstrapRun run;
  run.requested = 50;
  run.replicas.resize(50, fit.delta.size());
  for (int b = 0; b < 50; ++b) {
    for (int j = 0; j < fit.delta.size(); ++j) {
      run.replicas(b, j) = fit.delta[j] + 1.0 + 0.01 * b;  // all above
    }
  }
  const auto corrected = lbs::bci(run, fit, spec, 0.95, 1);
  const auto percentile = lbs::pci(run, 0.95);
  for (std::size_t j = 0; j < corrected.size(); ++j) {
    CHECK(corrected[j].pci_fallback);
    CHECK(corrected[j].lower == percentile[j].lower);
    CHECK(corrected[j].upper == percentile[j].upper);
  }
}

TEST_CASE("estimates stay inside their own bootstrap intervals on real refits") {
  lbs::RngStream rng(24);
  const RegressionSpec spec = simulate_spec(100, rng);
  const lbs::FitResult fit = lbs::fit(spec);
  REQUIRE(fit.converged);
  const BootstrapRun run = lbs::parametric_bootstrap(spec, fit, 200, 5150, 2);
  REQUIRE(run.replicas.rows() > 180);
  const auto percentile = lbs::pci(run, 0.95);
  const auto corrected = lbs::bci(run, fit, spec, 0.95, 2);
  for (int j = 0; j < fit.delta.size(); ++j) {
    CHECK(percentile[j].lower <= fit.delta[j]);
    CHECK(percentile[j].upper >= fit.delta[j]);
    CHECK(corrected[j].lower <= corrected[j].upper);
  }

  // Widening in level, per coefficient.
  const auto wide = lbs::pci(run, 0.99);
  for (int j = 0; j < fit.delta.size(); ++j) {
    CHECK(wide[j].lower <= percentile[j].lower);
    CHECK(wide[j].upper >= percentile[j].upper);
  }
}
