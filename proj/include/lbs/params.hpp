#pragma once

// Parameter record and standardizing transforms of the length-biased
// Birnbaum-Saunders (LBS) distribution with shape alpha and scale theta.

namespace lbs {

struct LbsParams {
  double alpha;
  double theta;

  /// Throws std::domain_error unless alpha > 0 and theta > 0 and both finite.
  LbsParams(double alpha, double theta);

  /// Mean of the underlying Birnbaum-Saunders variable, theta*(alpha^2+2)/2.
  double bs_mean() const { return theta * (alpha * alpha + 2.0) / 2.0; }
};

// a(t) = (sqrt(t/theta) - sqrt(theta/t))/alpha and
// A(t) = sqrt(4 + alpha^2 a^2(t))/alpha.  A(t) >= 2/alpha, with equality
// exactly at t = theta.
struct StandardizeTerms {
  double a;
  double big_a;
};

StandardizeTerms standardize_terms(const LbsParams& p, double t);

// Two-component gamma mixture followed by U = (T/theta + theta/T - 2)/alpha^2:
// weight pi on Gamma(1/2, 2) and 1-pi on Gamma(3/2, 2), pi = 2/(alpha^2+2).
struct GammaMixture {
  double pi;
  static constexpr double shape1 = 0.5;
  static constexpr double scale1 = 2.0;
  static constexpr double shape2 = 1.5;
  static constexpr double scale2 = 2.0;
};

GammaMixture gamma_mixture(const LbsParams& p);

double gamma_mixture_cdf(const GammaMixture& mix, double u);

/// Inverse of gamma_mixture_cdf by bracketed bisection/secant refinement.
double gamma_mixture_quantile(const GammaMixture& mix, double prob);

}  // namespace lbs
