#include "lbs/params.hpp"

#include <cmath>
#include <stdexcept>

#include "lbs/special.hpp"

namespace lbs {

LbsParams::LbsParams(double alpha_in, double theta_in) : alpha(alpha_in), theta(theta_in) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::domain_error("LbsParams: alpha must be positive and finite");
  }
  if (!(theta > 0.0) || !std::isfinite(theta)) {
    throw std::domain_error("LbsParams: theta must be positive and finite");
  }
}

StandardizeTerms standardize_terms(const LbsParams& p, double t) {
  if (!(t > 0.0)) {
    throw std::domain_error("standardize_terms: t must be positive");
  }
  const double root = std::sqrt(t / p.theta);
  const double a = (root - 1.0 / root) / p.alpha;
  const double big_a = std::sqrt(4.0 + p.alpha * p.alpha * a * a) / p.alpha;
  return {a, big_a};
}

GammaMixture gamma_mixture(const LbsParams& p) {
  return {2.0 / (p.alpha * p.alpha + 2.0)};
}

double gamma_mixture_cdf(const GammaMixture& mix, double u) {
  if (u <= 0.0) return 0.0;
  return mix.pi * special::gamma_p(GammaMixture::shape1, u / GammaMixture::scale1) +
         (1.0 - mix.pi) * special::gamma_p(GammaMixture::shape2, u / GammaMixture::scale2);
}

double gamma_mixture_quantile(const GammaMixture& mix, double prob) {
  if (!(prob > 0.0 && prob < 1.0)) {
    throw std::domain_error("gamma_mixture_quantile: prob must be in (0,1)");
  }
  double lo = 0.0;
  double hi = 1.0;
  while (gamma_mixture_cdf(mix, hi) < prob) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (gamma_mixture_cdf(mix, mid) < prob) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-14 * (1.0 + hi)) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace lbs
