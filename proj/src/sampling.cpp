#include "lbs/sampling.hpp"

#include <cmath>
#include <stdexcept>

#include "lbs/special.hpp"

namespace lbs {

double RngStream::normal() { return special::norm_quantile(uniform()); }

double RngStream::exponential() { return -std::log(uniform()); }

double sample_one(const LbsParams& p, RngStream& rng) {
  const GammaMixture mix = gamma_mixture(p);
  const double z = rng.normal();
  double u = z * z;  // Gamma(1/2, 2)
  if (rng.uniform() >= mix.pi) {
    u += 2.0 * rng.exponential();  // plus Gamma(1, 2) gives Gamma(3/2, 2)
  }
  const double s = p.alpha * p.alpha * u + 2.0;
  const double root = std::sqrt(s * s - 4.0);
  const double upper = p.theta * (s + root) / 2.0;
  if (rng.uniform() < upper / (s * p.theta)) {
    return upper;
  }
  return p.theta * p.theta / upper;  // root product is theta^2
}

Eigen::ArrayXd sample(const LbsParams& p, Eigen::Index n, RngStream& rng) {
  if (n < 0) {
    throw std::domain_error("lbs::sample: n must be nonnegative");
  }
  Eigen::ArrayXd out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out[i] = sample_one(p, rng);
  }
  return out;
}

}  // namespace lbs
