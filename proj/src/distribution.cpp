#include "lbs/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "lbs/special.hpp"

namespace lbs {

namespace {

constexpr double kLogSqrt2Pi = 0.91893853320467274178;
constexpr double kInf = std::numeric_limits<double>::infinity();

void require_positive_t(double t) {
  if (!(t > 0.0)) {
    throw std::domain_error("lbs: t must be positive");
  }
}

// a(t) + A(t) without cancellation: for a < 0 the two terms nearly cancel,
// so use (A^2 - a^2)/(A - a) = (4/alpha^2)/(A - a).
double a_plus_big_a(const LbsParams& p, const StandardizeTerms& s) {
  if (s.a >= 0.0) return s.a + s.big_a;
  return (4.0 / (p.alpha * p.alpha)) / (s.big_a - s.a);
}

// The three nonnegative pieces of the closed-form survival function:
//   S(t) = [1 - Phi(a)] + c e^{2/alpha^2} [1 - Phi(A)] + c phi(a) (a + A),
// with c = alpha^2/(alpha^2 + 2).
struct SurvivalTerms {
  double tail_a;
  double tail_big_a;
  double density_term;
};

SurvivalTerms survival_terms(const LbsParams& p, double t) {
  const StandardizeTerms s = standardize_terms(p, t);
  const double a2 = p.alpha * p.alpha;
  const double c = a2 / (a2 + 2.0);
  return {special::norm_ccdf(s.a),
          c * std::exp(2.0 / a2) * special::norm_ccdf(s.big_a),
          c * special::norm_pdf(s.a) * a_plus_big_a(p, s)};
}

double log_survival_terms(const LbsParams& p, double t) {
  const StandardizeTerms s = standardize_terms(p, t);
  const double a2 = p.alpha * p.alpha;
  const double log_c = std::log(a2 / (a2 + 2.0));
  const double l1 = special::log_norm_ccdf(s.a);
  const double l2 = log_c + 2.0 / a2 + special::log_norm_ccdf(s.big_a);
  const double l3 =
      log_c - 0.5 * s.a * s.a - kLogSqrt2Pi + std::log(a_plus_big_a(p, s));
  const double m = std::max({l1, l2, l3});
  if (m == -kInf) return -kInf;
  return m + std::log(std::exp(l1 - m) + std::exp(l2 - m) + std::exp(l3 - m));
}

}  // namespace

double log_pdf(const LbsParams& p, double t) {
  require_positive_t(t);
  const double a2 = p.alpha * p.alpha;
  const double w = t / p.theta + p.theta / t - 2.0;
  return -w / (2.0 * a2) - std::log(2.0 * p.alpha + p.alpha * a2) -
         1.5 * std::log(p.theta) + std::log(t + p.theta) - 0.5 * std::log(t) -
         kLogSqrt2Pi;
}

double pdf(const LbsParams& p, double t) { return std::exp(log_pdf(p, t)); }

double survival(const LbsParams& p, double t) {
  require_positive_t(t);
  const StandardizeTerms s = standardize_terms(p, t);
  if (s.a > 36.0) {
    return std::exp(log_survival_terms(p, t));
  }
  const SurvivalTerms terms = survival_terms(p, t);
  return terms.tail_a + terms.tail_big_a + terms.density_term;
}

double log_survival(const LbsParams& p, double t) {
  require_positive_t(t);
  return log_survival_terms(p, t);
}

double cdf(const LbsParams& p, double t) {
  require_positive_t(t);
  return std::min(1.0, std::max(0.0, 1.0 - survival(p, t)));
}

double hazard(const LbsParams& p, double t) {
  require_positive_t(t);
  const double s = survival(p, t);
  if (s > 1e-280) {
    return pdf(p, t) / s;
  }
  return std::exp(log_pdf(p, t) - log_survival(p, t));
}

double quantile(const LbsParams& p, double u) {
  if (!(u > 0.0 && u < 1.0)) {
    throw std::domain_error("lbs::quantile: u must be in (0,1)");
  }
  double lo = p.theta;
  double hi = p.theta;
  if (cdf(p, lo) < u) {
    while (cdf(p, hi) < u) {
      hi *= 2.0;
      if (hi > 1e300) break;
    }
  } else {
    while (cdf(p, lo) >= u) {
      lo /= 2.0;
      if (lo < 1e-300) break;
    }
  }
  double mid = 0.5 * (lo + hi);
  for (int i = 0; i < 200; ++i) {
    mid = 0.5 * (lo + hi);
    const double c = cdf(p, mid);
    if (std::fabs(c - u) < 1e-10) return mid;
    if (c < u) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return mid;
}

double mean(const LbsParams& p) {
  const double a2 = p.alpha * p.alpha;
  return p.theta * (2.0 + 4.0 * a2 + 3.0 * a2 * a2) / (2.0 + a2);
}

double variance(const LbsParams& p) {
  const double a2 = p.alpha * p.alpha;
  const double s = 2.0 + a2;
  return p.theta * p.theta * a2 * (4.0 + 17.0 * a2 + 24.0 * a2 * a2 + 6.0 * a2 * a2 * a2) /
         (s * s);
}

namespace {

// Adaptive Simpson on [lo, hi] to the given absolute tolerance.
double simpson(const std::function<double(double)>& f, double lo, double mid, double hi,
               double flo, double fmid, double fhi, double whole, double tol, int depth) {
  const double lmid = 0.5 * (lo + mid);
  const double rmid = 0.5 * (mid + hi);
  const double flmid = f(lmid);
  const double frmid = f(rmid);
  const double left = (mid - lo) / 6.0 * (flo + 4.0 * flmid + fmid);
  const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frmid + fhi);
  if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return simpson(f, lo, lmid, mid, flo, flmid, fmid, left, tol / 2.0, depth - 1) +
         simpson(f, mid, rmid, hi, fmid, frmid, fhi, right, tol / 2.0, depth - 1);
}

double integrate_adaptive(const std::function<double(double)>& f, double lo, double hi,
                          double tol) {
  const double mid = 0.5 * (lo + hi);
  const double flo = f(lo);
  const double fmid = f(mid);
  const double fhi = f(hi);
  const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
  return simpson(f, lo, mid, hi, flo, fmid, fhi, whole, tol, 48);
}

}  // namespace

double neg_moment(const LbsParams& p, int r) {
  if (r < 0) {
    throw std::domain_error("lbs::neg_moment: r must be a nonnegative integer");
  }
  const double a2 = p.alpha * p.alpha;
  const double ey = p.bs_mean();
  switch (r) {
    case 0:
      return 1.0 / ey;
    case 1:
      return 1.0 / (p.theta * p.theta);
    case 2:
      // E(Y^2) = theta^2 (3 alpha^4 + 4 alpha^2 + 2)/2.
      return (3.0 * a2 * a2 + 4.0 * a2 + 2.0) /
             (p.theta * p.theta * p.theta * (a2 + 2.0));
    default: {
      // Integrate t^{-(r+1)} f(t) dt with the substitution t = theta e^x; the
      // integrand then decays double-exponentially in both directions.
      const double span = std::log(1500.0 * (a2 + 1.0) * (r + 3.0)) + 5.0;
      const auto integrand = [&](double x) {
        const double t = p.theta * std::exp(x);
        return std::exp(log_pdf(p, t) - static_cast<double>(r + 1) * std::log(t) + x) *
               p.theta;
      };
      return integrate_adaptive(integrand, -span, span, 1e-14);
    }
  }
}

Eigen::ArrayXd pdf(const LbsParams& p, const Eigen::ArrayXd& t) {
  return t.unaryExpr([&](double x) { return pdf(p, x); });
}

Eigen::ArrayXd cdf(const LbsParams& p, const Eigen::ArrayXd& t) {
  return t.unaryExpr([&](double x) { return cdf(p, x); });
}

Eigen::ArrayXd survival(const LbsParams& p, const Eigen::ArrayXd& t) {
  return t.unaryExpr([&](double x) { return survival(p, x); });
}

Eigen::ArrayXd hazard(const LbsParams& p, const Eigen::ArrayXd& t) {
  return t.unaryExpr([&](double x) { return hazard(p, x); });
}

}  // namespace lbs
