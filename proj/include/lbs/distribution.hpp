#pragma once

// Exact distribution functions of the LBS(alpha, theta) law.
//
// The density is
//
//   f(t) = [ (t/theta)^(1/2) + (theta/t)^(1/2) ]
//          * exp( -(t/theta + theta/t - 2) / (2 alpha^2) )
//          / ( sqrt(2 pi) * alpha * theta * (alpha^2 + 2) ),   t > 0,
//
// the length-biased version of the Birnbaum-Saunders density.  The survival
// function has a closed form in Phi, phi, a(t) and A(t); it is evaluated here
// as a sum of three nonnegative terms so the far right tail loses no
// precision to cancellation, with a log-space variant for arguments past
// erfc underflow.

#include <Eigen/Core>

#include "lbs/params.hpp"

namespace lbs {

double pdf(const LbsParams& p, double t);
double log_pdf(const LbsParams& p, double t);
double cdf(const LbsParams& p, double t);
double survival(const LbsParams& p, double t);
double log_survival(const LbsParams& p, double t);

/// f(t)/S(t); switches to log-space when the survival underflows.
double hazard(const LbsParams& p, double t);

/// Inverse CDF: bracket grown geometrically from theta, then bisection to
/// |cdf(t) - u| < 1e-10 (at most 200 refinement steps).
double quantile(const LbsParams& p, double u);

/// E(T) = theta (2 + 4 alpha^2 + 3 alpha^4) / (2 + alpha^2).
double mean(const LbsParams& p);

/// Var(T) = theta^2 alpha^2 (4 + 17 alpha^2 + 24 alpha^4 + 6 alpha^6) / (2 + alpha^2)^2.
double variance(const LbsParams& p);

/// Negative moment E[T^-(r+1)] = E(Y^r) / (theta^(2r) E(Y)) with Y the
/// underlying Birnbaum-Saunders variable; analytic for r <= 2, adaptive
/// quadrature for larger integer r.
double neg_moment(const LbsParams& p, int r);

// Elementwise conveniences over Eigen arrays.
Eigen::ArrayXd pdf(const LbsParams& p, const Eigen::ArrayXd& t);
Eigen::ArrayXd cdf(const LbsParams& p, const Eigen::ArrayXd& t);
Eigen::ArrayXd survival(const LbsParams& p, const Eigen::ArrayXd& t);
Eigen::ArrayXd hazard(const LbsParams& p, const Eigen::ArrayXd& t);

}  // namespace lbs
