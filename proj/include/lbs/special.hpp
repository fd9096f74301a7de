#pragma once

// Scalar special functions used throughout the library: standard normal
// pdf/cdf/quantile and the regularized incomplete gamma function.
//
// The normal CDF is erfc-based and accurate to full double precision; the
// quantile uses Wichura's AS 241 (PPND16) rational approximations; the
// incomplete gamma uses the classic series / continued-fraction pair.

namespace lbs::special {

/// Standard normal density.
double norm_pdf(double x);

/// Standard normal CDF, Phi(x) = erfc(-x/sqrt(2))/2.
double norm_cdf(double x);

/// Upper tail 1 - Phi(x), computed without cancellation.
double norm_ccdf(double x);

/// log(1 - Phi(x)), finite for arguments far beyond erfc underflow.
double log_norm_ccdf(double x);

/// Inverse of norm_cdf on (0,1). AS 241, |relative error| < 1e-15.
double norm_quantile(double p);

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double gamma_q(double a, double x);

}  // namespace lbs::special
