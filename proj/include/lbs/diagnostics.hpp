#pragma once

// Residual diagnostics for fitted LBS regressions.
//
// Three residuals per observation, with their reference laws under a
// correctly specified model:
//   GCS  -log S(t_i)                      -> standard exponential
//   RQ   Phi^-1(S(t_i))                   -> standard normal
//   U    (t_i/theta_i + theta_i/t_i - 2)/alpha_i^2 -> the P5 gamma mixture
// RQ applies the normal quantile to the fitted survival exactly as printed
// in the source model, which negates the usual Phi^-1(F) convention; the
// reference law is standard normal either way.

#include <Eigen/Core>
#include <cstdint>

#include "lbs/inference.hpp"
#include "lbs/regression.hpp"

namespace lbs {

enum class ResidualKind { Gcs, Rq, U };

const char* residual_kind_name(ResidualKind k);
ResidualKind residual_kind_from_name(std::string_view name);

struct ResidualSet {
  Eigen::ArrayXd gcs;
  Eigen::ArrayXd rq;
  Eigen::ArrayXd u;
  Eigen::ArrayXd fitted_theta;
  Eigen::ArrayXd fitted_alpha;
  int clamped = 0;  // survival values pinched into [1e-15, 1 - 1e-15]

  const Eigen::ArrayXd& of(ResidualKind k) const;
};

ResidualSet residuals(const RegressionSpec& spec, const FitResult& fit);

// Reference mean/SD/skewness/kurtosis (kurtosis non-excess).  alpha enters
// only for the U residual.
struct ReferenceMoments {
  double mean, sd, cs, ck;
};

ReferenceMoments reference_moments(ResidualKind kind, double alpha = 1.0);

// Sample moments in the same conventions: SD with n-1, CS = m3/m2^(3/2),
// CK = m4/m2^2.
struct SampleMoments {
  double mean = 0.0, sd = 0.0, cs = 0.0, ck = 0.0;
};

SampleMoments sample_moments(const Eigen::ArrayXd& x);

struct EnvelopeBand {
  Eigen::ArrayXd theoretical;  // reference quantiles at (i - 0.5)/n
  Eigen::ArrayXd lo, median, hi;
  Eigen::ArrayXd observed;  // sorted residuals of the original fit
  int outside = 0;
};

/// Simulates M datasets from the fitted model, refits each, and builds
/// pointwise order-statistic bands at the given level.  For the U residual
/// the theoretical quantiles use the mixture at the mean fitted alpha.
EnvelopeBand envelope(const RegressionSpec& spec, const FitResult& fit, ResidualKind kind,
                      int simulations, double level, std::uint64_t seed, int threads = 1);

struct LjungBoxResult {
  double statistic;
  double p_value;
};

/// Ljung-Box test on lags 1..h; p-value from chi-square with h dof.
LjungBoxResult ljung_box(const Eigen::ArrayXd& series, int lags);

/// Raw residuals t_i minus the fitted mean E(T) at (alpha_i, theta_i).
Eigen::ArrayXd raw_residuals(const RegressionSpec& spec, const FitResult& fit);

}  // namespace lbs
