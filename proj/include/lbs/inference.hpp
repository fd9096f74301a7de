#pragma once

// Confidence intervals for fitted LBS regression coefficients: asymptotic
// normal (ACI), percentile bootstrap (PCI) and bias-corrected-and-accelerated
// bootstrap (BCI), the latter two over a parametric bootstrap run.

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <vector>

#include "lbs/regression.hpp"

namespace lbs {

enum class IntervalMethod { Aci, Pci, Bci };

const char* method_name(IntervalMethod m);

struct IntervalEstimate {
  int coefficient = 0;
  IntervalMethod method = IntervalMethod::Aci;
  double level = 0.95;
  double lower = 0.0;
  double upper = 0.0;
  bool pci_fallback = false;  // BCa fell back to the percentile rule
};

/// delta_j +- z_{1-kappa/2} * sqrt(cov_jj).  Throws std::runtime_error when
/// the fit carries no covariance.
std::vector<IntervalEstimate> aci(const FitResult& fit, double level);

struct BootstrapRun {
  Eigen::MatrixXd replicas;  // converged replicas only, one row per replica
  int requested = 0;
  int failures = 0;
  std::uint64_t master_seed = 0;

  /// More than 10% of replicas failed to converge.
  bool unreliable() const {
    return requested > 0 && failures * 10 > requested;
  }
};

/// Simulates B pseudo-samples t*_i ~ LBS(alpha_i, theta_i) at the fitted
/// per-observation parameters, refits each, and records the estimates.
/// Deterministic for a given master seed, independent of thread count.
BootstrapRun parametric_bootstrap(const RegressionSpec& spec, const FitResult& fit, int B,
                                  std::uint64_t seed, int threads = 1);

/// Type-7 (linear interpolation) quantile of an ascending-sorted sequence.
double quantile_type7(std::span<const double> sorted, double p);

/// Per-coefficient empirical quantiles at kappa/2 and 1-kappa/2.  Requires at
/// least two converged replicas.
std::vector<IntervalEstimate> pci(const BootstrapRun& run, double level);

/// Standard BCa: bias correction z0 from the fraction of replicas below the
/// estimate, acceleration from the jackknife over observations.  Coefficients
/// whose replicas all fall on one side of the estimate fall back to PCI.
std::vector<IntervalEstimate> bci(const BootstrapRun& run, const FitResult& fit,
                                  const RegressionSpec& spec, double level, int threads = 1);

}  // namespace lbs
