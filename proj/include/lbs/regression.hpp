#pragma once

// The LBS regression model: dual linear predictors
//   g1(theta_i) = x_i' beta   (n x p design X)
//   g2(alpha_i) = w_i' rho    (n x q design W)
// with analytic log-likelihood, score and Hessian, OLS-based starting
// values, and BFGS maximum-likelihood fitting.  The reported log-likelihood
// includes the full constant, so it equals the sum of log densities.

#include <Eigen/Core>

#include "lbs/links.hpp"

namespace lbs {

struct RegressionSpec {
  Eigen::VectorXd t;   // response, all positive
  Eigen::MatrixXd X;   // n x p design for the theta component
  Eigen::MatrixXd W;   // n x q design for the alpha component
  LinkFunction theta_link = LinkFunction::log_link();
  LinkFunction alpha_link = LinkFunction::log_link();

  Eigen::Index n() const { return t.size(); }
  Eigen::Index p() const { return X.cols(); }
  Eigen::Index q() const { return W.cols(); }

  /// Throws std::invalid_argument on dimension mismatch, non-positive
  /// responses, rank-deficient designs, or p + q >= n.
  void validate() const;
};

struct FittedParameters {
  Eigen::ArrayXd theta;
  Eigen::ArrayXd alpha;
  bool feasible;  // all theta_i, alpha_i positive and finite
};

FittedParameters fitted_parameters(const RegressionSpec& spec,
                                   const Eigen::VectorXd& delta);

/// Sum of log densities at delta = (beta, rho); -inf at infeasible points.
double log_likelihood(const RegressionSpec& spec, const Eigen::VectorXd& delta);

// Per-observation diagonal factors of the score and Hessian.
struct ScoreWorkspace {
  Eigen::ArrayXd z;  // d loglik / d theta_i
  Eigen::ArrayXd c;  // d loglik / d alpha_i
  Eigen::ArrayXd a;  // 1 / g1'(theta_i)
  Eigen::ArrayXd b;  // 1 / g2'(alpha_i)
};

struct HessianWorkspace {
  Eigen::ArrayXd zprime, cprime, d, e, k;
  Eigen::ArrayXd v;  // z' a^2 + z d a
  Eigen::ArrayXd h;  // k b a
  Eigen::ArrayXd u;  // c' b^2 + c e b
};

ScoreWorkspace score_workspace(const RegressionSpec& spec, const Eigen::VectorXd& delta);
HessianWorkspace hessian_workspace(const RegressionSpec& spec, const Eigen::VectorXd& delta);

/// Gradient (X' A z, W' B c); throws std::domain_error at infeasible points.
Eigen::VectorXd score(const RegressionSpec& spec, const Eigen::VectorXd& delta);

/// Block Hessian (X'VX, X'HW; W'HX, W'UW); symmetric by construction.
Eigen::MatrixXd hessian(const RegressionSpec& spec, const Eigen::VectorXd& delta);

/// OLS starting values: beta0 from g1(t) on X, then rho0 from g2(y) on W with
/// y_i = sqrt(t_i/theta_i + theta_i/t_i - 2) floored at 1e-8.
Eigen::VectorXd initial_values(const RegressionSpec& spec);

struct FitOptions {
  double tolerance = 1e-8;  // sup-norm of the score
  int max_iterations = 500;
  Eigen::VectorXd start;  // optional; empty means use initial_values
};

struct FitResult {
  Eigen::VectorXd delta;
  Eigen::MatrixXd covariance;  // inverse observed information, if available
  bool has_covariance = false;
  double loglik = 0.0;
  bool converged = false;
  int iterations = 0;
  double gradient_norm = 0.0;
};

FitResult fit(const RegressionSpec& spec, const FitOptions& options = {});

}  // namespace lbs
