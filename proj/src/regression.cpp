#include "lbs/regression.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lbs {

namespace {
constexpr double kLogSqrt2Pi = 0.91893853320467274178;
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

void RegressionSpec::validate() const {
  const Eigen::Index nn = n();
  if (nn == 0) throw std::invalid_argument("RegressionSpec: empty response");
  if (X.rows() != nn || W.rows() != nn) {
    throw std::invalid_argument("RegressionSpec: design row counts must match response length");
  }
  if (p() == 0 || q() == 0) {
    throw std::invalid_argument("RegressionSpec: designs need at least one column");
  }
  if (p() + q() >= nn) {
    throw std::invalid_argument("RegressionSpec: requires p + q < n");
  }
  if (!(t.array() > 0.0).all() || !t.allFinite()) {
    throw std::invalid_argument("RegressionSpec: responses must be positive and finite");
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qrx(X);
  if (qrx.rank() < p()) throw std::invalid_argument("RegressionSpec: X is rank deficient");
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qrw(W);
  if (qrw.rank() < q()) throw std::invalid_argument("RegressionSpec: W is rank deficient");
}

FittedParameters fitted_parameters(const RegressionSpec& spec, const Eigen::VectorXd& delta) {
  const Eigen::Index p = spec.p();
  const Eigen::VectorXd eta1 = spec.X * delta.head(p);
  const Eigen::VectorXd eta2 = spec.W * delta.tail(spec.q());
  FittedParameters out;
  out.theta = eta1.array().unaryExpr([&](double e) { return spec.theta_link.inverse(e); });
  out.alpha = eta2.array().unaryExpr([&](double e) { return spec.alpha_link.inverse(e); });
  out.feasible = (out.theta > 0.0).all() && (out.alpha > 0.0).all() &&
                 out.theta.isFinite().all() && out.alpha.isFinite().all();
  return out;
}

double log_likelihood(const RegressionSpec& spec, const Eigen::VectorXd& delta) {
  if (delta.size() != spec.p() + spec.q()) {
    throw std::invalid_argument("log_likelihood: delta has wrong length");
  }
  const FittedParameters fp = fitted_parameters(spec, delta);
  if (!fp.feasible) return -kInf;
  const Eigen::ArrayXd& th = fp.theta;
  const Eigen::ArrayXd& al = fp.alpha;
  const Eigen::ArrayXd t = spec.t.array();
  const Eigen::ArrayXd w = t / th + th / t - 2.0;
  const double value =
      (-w / (2.0 * al.square()) - (2.0 * al + al.cube()).log() - 1.5 * th.log() +
       (t + th).log() - 0.5 * t.log() - kLogSqrt2Pi)
          .sum();
  return std::isfinite(value) ? value : -kInf;
}

ScoreWorkspace score_workspace(const RegressionSpec& spec, const Eigen::VectorXd& delta) {
  const FittedParameters fp = fitted_parameters(spec, delta);
  if (!fp.feasible) {
    throw std::domain_error("score: infeasible point (non-positive theta or alpha)");
  }
  const Eigen::ArrayXd& th = fp.theta;
  const Eigen::ArrayXd& al = fp.alpha;
  const Eigen::ArrayXd t = spec.t.array();
  ScoreWorkspace ws;
  ws.z = 1.0 / (t + th) - (1.0 / t - t / th.square()) / (2.0 * al.square()) - 1.5 / th;
  ws.c = (t / th + th / t - 2.0) / al.cube() -
         (2.0 + 3.0 * al.square()) / (2.0 * al + al.cube());
  ws.a = th.unaryExpr([&](double v) { return 1.0 / spec.theta_link.deriv(v); });
  ws.b = al.unaryExpr([&](double v) { return 1.0 / spec.alpha_link.deriv(v); });
  return ws;
}

Eigen::VectorXd score(const RegressionSpec& spec, const Eigen::VectorXd& delta) {
  const ScoreWorkspace ws = score_workspace(spec, delta);
  Eigen::VectorXd g(spec.p() + spec.q());
  g.head(spec.p()) = spec.X.transpose() * (ws.z * ws.a).matrix();
  g.tail(spec.q()) = spec.W.transpose() * (ws.c * ws.b).matrix();
  return g;
}

HessianWorkspace hessian_workspace(const RegressionSpec& spec, const Eigen::VectorXd& delta) {
  const FittedParameters fp = fitted_parameters(spec, delta);
  if (!fp.feasible) {
    throw std::domain_error("hessian: infeasible point (non-positive theta or alpha)");
  }
  const ScoreWorkspace sw = score_workspace(spec, delta);
  const Eigen::ArrayXd& th = fp.theta;
  const Eigen::ArrayXd& al = fp.alpha;
  const Eigen::ArrayXd t = spec.t.array();
  const Eigen::ArrayXd w = t / th + th / t - 2.0;
  const Eigen::ArrayXd denom = 2.0 * al + al.cube();

  HessianWorkspace ws;
  ws.zprime = 1.5 / th.square() - t / (al.square() * th.cube()) - 1.0 / (t + th).square();
  ws.cprime = (4.0 + 3.0 * al.square().square()) / denom.square() - 3.0 * w / al.square().square();
  ws.k = (1.0 / t - t / th.square()) / al.cube();
  ws.d = th.unaryExpr([&](double v) {
    const double g1 = spec.theta_link.deriv(v);
    return -spec.theta_link.second_deriv(v) / (g1 * g1);
  });
  ws.e = al.unaryExpr([&](double v) {
    const double g2 = spec.alpha_link.deriv(v);
    return -spec.alpha_link.second_deriv(v) / (g2 * g2);
  });
  ws.v = ws.zprime * sw.a.square() + sw.z * ws.d * sw.a;
  ws.h = ws.k * sw.b * sw.a;
  ws.u = ws.cprime * sw.b.square() + sw.c * ws.e * sw.b;
  return ws;
}

Eigen::MatrixXd hessian(const RegressionSpec& spec, const Eigen::VectorXd& delta) {
  const HessianWorkspace ws = hessian_workspace(spec, delta);
  const Eigen::Index p = spec.p();
  const Eigen::Index q = spec.q();
  Eigen::MatrixXd H(p + q, p + q);
  H.topLeftCorner(p, p) = spec.X.transpose() * ws.v.matrix().asDiagonal() * spec.X;
  H.topRightCorner(p, q) = spec.X.transpose() * ws.h.matrix().asDiagonal() * spec.W;
  H.bottomLeftCorner(q, p) = H.topRightCorner(p, q).transpose();
  H.bottomRightCorner(q, q) = spec.W.transpose() * ws.u.matrix().asDiagonal() * spec.W;
  return H;
}

Eigen::VectorXd initial_values(const RegressionSpec& spec) {
  spec.validate();
  const Eigen::VectorXd g1t =
      spec.t.unaryExpr([&](double v) { return spec.theta_link.forward(v); });
  const Eigen::VectorXd beta0 = spec.X.colPivHouseholderQr().solve(g1t);

  const Eigen::ArrayXd theta0 =
      (spec.X * beta0).array().unaryExpr([&](double e) { return spec.theta_link.inverse(e); });
  const Eigen::ArrayXd t = spec.t.array();
  const Eigen::ArrayXd y =
      (t / theta0 + theta0 / t - 2.0).max(0.0).sqrt().max(1e-8);
  const Eigen::VectorXd g2y =
      y.unaryExpr([&](double v) { return spec.alpha_link.forward(v); }).matrix();
  const Eigen::VectorXd rho0 = spec.W.colPivHouseholderQr().solve(g2y);

  Eigen::VectorXd delta(spec.p() + spec.q());
  delta << beta0, rho0;
  return delta;
}

namespace {

// Observed-information covariance at delta; falls back to a central
// finite-difference Hessian when the analytic one is not negative definite.
void attach_covariance(const RegressionSpec& spec, FitResult& result) {
  const Eigen::Index m = result.delta.size();
  const auto try_invert = [&](const Eigen::MatrixXd& H) -> bool {
    const Eigen::MatrixXd info = -0.5 * (H + H.transpose());
    Eigen::LLT<Eigen::MatrixXd> llt(info);
    if (llt.info() != Eigen::Success) return false;
    result.covariance = llt.solve(Eigen::MatrixXd::Identity(m, m));
    result.has_covariance = result.covariance.allFinite();
    return result.has_covariance;
  };
  if (try_invert(hessian(spec, result.delta))) return;

  Eigen::MatrixXd fd(m, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    const double h = 1e-5 * (1.0 + std::fabs(result.delta[j]));
    Eigen::VectorXd up = result.delta, down = result.delta;
    up[j] += h;
    down[j] -= h;
    try {
      fd.col(j) = (score(spec, up) - score(spec, down)) / (2.0 * h);
    } catch (const std::domain_error&) {
      result.has_covariance = false;
      return;
    }
  }
  try_invert(fd);
}

}  // namespace

FitResult fit(const RegressionSpec& spec, const FitOptions& options) {
  spec.validate();
  const Eigen::Index m = spec.p() + spec.q();
  Eigen::VectorXd x = options.start.size() == m ? options.start : initial_values(spec);

  FitResult result;
  double fx = log_likelihood(spec, x);
  if (!std::isfinite(fx)) {
    // The OLS start can be infeasible for non-log links; back off toward a
    // crude feasible point before giving up.
    result.converged = false;
    result.delta = x;
    result.loglik = fx;
    return result;
  }
  Eigen::VectorXd g = score(spec, x);
  Eigen::MatrixXd hinv = Eigen::MatrixXd::Identity(m, m);

  int iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    if (g.lpNorm<Eigen::Infinity>() < options.tolerance) break;

    Eigen::VectorXd direction = hinv * g;  // ascent direction
    if (direction.dot(g) <= 0.0) {
      hinv.setIdentity();
      direction = g;
    }

    // Backtracking Armijo line search on the log-likelihood.
    const double slope = direction.dot(g);
    double step = 1.0;
    double fnew = -kInf;
    Eigen::VectorXd xnew;
    bool accepted = false;
    const double noise_floor = 1e-12 * (1.0 + std::fabs(fx));
    for (int halvings = 0; halvings < 60; ++halvings) {
      xnew = x + step * direction;
      fnew = log_likelihood(spec, xnew);
      if (std::isfinite(fnew) && fnew >= fx + 1e-4 * step * slope - noise_floor) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;

    const Eigen::VectorXd gnew = score(spec, xnew);
    const Eigen::VectorXd s = xnew - x;
    const Eigen::VectorXd y = gnew - g;  // gradient change (ascent convention)
    const double sy = -s.dot(y);         // curvature of the negated objective
    if (sy > 1e-12 * s.norm() * y.norm()) {
      const Eigen::VectorXd hy = hinv * (-y);
      const double yhy = (-y).dot(hy);
      hinv += ((sy + yhy) / (sy * sy)) * (s * s.transpose());
      hinv -= (hy * s.transpose() + s * hy.transpose()) / sy;
    }
    x = xnew;
    fx = fnew;
    g = gnew;
  }

  result.delta = x;
  result.loglik = fx;
  result.iterations = iter;
  result.gradient_norm = g.lpNorm<Eigen::Infinity>();
  result.converged = result.gradient_norm < options.tolerance;
  if (result.converged) {
    attach_covariance(spec, result);
  }
  return result;
}

}  // namespace lbs
