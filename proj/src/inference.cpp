#include "lbs/inference.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lbs/parallel.hpp"
#include "lbs/sampling.hpp"
#include "lbs/special.hpp"

namespace lbs {

const char* method_name(IntervalMethod m) {
  switch (m) {
    case IntervalMethod::Aci:
      return "aci";
    case IntervalMethod::Pci:
      return "pci";
    case IntervalMethod::Bci:
      return "bci";
  }
  return "?";
}

std::vector<IntervalEstimate> aci(const FitResult& fit, double level) {
  if (!fit.has_covariance) {
    throw std::runtime_error("aci: fit has no covariance matrix");
  }
  if (!(level > 0.0 && level < 1.0)) {
    throw std::domain_error("aci: level must be in (0,1)");
  }
  const double z = special::norm_quantile(0.5 + level / 2.0);
  std::vector<IntervalEstimate> out;
  out.reserve(fit.delta.size());
  for (int j = 0; j < fit.delta.size(); ++j) {
    const double se = std::sqrt(std::max(0.0, fit.covariance(j, j)));
    out.push_back({j, IntervalMethod::Aci, level, fit.delta[j] - z * se,
                   fit.delta[j] + z * se, false});
  }
  return out;
}

BootstrapRun parametric_bootstrap(const RegressionSpec& spec, const FitResult& fit, int B,
                                  std::uint64_t seed, int threads) {
  if (B < 0) throw std::domain_error("parametric_bootstrap: B must be nonnegative");
  if (!fit.converged) {
    throw std::runtime_error("parametric_bootstrap: fit did not converge");
  }
  const FittedParameters fp = fitted_parameters(spec, fit.delta);
  const Eigen::Index n = spec.n();
  const Eigen::Index m = spec.p() + spec.q();

  Eigen::MatrixXd all(B, m);
  std::vector<char> ok(static_cast<std::size_t>(B), 0);
  parallel_for(static_cast<std::size_t>(B), threads, [&](std::size_t b) {
    RngStream stream = RngStream::derive(seed, b);
    RegressionSpec replica = spec;
    for (Eigen::Index i = 0; i < n; ++i) {
      replica.t[i] = sample_one(LbsParams(fp.alpha[i], fp.theta[i]), stream);
    }
    const FitResult refit = lbs::fit(replica);
    if (refit.converged) {
      all.row(static_cast<Eigen::Index>(b)) = refit.delta.transpose();
      ok[b] = 1;
    }
  });

  BootstrapRun run;
  run.requested = B;
  run.master_seed = seed;
  run.failures = B - static_cast<int>(std::count(ok.begin(), ok.end(), 1));
  run.replicas.resize(B - run.failures, m);
  Eigen::Index row = 0;
  for (int b = 0; b < B; ++b) {
    if (ok[static_cast<std::size_t>(b)]) run.replicas.row(row++) = all.row(b);
  }
  return run;
}

double quantile_type7(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("quantile_type7: empty input");
  if (p <= 0.0) return sorted.front();
  if (p >= 1.0) return sorted.back();
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(h);
  const double frac = h - static_cast<double>(lo);
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

namespace {

std::vector<double> sorted_column(const Eigen::MatrixXd& m, Eigen::Index j) {
  std::vector<double> col(m.col(j).data(), m.col(j).data() + m.rows());
  std::sort(col.begin(), col.end());
  return col;
}

}  // namespace

std::vector<IntervalEstimate> pci(const BootstrapRun& run, double level) {
  if (run.replicas.rows() < 2) {
    throw std::runtime_error("pci: needs at least two converged replicas");
  }
  if (!(level > 0.0 && level < 1.0)) {
    throw std::domain_error("pci: level must be in (0,1)");
  }
  const double kappa = 1.0 - level;
  std::vector<IntervalEstimate> out;
  out.reserve(run.replicas.cols());
  for (Eigen::Index j = 0; j < run.replicas.cols(); ++j) {
    const std::vector<double> col = sorted_column(run.replicas, j);
    out.push_back({static_cast<int>(j), IntervalMethod::Pci, level,
                   quantile_type7(col, kappa / 2.0), quantile_type7(col, 1.0 - kappa / 2.0),
                   false});
  }
  return out;
}

std::vector<IntervalEstimate> bci(const BootstrapRun& run, const FitResult& fit,
                                  const RegressionSpec& spec, double level, int threads) {
  if (run.replicas.rows() < 2) {
    throw std::runtime_error("bci: needs at least two converged replicas");
  }
  if (!(level > 0.0 && level < 1.0)) {
    throw std::domain_error("bci: level must be in (0,1)");
  }
  const Eigen::Index n = spec.n();
  const Eigen::Index m = run.replicas.cols();

  // Jackknife estimates over observations, warm-started at the full fit.
  Eigen::MatrixXd jack(n, m);
  std::vector<char> jack_ok(static_cast<std::size_t>(n), 0);
  parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t i) {
    RegressionSpec loo;
    loo.theta_link = spec.theta_link;
    loo.alpha_link = spec.alpha_link;
    loo.t.resize(n - 1);
    loo.X.resize(n - 1, spec.p());
    loo.W.resize(n - 1, spec.q());
    Eigen::Index row = 0;
    for (Eigen::Index r = 0; r < n; ++r) {
      if (r == static_cast<Eigen::Index>(i)) continue;
      loo.t[row] = spec.t[r];
      loo.X.row(row) = spec.X.row(r);
      loo.W.row(row) = spec.W.row(r);
      ++row;
    }
    FitOptions opts;
    opts.start = fit.delta;
    const FitResult refit = lbs::fit(loo, opts);
    if (refit.converged) {
      jack.row(static_cast<Eigen::Index>(i)) = refit.delta.transpose();
      jack_ok[i] = 1;
    }
  });

  const double kappa = 1.0 - level;
  const double z_lo = special::norm_quantile(kappa / 2.0);
  const double z_hi = special::norm_quantile(1.0 - kappa / 2.0);
  const auto rows = static_cast<double>(run.replicas.rows());

  std::vector<IntervalEstimate> out;
  out.reserve(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    const std::vector<double> col = sorted_column(run.replicas, j);
    const double below =
        static_cast<double>(std::lower_bound(col.begin(), col.end(), fit.delta[j]) -
                            col.begin());
    IntervalEstimate est{static_cast<int>(j), IntervalMethod::Bci, level, 0.0, 0.0, false};
    if (below <= 0.0 || below >= rows) {
      // All replicas on one side of the estimate: z0 is infinite.
      est.lower = quantile_type7(col, kappa / 2.0);
      est.upper = quantile_type7(col, 1.0 - kappa / 2.0);
      est.pci_fallback = true;
      out.push_back(est);
      continue;
    }
    const double z0 = special::norm_quantile(below / rows);

    double accel = 0.0;
    double sum2 = 0.0, sum3 = 0.0, jmean = 0.0;
    Eigen::Index used = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (jack_ok[static_cast<std::size_t>(i)]) {
        jmean += jack(i, j);
        ++used;
      }
    }
    if (used >= 2) {
      jmean /= static_cast<double>(used);
      for (Eigen::Index i = 0; i < n; ++i) {
        if (!jack_ok[static_cast<std::size_t>(i)]) continue;
        const double d = jmean - jack(i, j);
        sum2 += d * d;
        sum3 += d * d * d;
      }
      if (sum2 > 0.0) accel = sum3 / (6.0 * std::pow(sum2, 1.5));
    }

    const auto adjusted = [&](double z) {
      const double zz = z0 + z;
      return special::norm_cdf(z0 + zz / (1.0 - accel * zz));
    };
    est.lower = quantile_type7(col, adjusted(z_lo));
    est.upper = quantile_type7(col, adjusted(z_hi));
    if (est.lower > est.upper) std::swap(est.lower, est.upper);
    out.push_back(est);
  }
  return out;
}

}  // namespace lbs
