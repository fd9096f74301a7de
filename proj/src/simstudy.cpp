#include "lbs/simstudy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "lbs/errors.hpp"
#include "lbs/parallel.hpp"
#include "lbs/sampling.hpp"

namespace lbs {

Eigen::VectorXd ScenarioConfig::true_delta() const {
  Eigen::VectorXd delta(alpha_covariate ? 4 : 3);
  if (alpha_covariate) {
    delta << beta0, beta1, rho0, rho1;
  } else {
    delta << beta0, beta1, rho0;
  }
  return delta;
}

std::vector<std::string> ScenarioConfig::coefficient_names() const {
  if (alpha_covariate) return {"beta0", "beta1", "rho0", "rho1"};
  return {"beta0", "beta1", "rho0"};
}

bool ScenarioConfig::unimodal() const {
  const double max_eta = alpha_covariate ? rho0 + std::fabs(rho1) : rho0;
  return std::exp(max_eta) <= 2.0;
}

namespace {

// Neumaier-compensated accumulator.
struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double value) {
    const double t = sum + value;
    if (std::fabs(sum) >= std::fabs(value)) {
      carry += (sum - t) + value;
    } else {
      carry += (value - t) + sum;
    }
    sum = t;
  }
  double get() const { return sum + carry; }
};

struct ReplicationDraw {
  RegressionSpec spec;
  FitResult fit;
  std::uint64_t boot_seed = 0;
  bool ok = false;
};

Eigen::MatrixXd uniform_design(Eigen::Index n, RngStream& stream) {
  Eigen::MatrixXd design(n, 2);
  design.col(0).setOnes();
  for (Eigen::Index i = 0; i < n; ++i) {
    design(i, 1) = 2.0 * stream.uniform() - 1.0;
  }
  return design;
}

// Simulates covariates (unless fixed designs are supplied) and the response,
// then fits.  Draw order within the stream is fixed: X, W, t, bootstrap seed.
ReplicationDraw run_replication(const ScenarioConfig& config,
                                const Eigen::MatrixXd* fixed_x,
                                const Eigen::MatrixXd* fixed_w, std::size_t rep) {
  RngStream stream = RngStream::derive(config.seed, rep);
  const Eigen::Index n = config.n;

  ReplicationDraw draw;
  draw.spec.X = fixed_x ? *fixed_x : uniform_design(n, stream);
  if (config.alpha_covariate) {
    draw.spec.W = fixed_w ? *fixed_w : uniform_design(n, stream);
  } else {
    draw.spec.W = Eigen::MatrixXd::Ones(n, 1);
  }
  draw.spec.t.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double theta = std::exp(config.beta0 + config.beta1 * draw.spec.X(i, 1));
    const double alpha = config.alpha_covariate
                             ? std::exp(config.rho0 + config.rho1 * draw.spec.W(i, 1))
                             : std::exp(config.rho0);
    draw.spec.t[i] = sample_one(LbsParams(alpha, theta), stream);
  }
  draw.boot_seed = stream.next_u64();
  draw.fit = fit(draw.spec);
  draw.ok = draw.fit.converged;
  return draw;
}

struct FixedDesigns {
  Eigen::MatrixXd x, w;
  const Eigen::MatrixXd* x_ptr = nullptr;
  const Eigen::MatrixXd* w_ptr = nullptr;
};

FixedDesigns make_fixed_designs(const ScenarioConfig& config) {
  FixedDesigns out;
  if (config.redraw_covariates) return out;
  // Index beyond any replication count keeps this stream distinct.
  RngStream stream = RngStream::derive(config.seed, (1ULL << 32));
  out.x = uniform_design(config.n, stream);
  out.x_ptr = &out.x;
  if (config.alpha_covariate) {
    out.w = uniform_design(config.n, stream);
    out.w_ptr = &out.w;
  }
  return out;
}

void check_failure_gate(const ScenarioConfig& config, int failures) {
  if (config.unimodal() &&
      failures > config.max_failure_rate * config.replications) {
    throw ConvergenceError("simulation study: " + std::to_string(failures) + " of " +
                           std::to_string(config.replications) +
                           " replications failed to converge in a unimodal scenario");
  }
}

void validate_config(const ScenarioConfig& config) {
  if (config.replications < 1) {
    throw ValidationError("simulation study: replications must be >= 1");
  }
  if (config.n < 5) {
    throw ValidationError("simulation study: n too small");
  }
}

}  // namespace

StudyReport run_estimation_study(const ScenarioConfig& config) {
  validate_config(config);
  const Eigen::VectorXd truth = config.true_delta();
  const Eigen::Index m = truth.size();
  const auto reps = static_cast<std::size_t>(config.replications);
  const FixedDesigns fixed = make_fixed_designs(config);

  Eigen::MatrixXd estimates(config.replications, m);
  std::vector<char> ok(reps, 0);
  parallel_for(reps, config.threads, [&](std::size_t rep) {
    const ReplicationDraw draw = run_replication(config, fixed.x_ptr, fixed.w_ptr, rep);
    if (draw.ok) {
      estimates.row(static_cast<Eigen::Index>(rep)) = draw.fit.delta.transpose();
      ok[rep] = 1;
    }
  });

  StudyReport report;
  report.coefficient_names = config.coefficient_names();
  report.true_values = truth;
  report.replications = config.replications;
  report.est_mean.resize(m);
  report.est_bias.resize(m);
  report.est_mse.resize(m);
  int used = 0;
  for (std::size_t rep = 0; rep < reps; ++rep) used += ok[rep];
  report.failures = config.replications - used;
  check_failure_gate(config, report.failures);
  if (used == 0) throw ConvergenceError("simulation study: every replication failed");

  for (Eigen::Index j = 0; j < m; ++j) {
    KahanSum sum, sum_sq;
    for (std::size_t rep = 0; rep < reps; ++rep) {
      if (!ok[rep]) continue;
      const double err = estimates(static_cast<Eigen::Index>(rep), j) - truth[j];
      sum.add(estimates(static_cast<Eigen::Index>(rep), j));
      sum_sq.add(err * err);
    }
    report.est_mean[j] = sum.get() / used;
    report.est_bias[j] = report.est_mean[j] - truth[j];
    report.est_mse[j] = sum_sq.get() / used;
  }
  return report;
}

StudyReport run_coverage_study(const ScenarioConfig& config,
                               const std::vector<IntervalMethod>& methods, double level) {
  validate_config(config);
  if (!(level > 0.0 && level < 1.0)) {
    throw ValidationError("coverage study: level must be in (0,1)");
  }
  const Eigen::VectorXd truth = config.true_delta();
  const Eigen::Index m = truth.size();
  const auto reps = static_cast<std::size_t>(config.replications);
  const FixedDesigns fixed = make_fixed_designs(config);
  const bool needs_bootstrap =
      std::any_of(methods.begin(), methods.end(), [](IntervalMethod mm) {
        return mm != IntervalMethod::Aci;
      });

  const std::size_t nmethods = methods.size();
  std::vector<Eigen::MatrixXi> contains(nmethods);
  std::vector<std::vector<char>> usable(nmethods);
  for (std::size_t k = 0; k < nmethods; ++k) {
    contains[k] = Eigen::MatrixXi::Zero(config.replications, m);
    usable[k].assign(reps, 0);
  }
  std::vector<char> ok(reps, 0);

  parallel_for(reps, config.threads, [&](std::size_t rep) {
    const ReplicationDraw draw = run_replication(config, fixed.x_ptr, fixed.w_ptr, rep);
    if (!draw.ok) return;
    ok[rep] = 1;
    BootstrapRun run;
    if (needs_bootstrap) {
      run = parametric_bootstrap(draw.spec, draw.fit, config.bootstrap, draw.boot_seed, 1);
    }
    for (std::size_t k = 0; k < nmethods; ++k) {
      std::vector<IntervalEstimate> intervals;
      try {
        switch (methods[k]) {
          case IntervalMethod::Aci:
            intervals = aci(draw.fit, level);
            break;
          case IntervalMethod::Pci:
            intervals = pci(run, level);
            break;
          case IntervalMethod::Bci:
            intervals = bci(run, draw.fit, draw.spec, level, 1);
            break;
        }
      } catch (const std::runtime_error&) {
        continue;  // method unavailable for this replication
      }
      usable[k][rep] = 1;
      for (const IntervalEstimate& est : intervals) {
        const double value = truth[est.coefficient];
        contains[k](static_cast<Eigen::Index>(rep), est.coefficient) =
            (value >= est.lower && value <= est.upper) ? 1 : 0;
      }
    }
  });

  StudyReport report;
  report.coefficient_names = config.coefficient_names();
  report.true_values = truth;
  report.replications = config.replications;
  report.level = level;
  int fitted = 0;
  for (std::size_t rep = 0; rep < reps; ++rep) fitted += ok[rep];
  report.failures = config.replications - fitted;
  check_failure_gate(config, report.failures);

  for (std::size_t k = 0; k < nmethods; ++k) {
    StudyReport::MethodCoverage cov;
    cov.method = methods[k];
    cov.percent.resize(m);
    cov.tolerance_band.resize(m);
    int used = 0;
    for (std::size_t rep = 0; rep < reps; ++rep) used += usable[k][rep];
    cov.used = used;
    for (Eigen::Index j = 0; j < m; ++j) {
      long hits = 0;
      for (std::size_t rep = 0; rep < reps; ++rep) {
        if (usable[k][rep]) hits += contains[k](static_cast<Eigen::Index>(rep), j);
      }
      const double p = used > 0 ? static_cast<double>(hits) / used : 0.0;
      cov.percent[j] = 100.0 * p;
      cov.tolerance_band[j] =
          used > 0 ? 300.0 * std::sqrt(p * (1.0 - p) / used) : 0.0;
    }
    report.coverage.push_back(std::move(cov));
  }
  return report;
}

StudyReport run_residual_study(const ScenarioConfig& config,
                               const std::vector<ResidualKind>& kinds) {
  validate_config(config);
  const auto reps = static_cast<std::size_t>(config.replications);
  const FixedDesigns fixed = make_fixed_designs(config);
  const std::size_t nkinds = kinds.size();

  // moments per (replication, kind): mean, sd, cs, ck
  Eigen::MatrixXd stats(config.replications, 4 * nkinds);
  std::vector<char> ok(reps, 0);
  parallel_for(reps, config.threads, [&](std::size_t rep) {
    const ReplicationDraw draw = run_replication(config, fixed.x_ptr, fixed.w_ptr, rep);
    if (!draw.ok) return;
    const ResidualSet set = residuals(draw.spec, draw.fit);
    for (std::size_t k = 0; k < nkinds; ++k) {
      const SampleMoments sm = sample_moments(set.of(kinds[k]));
      stats(static_cast<Eigen::Index>(rep), static_cast<Eigen::Index>(4 * k)) = sm.mean;
      stats(static_cast<Eigen::Index>(rep), static_cast<Eigen::Index>(4 * k + 1)) = sm.sd;
      stats(static_cast<Eigen::Index>(rep), static_cast<Eigen::Index>(4 * k + 2)) = sm.cs;
      stats(static_cast<Eigen::Index>(rep), static_cast<Eigen::Index>(4 * k + 3)) = sm.ck;
    }
    ok[rep] = 1;
  });

  StudyReport report;
  report.coefficient_names = config.coefficient_names();
  report.true_values = config.true_delta();
  report.replications = config.replications;
  int used = 0;
  for (std::size_t rep = 0; rep < reps; ++rep) used += ok[rep];
  report.failures = config.replications - used;
  check_failure_gate(config, report.failures);
  if (used == 0) throw ConvergenceError("residual study: every replication failed");

  for (std::size_t k = 0; k < nkinds; ++k) {
    KahanSum sums[4];
    for (std::size_t rep = 0; rep < reps; ++rep) {
      if (!ok[rep]) continue;
      for (int c = 0; c < 4; ++c) {
        sums[c].add(stats(static_cast<Eigen::Index>(rep),
                          static_cast<Eigen::Index>(4 * k + c)));
      }
    }
    StudyReport::KindMoments km;
    km.kind = kinds[k];
    km.moments.mean = sums[0].get() / used;
    km.moments.sd = sums[1].get() / used;
    km.moments.cs = sums[2].get() / used;
    km.moments.ck = sums[3].get() / used;
    report.residual_moments.push_back(km);
  }
  return report;
}

std::string StudyReport::to_csv() const {
  std::ostringstream out;
  char buf[64];
  const auto num = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  out << "section,name,statistic,value\n";
  out << "meta,replications,count," << replications << "\n";
  out << "meta,failures,count," << failures << "\n";
  for (Eigen::Index j = 0; j < true_values.size(); ++j) {
    out << "truth," << coefficient_names[j] << ",value," << num(true_values[j]) << "\n";
  }
  for (Eigen::Index j = 0; j < est_mean.size(); ++j) {
    out << "estimation," << coefficient_names[j] << ",mean," << num(est_mean[j]) << "\n";
    out << "estimation," << coefficient_names[j] << ",bias," << num(est_bias[j]) << "\n";
    out << "estimation," << coefficient_names[j] << ",mse," << num(est_mse[j]) << "\n";
  }
  for (const MethodCoverage& cov : coverage) {
    for (Eigen::Index j = 0; j < cov.percent.size(); ++j) {
      out << "coverage-" << method_name(cov.method) << "," << coefficient_names[j]
          << ",percent," << num(cov.percent[j]) << "\n";
      out << "coverage-" << method_name(cov.method) << "," << coefficient_names[j]
          << ",band," << num(cov.tolerance_band[j]) << "\n";
    }
  }
  for (const KindMoments& km : residual_moments) {
    out << "residual," << residual_kind_name(km.kind) << ",mean," << num(km.moments.mean)
        << "\n";
    out << "residual," << residual_kind_name(km.kind) << ",sd," << num(km.moments.sd) << "\n";
    out << "residual," << residual_kind_name(km.kind) << ",cs," << num(km.moments.cs) << "\n";
    out << "residual," << residual_kind_name(km.kind) << ",ck," << num(km.moments.ck) << "\n";
  }
  return out.str();
}

}  // namespace lbs
