#include "lbs/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "lbs/distribution.hpp"
#include "lbs/parallel.hpp"
#include "lbs/sampling.hpp"
#include "lbs/special.hpp"

namespace lbs {

const char* residual_kind_name(ResidualKind k) {
  switch (k) {
    case ResidualKind::Gcs:
      return "gcs";
    case ResidualKind::Rq:
      return "rq";
    case ResidualKind::U:
      return "u";
  }
  return "?";
}

ResidualKind residual_kind_from_name(std::string_view name) {
  if (name == "gcs") return ResidualKind::Gcs;
  if (name == "rq") return ResidualKind::Rq;
  if (name == "u") return ResidualKind::U;
  throw std::domain_error("unknown residual kind: " + std::string(name));
}

const Eigen::ArrayXd& ResidualSet::of(ResidualKind k) const {
  switch (k) {
    case ResidualKind::Gcs:
      return gcs;
    case ResidualKind::Rq:
      return rq;
    case ResidualKind::U:
      return u;
  }
  return gcs;
}

ResidualSet residuals(const RegressionSpec& spec, const FitResult& fit) {
  if (!fit.converged) {
    throw std::runtime_error("residuals: fit did not converge");
  }
  const FittedParameters fp = fitted_parameters(spec, fit.delta);
  const Eigen::Index n = spec.n();
  ResidualSet out;
  out.fitted_theta = fp.theta;
  out.fitted_alpha = fp.alpha;
  out.gcs.resize(n);
  out.rq.resize(n);
  out.u.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const LbsParams params(fp.alpha[i], fp.theta[i]);
    double s = survival(params, spec.t[i]);
    if (s < 1e-15 || s > 1.0 - 1e-15) {
      s = std::clamp(s, 1e-15, 1.0 - 1e-15);
      ++out.clamped;
    }
    out.gcs[i] = -std::log(s);
    out.rq[i] = special::norm_quantile(s);
    out.u[i] = (spec.t[i] / fp.theta[i] + fp.theta[i] / spec.t[i] - 2.0) /
               (fp.alpha[i] * fp.alpha[i]);
  }
  return out;
}

ReferenceMoments reference_moments(ResidualKind kind, double alpha) {
  switch (kind) {
    case ResidualKind::Gcs:
      return {1.0, 1.0, 2.0, 9.0};
    case ResidualKind::Rq:
      return {0.0, 1.0, 0.0, 3.0};
    case ResidualKind::U: {
      if (!(alpha > 0.0)) {
        throw std::domain_error("reference_moments: U residual needs alpha > 0");
      }
      const double a2 = alpha * alpha;
      const double s = a2 + 2.0;
      const double a4 = a2 * a2;
      const double a6 = a4 * a2;
      const double a8 = a4 * a4;
      const double denom = 6.0 * a4 + 24.0 * a2 + 8.0;
      return {3.0 - 4.0 / s, std::sqrt(6.0 - 16.0 / (s * s)),
              8.0 * (3.0 * a6 + 18.0 * a4 + 36.0 * a2 + 8.0) / std::pow(denom, 1.5),
              12.0 * (21.0 * a8 + 168.0 * a6 + 456.0 * a4 + 480.0 * a2 + 80.0) /
                  (denom * denom)};
    }
  }
  throw std::domain_error("reference_moments: unknown kind");
}

SampleMoments sample_moments(const Eigen::ArrayXd& x) {
  const auto n = static_cast<double>(x.size());
  if (x.size() < 2) {
    throw std::domain_error("sample_moments: need at least two values");
  }
  SampleMoments m;
  m.mean = x.mean();
  const Eigen::ArrayXd centered = x - m.mean;
  const double m2 = centered.square().mean();
  const double m3 = centered.cube().mean();
  const double m4 = centered.square().square().mean();
  m.sd = std::sqrt(centered.square().sum() / (n - 1.0));
  m.cs = m3 / std::pow(m2, 1.5);
  m.ck = m4 / (m2 * m2);
  return m;
}

namespace {

double reference_quantile(ResidualKind kind, double prob, const GammaMixture& mix) {
  switch (kind) {
    case ResidualKind::Gcs:
      return -std::log1p(-prob);
    case ResidualKind::Rq:
      return special::norm_quantile(prob);
    case ResidualKind::U:
      return gamma_mixture_quantile(mix, prob);
  }
  return 0.0;
}

}  // namespace

EnvelopeBand envelope(const RegressionSpec& spec, const FitResult& fit, ResidualKind kind,
                      int simulations, double level, std::uint64_t seed, int threads) {
  if (simulations < 1) throw std::domain_error("envelope: needs at least one simulation");
  if (!(level > 0.0 && level < 1.0)) throw std::domain_error("envelope: bad level");
  const Eigen::Index n = spec.n();
  const FittedParameters fp = fitted_parameters(spec, fit.delta);

  Eigen::MatrixXd sims(simulations, n);
  std::vector<char> ok(static_cast<std::size_t>(simulations), 0);
  parallel_for(static_cast<std::size_t>(simulations), threads, [&](std::size_t s) {
    RngStream stream = RngStream::derive(seed, s);
    RegressionSpec sim = spec;
    for (Eigen::Index i = 0; i < n; ++i) {
      sim.t[i] = sample_one(LbsParams(fp.alpha[i], fp.theta[i]), stream);
    }
    const FitResult refit = lbs::fit(sim);
    if (!refit.converged) return;
    Eigen::ArrayXd r = residuals(sim, refit).of(kind);
    std::sort(r.data(), r.data() + r.size());
    sims.row(static_cast<Eigen::Index>(s)) = r.transpose();
    ok[s] = 1;
  });

  std::vector<Eigen::Index> kept;
  for (Eigen::Index s = 0; s < simulations; ++s) {
    if (ok[static_cast<std::size_t>(s)]) kept.push_back(s);
  }
  if (kept.size() < 2) {
    throw std::runtime_error("envelope: too few simulated refits converged");
  }

  EnvelopeBand band;
  band.observed = residuals(spec, fit).of(kind);
  std::sort(band.observed.data(), band.observed.data() + band.observed.size());
  band.theoretical.resize(n);
  const GammaMixture mix{2.0 / (fp.alpha.mean() * fp.alpha.mean() + 2.0)};
  for (Eigen::Index i = 0; i < n; ++i) {
    band.theoretical[i] =
        reference_quantile(kind, (static_cast<double>(i) + 0.5) / static_cast<double>(n), mix);
  }
  band.lo.resize(n);
  band.median.resize(n);
  band.hi.resize(n);
  std::vector<double> column(kept.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (std::size_t s = 0; s < kept.size(); ++s) column[s] = sims(kept[s], i);
    std::sort(column.begin(), column.end());
    band.lo[i] = quantile_type7(column, (1.0 - level) / 2.0);
    band.median[i] = quantile_type7(column, 0.5);
    band.hi[i] = quantile_type7(column, 1.0 - (1.0 - level) / 2.0);
    if (band.observed[i] < band.lo[i] || band.observed[i] > band.hi[i]) ++band.outside;
  }
  return band;
}

LjungBoxResult ljung_box(const Eigen::ArrayXd& series, int lags) {
  const Eigen::Index n = series.size();
  if (lags < 1 || lags >= n) {
    throw std::domain_error("ljung_box: requires 1 <= lags < n");
  }
  const double mean = series.mean();
  const Eigen::ArrayXd centered = series - mean;
  const double denom = centered.square().sum();
  if (denom <= 0.0) {
    throw std::domain_error("ljung_box: series has zero variance");
  }
  double q = 0.0;
  for (int k = 1; k <= lags; ++k) {
    const double rho =
        (centered.tail(n - k) * centered.head(n - k)).sum() / denom;
    q += rho * rho / static_cast<double>(n - k);
  }
  q *= static_cast<double>(n) * (static_cast<double>(n) + 2.0);
  return {q, special::gamma_q(static_cast<double>(lags) / 2.0, q / 2.0)};
}

Eigen::ArrayXd raw_residuals(const RegressionSpec& spec, const FitResult& fit) {
  const FittedParameters fp = fitted_parameters(spec, fit.delta);
  Eigen::ArrayXd out(spec.n());
  for (Eigen::Index i = 0; i < spec.n(); ++i) {
    out[i] = spec.t[i] - mean(LbsParams(fp.alpha[i], fp.theta[i]));
  }
  return out;
}

}  // namespace lbs
