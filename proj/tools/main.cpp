// Command line front end: fit, simulate, residuals, dist, summarize,
// make-data.  Exit codes: 0 success, 2 validation error, 3 convergence
// failure, 4 I/O error.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lbs/distribution.hpp"
#include "lbs/errors.hpp"
#include "lbs/io.hpp"
#include "lbs/sampling.hpp"
#include "lbs/shape.hpp"
#include "lbs/simstudy.hpp"
#include "lbs/version.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitConvergence = 3;
constexpr int kExitIo = 4;

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

struct DistArgs {
  double alpha = 1.0;
  double theta = 1.0;
  std::vector<double> at;
  double prob = 0.5;
  int count = 10;
  std::uint64_t seed = 1;
  std::string out;
};

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw lbs::IoError("cannot write " + out_path);
  out << text;
}

int run_dist(const std::string& what, const DistArgs& args) {
  const lbs::LbsParams params(args.alpha, args.theta);
  std::string text;
  if (what == "modes") {
    const lbs::ModeReport report = lbs::classify_modes(params);
    text += "kind,mode,lower_mode,antimode,upper_mode,discriminant\n";
    if (report.kind == lbs::ModeKind::Unimodal) {
      text += "unimodal," + format_g17(report.mode) + ",,,," +
              format_g17(report.discriminant) + "\n";
    } else {
      text += "bimodal,," + format_g17(report.lower_mode) + "," +
              format_g17(report.antimode) + "," + format_g17(report.upper_mode) + "," +
              format_g17(report.discriminant) + "\n";
    }
  } else if (what == "sample") {
    lbs::RngStream stream(args.seed);
    const Eigen::ArrayXd draws = lbs::sample(params, args.count, stream);
    text += "t\n";
    for (Eigen::Index i = 0; i < draws.size(); ++i) text += format_g17(draws[i]) + "\n";
  } else if (what == "quantile") {
    text += "u,t\n";
    text += format_g17(args.prob) + "," + format_g17(lbs::quantile(params, args.prob)) + "\n";
  } else {
    text += "t," + what + "\n";
    for (double t : args.at) {
      double value = 0.0;
      if (what == "pdf") value = lbs::pdf(params, t);
      if (what == "cdf") value = lbs::cdf(params, t);
      text += format_g17(t) + "," + format_g17(value) + "\n";
    }
  }
  emit(args.out, text);
  return 0;
}

struct SimulateArgs {
  std::string scenario = "table1";
  double block = -1.0;  // rho1 (tables 1/3/5) or alpha (tables 2/4/6)
  int n = 100;
  int reps = 1000;
  int boot = 200;
  double level = 0.95;
  std::uint64_t seed = 1;
  int threads = 0;
  bool fixed_covariates = false;
  std::string out;
};

int run_simulate(const SimulateArgs& args) {
  lbs::ScenarioConfig config;
  config.n = args.n;
  config.replications = args.reps;
  config.bootstrap = args.boot;
  config.seed = args.seed;
  config.threads = args.threads;
  config.redraw_covariates = !args.fixed_covariates;

  const bool alpha_covariate =
      args.scenario == "table1" || args.scenario == "table3" || args.scenario == "table5";
  config.alpha_covariate = alpha_covariate;
  if (alpha_covariate) {
    config.rho0 = -1.0;
    config.rho1 = args.block > 0 ? args.block : 0.25;
  } else {
    config.rho0 = std::log(args.block > 0 ? args.block : 1.0);
  }

  lbs::StudyReport report;
  if (args.scenario == "table1" || args.scenario == "table2") {
    report = lbs::run_estimation_study(config);
  } else if (args.scenario == "table3" || args.scenario == "table4") {
    report = lbs::run_coverage_study(
        config,
        {lbs::IntervalMethod::Aci, lbs::IntervalMethod::Pci, lbs::IntervalMethod::Bci},
        args.level);
  } else if (args.scenario == "table5" || args.scenario == "table6") {
    report = lbs::run_residual_study(
        config, {lbs::ResidualKind::Gcs, lbs::ResidualKind::Rq, lbs::ResidualKind::U});
  } else {
    throw lbs::ValidationError("unknown scenario '" + args.scenario +
                               "' (expected table1..table6)");
  }
  emit(args.out, report.to_csv());
  return 0;
}

int dispatch(int argc, char** argv) {
  CLI::App app{"Length-biased Birnbaum-Saunders distribution and regression"};
  app.set_version_flag("--version", lbs::kVersion);
  app.require_subcommand(1);

  // fit
  std::string fit_data, fit_config, fit_out = "lbs-report";
  std::optional<std::uint64_t> fit_seed;
  std::optional<double> fit_level;
  std::optional<int> fit_boot;
  std::optional<std::string> fit_ci;
  int fit_threads = 0;
  auto* fit_cmd = app.add_subcommand("fit", "fit the regression model to a CSV dataset");
  fit_cmd->add_option("--data", fit_data, "input CSV file")->required();
  fit_cmd->add_option("--config", fit_config, "model configuration file")->required();
  fit_cmd->add_option("--out-dir", fit_out, "output directory");
  fit_cmd->add_option("--seed", fit_seed, "override config seed");
  fit_cmd->add_option("--level", fit_level, "override config confidence level");
  fit_cmd->add_option("--boot", fit_boot, "override config bootstrap replicas");
  fit_cmd->add_option("--ci", fit_ci, "override config methods, e.g. aci,pci,bci");
  fit_cmd->add_option("--threads", fit_threads, "worker threads (0 = auto)");

  // simulate
  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "run a Monte Carlo study scenario");
  sim_cmd->add_option("--scenario", sim.scenario, "table1..table6");
  sim_cmd->add_option("--block", sim.block,
                      "scenario block: rho1 for tables 1/3/5, alpha for tables 2/4/6");
  sim_cmd->add_option("--n", sim.n, "sample size per replication");
  sim_cmd->add_option("--reps", sim.reps, "Monte Carlo replications");
  sim_cmd->add_option("--boot", sim.boot, "bootstrap replicas per replication");
  sim_cmd->add_option("--level", sim.level, "confidence level for coverage scenarios");
  sim_cmd->add_option("--seed", sim.seed, "master seed");
  sim_cmd->add_option("--threads", sim.threads, "worker threads (0 = auto)");
  sim_cmd->add_flag("--fixed-covariates", sim.fixed_covariates,
                    "draw one design and reuse it across replications");
  sim_cmd->add_option("--out", sim.out, "output CSV (default stdout)");

  // residuals
  std::string res_data, res_config, res_kind = "gcs", res_out = "lbs-residuals";
  int res_envelope = 100;
  double res_level = 0.95;
  std::optional<std::uint64_t> res_seed;
  int res_threads = 0;
  auto* res_cmd = app.add_subcommand("residuals", "residual diagnostics with QQ envelope");
  res_cmd->add_option("--data", res_data, "input CSV file")->required();
  res_cmd->add_option("--config", res_config, "model configuration file")->required();
  res_cmd->add_option("--kind", res_kind, "gcs, rq, or u");
  res_cmd->add_option("--envelope", res_envelope, "envelope simulations");
  res_cmd->add_option("--level", res_level, "envelope level");
  res_cmd->add_option("--seed", res_seed, "override config seed");
  res_cmd->add_option("--out-dir", res_out, "output directory");
  res_cmd->add_option("--threads", res_threads, "worker threads (0 = auto)");

  // dist
  DistArgs dist;
  auto* dist_cmd = app.add_subcommand("dist", "distribution functions of LBS(alpha, theta)");
  dist_cmd->require_subcommand(1);
  std::vector<CLI::App*> dist_subs;
  for (const char* name : {"pdf", "cdf", "quantile", "sample", "modes"}) {
    auto* sub = dist_cmd->add_subcommand(name);
    sub->add_option("--alpha", dist.alpha, "shape parameter")->required();
    sub->add_option("--theta", dist.theta, "scale parameter")->required();
    if (std::string(name) == "pdf" || std::string(name) == "cdf") {
      sub->add_option("--t", dist.at, "evaluation points")->required();
    }
    if (std::string(name) == "quantile") {
      sub->add_option("--u", dist.prob, "probability in (0,1)")->required();
    }
    if (std::string(name) == "sample") {
      sub->add_option("--n", dist.count, "number of draws");
      sub->add_option("--seed", dist.seed, "stream seed");
    }
    sub->add_option("--out", dist.out, "output CSV (default stdout)");
    dist_subs.push_back(sub);
  }

  // summarize
  std::string sum_data, sum_column;
  auto* sum_cmd = app.add_subcommand("summarize", "summary statistics for one column");
  sum_cmd->add_option("--data", sum_data, "input CSV file")->required();
  sum_cmd->add_option("--column", sum_column, "column name")->required();

  // make-data
  std::string make_out = "synthetic.csv";
  std::uint64_t make_seed = 1;
  Eigen::Index make_n = 70;
  auto* make_cmd = app.add_subcommand(
      "make-data", "emit a synthetic dataset with the application's model shape");
  make_cmd->add_option("--out", make_out, "output CSV file");
  make_cmd->add_option("--seed", make_seed, "stream seed");
  make_cmd->add_option("--n", make_n, "rows");

  CLI11_PARSE(app, argc, argv);

  if (fit_cmd->parsed()) {
    const lbs::Dataset data = lbs::ingest_csv(fit_data);
    lbs::ModelConfig config = lbs::parse_model_config(fit_config);
    if (fit_seed) config.seed = *fit_seed;
    if (fit_level) config.level = *fit_level;
    if (fit_boot) config.bootstrap = *fit_boot;
    if (fit_ci) {
      config.ci_methods.clear();
      std::istringstream in(*fit_ci);
      std::string item;
      while (std::getline(in, item, ',')) config.ci_methods.push_back(item);
    }
    const lbs::FitReport report = lbs::fit_report(config, data, fit_out, fit_threads);
    std::cout << "loglik " << format_4(report.fit.loglik) << ", " << report.fit.iterations
              << " iterations, gradient norm " << format_g17(report.fit.gradient_norm)
              << "\n";
    for (const auto& path : report.files) std::cout << "wrote " << path.string() << "\n";
    return 0;
  }
  if (sim_cmd->parsed()) {
    return run_simulate(sim);
  }
  if (res_cmd->parsed()) {
    const lbs::Dataset data = lbs::ingest_csv(res_data);
    lbs::ModelConfig config = lbs::parse_model_config(res_config);
    if (res_seed) config.seed = *res_seed;
    config.envelope = res_envelope;
    config.level = res_level;
    config.ci_methods = {"aci"};
    const lbs::FitReport report = lbs::fit_report(config, data, res_out, res_threads);
    const lbs::ResidualKind kind = lbs::residual_kind_from_name(res_kind);
    for (const auto& [k, band] : report.envelopes) {
      if (k == kind) {
        std::cout << band.outside << " of " << band.observed.size()
                  << " points outside the envelope\n";
      }
    }
    for (const auto& path : report.files) std::cout << "wrote " << path.string() << "\n";
    return 0;
  }
  if (dist_cmd->parsed()) {
    for (std::size_t i = 0; i < dist_subs.size(); ++i) {
      if (dist_subs[i]->parsed()) {
        static const char* names[] = {"pdf", "cdf", "quantile", "sample", "modes"};
        return run_dist(names[i], dist);
      }
    }
  }
  if (sum_cmd->parsed()) {
    const lbs::Dataset data = lbs::ingest_csv(sum_data);
    const lbs::SummaryStats s = lbs::summarize(data, sum_column);
    std::cout << "n,min,median,mean,max,sd,cv_pct,cs,ck_excess\n";
    std::cout << s.n << "," << format_4(s.min) << "," << format_4(s.median) << ","
              << format_4(s.mean) << "," << format_4(s.max) << "," << format_4(s.sd) << ","
              << format_4(s.cv_pct) << ",";
    if (s.degenerate) {
      std::cout << "undefined,undefined (constant column)\n";
    } else {
      std::cout << format_4(s.cs) << "," << format_4(s.ck_excess) << "\n";
    }
    return 0;
  }
  if (make_cmd->parsed()) {
    const lbs::Dataset data = lbs::synthetic_application_data(make_seed, make_n);
    lbs::write_csv(make_out, data.columns, data.values);
    std::cout << "wrote " << make_out << " (" << data.n() << " rows)\n";
    return 0;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const lbs::IoError& err) {
    std::cerr << "I/O error: " << err.what();
    if (err.row > 0) std::cerr << " (row " << err.row << ")";
    std::cerr << "\n";
    return kExitIo;
  } catch (const lbs::ConvergenceError& err) {
    std::cerr << "convergence failure: " << err.what() << "\n";
    return kExitConvergence;
  } catch (const lbs::ValidationError& err) {
    std::cerr << "validation error: " << err.what() << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& err) {
    std::cerr << "validation error: " << err.what() << "\n";
    return kExitValidation;
  } catch (const std::domain_error& err) {
    std::cerr << "validation error: " << err.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
}
