#include "lbs/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "lbs/distribution.hpp"
#include "lbs/errors.hpp"
#include "lbs/sampling.hpp"
#include "lbs/version.hpp"

namespace lbs {

namespace {

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(trim(field));
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

Eigen::Index Dataset::column_index(const std::string& name) const {
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j] == name) return static_cast<Eigen::Index>(j);
  }
  throw ValidationError("dataset has no column named '" + name + "'");
}

Eigen::VectorXd Dataset::column(const std::string& name) const {
  return values.col(column_index(name));
}

Dataset ingest_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty file: " + path.string());
  if (!line.empty() && line.back() == '\r') line.pop_back();

  Dataset data;
  data.columns = split(line, ',');
  if (data.columns.empty()) throw IoError("no header fields in " + path.string(), 1);
  std::set<std::string> seen;
  for (std::size_t j = 0; j < data.columns.size(); ++j) {
    if (data.columns[j].empty()) {
      throw IoError("empty header field", 1, static_cast<long>(j + 1));
    }
    if (!seen.insert(data.columns[j]).second) {
      throw IoError("duplicate header '" + data.columns[j] + "'", 1,
                    static_cast<long>(j + 1));
    }
  }

  const std::size_t k = data.columns.size();
  std::vector<double> cells;
  long row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const std::vector<std::string> fields = split(line, ',');
    if (fields.size() != k) {
      throw IoError("row has " + std::to_string(fields.size()) + " fields, expected " +
                        std::to_string(k),
                    row);
    }
    for (std::size_t j = 0; j < k; ++j) {
      double value = 0.0;
      const std::string& cell = fields[j];
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
      if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty()) {
        throw IoError("non-numeric cell '" + cell + "'", row, static_cast<long>(j + 1));
      }
      cells.push_back(value);
    }
  }
  const auto n = static_cast<Eigen::Index>(cells.size() / k);
  data.values.resize(n, static_cast<Eigen::Index>(k));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(k); ++j) {
      data.values(i, j) = cells[static_cast<std::size_t>(i * static_cast<Eigen::Index>(k) + j)];
    }
  }
  return data;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& columns,
               const Eigen::MatrixXd& values) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    out << (j ? "," : "") << columns[j];
  }
  out << "\n";
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      out << (j ? "," : "") << format_g17(values(i, j));
    }
    out << "\n";
  }
  if (!out) throw IoError("write failed: " + path.string());
}

SummaryStats summarize(const Dataset& data, const std::string& column) {
  const Eigen::VectorXd col = data.column(column);
  if (col.size() == 0) throw ValidationError("summarize: empty column");
  SummaryStats s;
  s.n = col.size();
  s.min = col.minCoeff();
  s.max = col.maxCoeff();
  s.mean = col.mean();
  std::vector<double> sorted(col.data(), col.data() + col.size());
  std::sort(sorted.begin(), sorted.end());
  s.median = quantile_type7(sorted, 0.5);
  const Eigen::ArrayXd centered = col.array() - s.mean;
  const double m2 = centered.square().mean();
  if (col.size() > 1) {
    s.sd = std::sqrt(centered.square().sum() / (static_cast<double>(col.size()) - 1.0));
  }
  if (m2 <= 0.0) {
    s.degenerate = true;
    s.cv_pct = 0.0;
    s.cs = std::numeric_limits<double>::quiet_NaN();
    s.ck_excess = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  s.cv_pct = 100.0 * s.sd / s.mean;
  s.cs = centered.cube().mean() / std::pow(m2, 1.5);
  s.ck_excess = centered.square().square().mean() / (m2 * m2) - 3.0;
  return s;
}

namespace {

std::vector<std::string> parse_list(const std::string& value) {
  std::vector<std::string> items;
  for (const std::string& item : split(value, ',')) {
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

}  // namespace

ModelConfig parse_model_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  ModelConfig config;
  bool have_response = false;
  std::string line;
  long row = 0;
  while (std::getline(in, line)) {
    ++row;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw IoError("config line is not 'key = value'", row);
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "response") {
      config.response = value;
      have_response = true;
    } else if (key == "theta_covariates") {
      config.theta_covariates = parse_list(value);
    } else if (key == "alpha_covariates") {
      config.alpha_covariates = parse_list(value);
    } else if (key == "theta_link") {
      config.theta_link = value;
    } else if (key == "alpha_link") {
      config.alpha_link = value;
    } else if (key == "ci") {
      config.ci_methods = parse_list(value);
    } else if (key == "level") {
      config.level = std::stod(value);
    } else if (key == "bootstrap") {
      config.bootstrap = std::stoi(value);
    } else if (key == "envelope") {
      config.envelope = std::stoi(value);
    } else if (key == "seed") {
      config.seed = std::stoull(value);
    } else {
      throw IoError("unknown config key '" + key + "'", row);
    }
  }
  if (!have_response) throw ValidationError("config is missing 'response'");
  return config;
}

RegressionSpec build_spec(const ModelConfig& config, const Dataset& data) {
  RegressionSpec spec;
  spec.t = data.column(config.response);
  if (!(spec.t.array() > 0.0).all()) {
    throw ValidationError("response column '" + config.response + "' must be positive");
  }
  const auto fill = [&](const std::vector<std::string>& names) {
    Eigen::MatrixXd design(data.n(), static_cast<Eigen::Index>(names.size()) + 1);
    design.col(0).setOnes();
    for (std::size_t j = 0; j < names.size(); ++j) {
      design.col(static_cast<Eigen::Index>(j) + 1) = data.column(names[j]);
    }
    return design;
  };
  spec.X = fill(config.theta_covariates);
  spec.W = fill(config.alpha_covariates);
  spec.theta_link = LinkFunction::from_name(config.theta_link);
  spec.alpha_link = LinkFunction::from_name(config.alpha_link);
  return spec;
}

std::vector<std::string> coefficient_labels(const ModelConfig& config) {
  std::vector<std::string> labels;
  labels.push_back("theta:(Intercept)");
  for (const std::string& name : config.theta_covariates) labels.push_back("theta:" + name);
  labels.push_back("alpha:(Intercept)");
  for (const std::string& name : config.alpha_covariates) labels.push_back("alpha:" + name);
  return labels;
}

namespace {

IntervalMethod method_from_name(const std::string& name) {
  if (name == "aci") return IntervalMethod::Aci;
  if (name == "pci") return IntervalMethod::Pci;
  if (name == "bci") return IntervalMethod::Bci;
  throw ValidationError("unknown interval method '" + name + "'");
}

}  // namespace

FitReport fit_report(const ModelConfig& config, const Dataset& data,
                     const std::filesystem::path& out_dir, int threads) {
  std::filesystem::create_directories(out_dir);
  const RegressionSpec spec = build_spec(config, data);

  FitReport report;
  report.coefficient_names = coefficient_labels(config);
  report.fit = fit(spec);
  if (!report.fit.converged) {
    throw ConvergenceError("fit_report: maximum likelihood fit did not converge");
  }

  std::vector<IntervalMethod> methods;
  for (const std::string& name : config.ci_methods) methods.push_back(method_from_name(name));
  const bool needs_bootstrap = std::any_of(methods.begin(), methods.end(), [](IntervalMethod m) {
    return m != IntervalMethod::Aci;
  });
  BootstrapRun run;
  if (needs_bootstrap) {
    run = parametric_bootstrap(spec, report.fit, config.bootstrap, config.seed, threads);
  }
  for (IntervalMethod method : methods) {
    std::vector<IntervalEstimate> estimates;
    switch (method) {
      case IntervalMethod::Aci:
        estimates = aci(report.fit, config.level);
        break;
      case IntervalMethod::Pci:
        estimates = pci(run, config.level);
        break;
      case IntervalMethod::Bci:
        estimates = bci(run, report.fit, spec, config.level, threads);
        break;
    }
    report.intervals.insert(report.intervals.end(), estimates.begin(), estimates.end());
  }

  report.residual_set = residuals(spec, report.fit);
  const ResidualKind kinds[] = {ResidualKind::Gcs, ResidualKind::Rq, ResidualKind::U};
  for (ResidualKind kind : kinds) {
    report.envelopes.emplace_back(
        kind, envelope(spec, report.fit, kind, config.envelope, config.level,
                       config.seed + static_cast<int>(kind) + 1, threads));
  }

  const Eigen::ArrayXd raw = raw_residuals(spec, report.fit);
  for (int lags : {4, 16}) {
    if (lags < spec.n()) report.serial_tests.emplace_back(lags, ljung_box(raw, lags));
  }

  // coefficients.csv
  {
    const std::filesystem::path path = out_dir / "coefficients.csv";
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << "coefficient,estimate,se";
    for (IntervalMethod method : methods) {
      out << "," << method_name(method) << "_lower," << method_name(method) << "_upper,"
          << method_name(method) << "_significant";
    }
    out << "\n";
    for (Eigen::Index j = 0; j < report.fit.delta.size(); ++j) {
      const double se =
          report.fit.has_covariance ? std::sqrt(std::max(0.0, report.fit.covariance(j, j)))
                                    : std::numeric_limits<double>::quiet_NaN();
      out << report.coefficient_names[static_cast<std::size_t>(j)] << ","
          << format_g17(report.fit.delta[j]) << "," << format_g17(se);
      for (IntervalMethod method : methods) {
        const auto it =
            std::find_if(report.intervals.begin(), report.intervals.end(),
                         [&](const IntervalEstimate& e) {
                           return e.method == method && e.coefficient == j;
                         });
        const bool significant = it->lower > 0.0 || it->upper < 0.0;
        out << "," << format_g17(it->lower) << "," << format_g17(it->upper) << ","
            << (significant ? 1 : 0);
      }
      out << "\n";
    }
    report.files.push_back(path);
  }

  // residuals.csv
  {
    const std::filesystem::path path = out_dir / "residuals.csv";
    Eigen::MatrixXd table(spec.n(), 8);
    table.col(0) = Eigen::VectorXd::LinSpaced(spec.n(), 1, static_cast<double>(spec.n()));
    table.col(1) = spec.t;
    table.col(2) = report.residual_set.fitted_theta;
    table.col(3) = report.residual_set.fitted_alpha;
    table.col(4) = report.residual_set.gcs;
    table.col(5) = report.residual_set.rq;
    table.col(6) = report.residual_set.u;
    table.col(7) = raw.matrix();
    write_csv(path, {"index", "t", "fitted_theta", "fitted_alpha", "gcs", "rq", "u", "raw"},
              table);
    report.files.push_back(path);
  }

  // envelope_<kind>.csv
  for (const auto& [kind, band] : report.envelopes) {
    const std::filesystem::path path =
        out_dir / (std::string("envelope_") + residual_kind_name(kind) + ".csv");
    Eigen::MatrixXd table(band.observed.size(), 6);
    table.col(0) = Eigen::VectorXd::LinSpaced(band.observed.size(), 1,
                                              static_cast<double>(band.observed.size()));
    table.col(1) = band.observed;
    table.col(2) = band.theoretical;
    table.col(3) = band.lo;
    table.col(4) = band.median;
    table.col(5) = band.hi;
    write_csv(path, {"index", "residual", "theoretical_quantile", "lo", "median", "hi"},
              table);
    report.files.push_back(path);
  }

  // manifest.txt
  {
    const std::filesystem::path path = out_dir / "manifest.txt";
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << "version = " << kVersion << "\n";
    out << "response = " << config.response << "\n";
    out << "theta_covariates = ";
    for (std::size_t j = 0; j < config.theta_covariates.size(); ++j) {
      out << (j ? ", " : "") << config.theta_covariates[j];
    }
    out << "\n";
    out << "alpha_covariates = ";
    for (std::size_t j = 0; j < config.alpha_covariates.size(); ++j) {
      out << (j ? ", " : "") << config.alpha_covariates[j];
    }
    out << "\n";
    out << "theta_link = " << config.theta_link << "\n";
    out << "alpha_link = " << config.alpha_link << "\n";
    out << "ci = ";
    for (std::size_t j = 0; j < config.ci_methods.size(); ++j) {
      out << (j ? ", " : "") << config.ci_methods[j];
    }
    out << "\n";
    out << "level = " << format_g17(config.level) << "\n";
    out << "bootstrap = " << config.bootstrap << "\n";
    out << "envelope = " << config.envelope << "\n";
    out << "seed = " << config.seed << "\n";
    out << "n = " << spec.n() << "\n";
    out << "loglik = " << format_g17(report.fit.loglik) << "\n";
    out << "converged = " << (report.fit.converged ? 1 : 0) << "\n";
    out << "iterations = " << report.fit.iterations << "\n";
    out << "gradient_norm = " << format_g17(report.fit.gradient_norm) << "\n";
    out << "bootstrap_failures = " << run.failures << "\n";
    out << "survival_clamped = " << report.residual_set.clamped << "\n";
    for (const auto& [lags, lb] : report.serial_tests) {
      out << "ljung_box_" << lags << " = " << format_g17(lb.statistic) << ", "
          << format_g17(lb.p_value) << "\n";
    }
    report.files.push_back(path);
  }

  return report;
}

SyntheticTruth synthetic_application_truth() {
  SyntheticTruth truth;
  truth.beta.resize(5);
  truth.beta << 5.0, 0.3, -0.2, 0.15, -0.4;
  truth.rho.resize(3);
  truth.rho << -0.9, 0.25, -0.3;
  return truth;
}

Dataset synthetic_application_data(std::uint64_t seed, Eigen::Index n) {
  const SyntheticTruth truth = synthetic_application_truth();
  RngStream stream(seed);
  Dataset data;
  data.columns = {"evaporation", "x1", "x2", "x3", "x4"};
  data.values.resize(n, 5);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::VectorXd x(5), w(3);
    x[0] = 1.0;
    for (int j = 1; j <= 4; ++j) x[j] = 2.0 * stream.uniform() - 1.0;
    w << 1.0, x[2], x[3];
    const double theta = std::exp(x.dot(truth.beta));
    const double alpha = std::exp(w.dot(truth.rho));
    data.values(i, 0) = sample_one(LbsParams(alpha, theta), stream);
    data.values(i, 1) = x[1];
    data.values(i, 2) = x[2];
    data.values(i, 3) = x[3];
    data.values(i, 4) = x[4];
  }
  return data;
}

ModelConfig synthetic_application_config() {
  ModelConfig config;
  config.response = "evaporation";
  config.theta_covariates = {"x1", "x2", "x3", "x4"};
  config.alpha_covariates = {"x2", "x3"};
  return config;
}

}  // namespace lbs
