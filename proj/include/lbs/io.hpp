#pragma once

// CSV ingestion, model configuration, summary statistics, and the fit-report
// pipeline that ties regression, intervals and diagnostics together into a
// set of plot-ready output files plus a reproducibility manifest.

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "lbs/diagnostics.hpp"
#include "lbs/inference.hpp"
#include "lbs/regression.hpp"

namespace lbs {

struct Dataset {
  std::vector<std::string> columns;
  Eigen::MatrixXd values;  // n rows, one column per header

  Eigen::Index n() const { return values.rows(); }
  Eigen::Index column_index(const std::string& name) const;  // throws ValidationError
  Eigen::VectorXd column(const std::string& name) const;
};

/// Strict numeric CSV reader: header row, comma separated, locale
/// independent.  Throws IoError with 1-based row/column location on
/// malformed cells, duplicate headers, ragged rows, or an empty file.
Dataset ingest_csv(const std::filesystem::path& path);

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& columns,
               const Eigen::MatrixXd& values);

struct SummaryStats {
  Eigen::Index n = 0;
  double min = 0, median = 0, mean = 0, max = 0, sd = 0, cv_pct = 0;
  double cs = 0, ck_excess = 0;  // kurtosis reported as excess here
  bool degenerate = false;       // constant column: cs/ck undefined
};

SummaryStats summarize(const Dataset& data, const std::string& column);

struct ModelConfig {
  std::string response;
  std::vector<std::string> theta_covariates;  // intercept is implicit
  std::vector<std::string> alpha_covariates;
  std::string theta_link = "log";
  std::string alpha_link = "log";
  std::vector<std::string> ci_methods = {"aci"};
  double level = 0.95;
  int bootstrap = 500;
  int envelope = 100;
  std::uint64_t seed = 1;
};

/// Flat key = value file; list values are comma separated; '#' comments.
ModelConfig parse_model_config(const std::filesystem::path& path);

RegressionSpec build_spec(const ModelConfig& config, const Dataset& data);

std::vector<std::string> coefficient_labels(const ModelConfig& config);

struct FitReport {
  FitResult fit;
  std::vector<std::string> coefficient_names;
  std::vector<IntervalEstimate> intervals;
  ResidualSet residual_set;
  std::vector<std::pair<ResidualKind, EnvelopeBand>> envelopes;
  std::vector<std::pair<int, LjungBoxResult>> serial_tests;  // (lags, result)
  std::vector<std::filesystem::path> files;
};

/// Runs the full pipeline and writes coefficients.csv, residuals.csv,
/// envelope_<kind>.csv and manifest.txt under out_dir.
FitReport fit_report(const ModelConfig& config, const Dataset& data,
                     const std::filesystem::path& out_dir, int threads = 1);

struct SyntheticTruth {
  Eigen::VectorXd beta;  // intercept + x1..x4
  Eigen::VectorXd rho;   // intercept + x2, x3
};

SyntheticTruth synthetic_application_truth();

/// Synthetic stand-in for the meteorological application: n rows with
/// covariates x1..x4 ~ Uniform(-1,1) and response drawn from the same model
/// shape (five theta coefficients, three alpha coefficients).
Dataset synthetic_application_data(std::uint64_t seed, Eigen::Index n = 70);

/// The model configuration matching synthetic_application_data.
ModelConfig synthetic_application_config();

}  // namespace lbs
