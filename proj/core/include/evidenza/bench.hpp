#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "evidenza/estimators.hpp"
#include "evidenza/models.hpp"

namespace evidenza {

enum class OutputFormat { csv, json };

/// One experiment: a model, an estimator, its budget and the replication settings.
///
/// Estimator ids: naive, is, is-ratio, yakowitz, riemann, riemann-normalized, qis, qis-simple,
/// nested (alias of nested-rect), nested-rect, nested-trapezoid, vertical, vertical-asymptotic.
struct ExperimentConfig {
  std::string model_id = "gaussgauss";
  std::string estimator_id = "qis";
  std::size_t m = 1000;        // prior draws behind Lambda_hat
  std::size_t n = 20;          // grid points or plain Monte Carlo draws
  std::size_t n_live = 20;
  double q = 0.9;
  double epsilon = 1e-4;
  std::size_t replicates = 100;
  std::uint64_t seed = 20240917;
  OutputFormat output_format = OutputFormat::csv;
  std::string output_path;     // empty: standard output
  std::size_t levels = 200;    // vertical ladder depth N
  std::size_t per_level = 100; // constrained draws per ladder level
  std::size_t max_iter = 100000;
  std::size_t threads = 0;     // 0: hardware concurrency

  /// Throws ConfigError on unknown ids, zero counts or q outside (0,1).
  void validate() const;
};

std::vector<std::string> estimator_ids();

/// One run of the configured estimator on `model`, drawing from `stream`.
LogEvidenceEstimate run_estimator(const TargetModel& model, const ExperimentConfig& config,
                                  SeededStream& stream);

struct ReplicationReport {
  std::string estimator_id;
  std::string model_id;
  std::size_t m = 0;
  std::size_t n = 0;
  std::size_t replicates = 0;
  std::uint64_t master_seed = 0;
  std::optional<double> log_truth;
  double mean_Z = 0.0;
  /// Present only when the model has an analytic truth.
  std::optional<double> rmse;
  std::optional<double> mape;
  std::vector<LogEvidenceEstimate> values;  // indexed by replicate
};

/// Runs config.replicates independent estimates. Replicate j draws from SeededStream(seed, j), so
/// the report does not depend on the thread count.
ReplicationReport replicate(const ExperimentConfig& config);

/// RMSE and MAPE of linear-scale estimates against exp(log_truth).
double rmse_of(const std::vector<double>& z_hat, double truth);
double mape_of(const std::vector<double>& z_hat, double truth);

struct SlopeFit {
  std::vector<std::size_t> n_grid;
  std::vector<double> rmse;
  /// Least-squares slope of log rmse on log n, absent when any rmse is at rounding level
  /// (below 1e-12 Z) or not finite.
  std::optional<double> slope;
  std::optional<double> slope_stderr;
  bool degenerate = false;
};

/// Replicates `config` at every n in the grid (overriding config.n) and fits the log-log slope.
/// The grid must hold at least three strictly increasing entries.
SlopeFit slope_fit(const ExperimentConfig& config, const std::vector<std::size_t>& n_grid);

/// True iff the QIS report (qis or qis-simple) has the strictly smallest RMSE and MAPE.
/// Throws ConfigError for fewer than two reports, mixed models, no QIS report or missing truth.
bool ordering_check(const std::vector<ReplicationReport>& reports);

}  // namespace evidenza
