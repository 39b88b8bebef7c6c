#include "evidenza/bench.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <thread>

#include "evidenza/error.hpp"

namespace evidenza {
namespace {

const std::vector<std::string> kEstimators = {
    "naive",      "is",         "is-ratio",         "yakowitz", "riemann",
    "riemann-normalized",       "qis",              "qis-simple",
    "nested",     "nested-rect", "nested-trapezoid", "vertical", "vertical-asymptotic"};

bool known(const std::vector<std::string>& ids, const std::string& id) {
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

LogEvidenceEstimate run_importance(const TargetModel& model, const ExperimentConfig& config,
                                   SeededStream& stream) {
  auto proposal = model.default_proposal();
  if (!proposal || model.dim() != 1) {
    throw ConfigError("estimator " + config.estimator_id + " needs a 1-d model with a proposal");
  }
  const LogDensity log_l = [&model](std::span<const double> x) {
    return model.log_likelihood(x);
  };
  const LogDensity log_f = [&model](std::span<const double> x) {
    return *model.log_prior_density(x[0]);
  };
  auto result = importance_sampling(log_l, log_f, *proposal, config.n, stream);
  return config.estimator_id == "is" ? result.standard : result.self_normalized;
}

LogEvidenceEstimate run_yakowitz(const TargetModel& model, const ExperimentConfig& config,
                                 SeededStream& stream) {
  if (!model.unit_interval_prior()) {
    throw ConfigError("yakowitz needs a model with a U(0,1) prior");
  }
  const LogIntegrand log_l = [&model](double u) {
    const double x[] = {u};
    return model.log_likelihood(x);
  };
  return yakowitz_unit(log_l, config.n, stream);
}

}  // namespace

void ExperimentConfig::validate() const {
  if (!known(model_ids(), model_id)) throw ConfigError("unknown model id: " + model_id);
  if (!known(kEstimators, estimator_id)) {
    throw ConfigError("unknown estimator id: " + estimator_id);
  }
  if (m == 0 || n == 0 || n_live == 0 || replicates == 0 || levels == 0 || per_level == 0 ||
      max_iter == 0) {
    throw ConfigError("counts must be at least 1");
  }
  if (!(q > 0.0 && q < 1.0)) throw ConfigError("q must lie in (0,1)");
  if (!(epsilon >= 0.0)) throw ConfigError("epsilon must be non-negative");
}

std::vector<std::string> estimator_ids() { return kEstimators; }

LogEvidenceEstimate run_estimator(const TargetModel& model, const ExperimentConfig& config,
                                  SeededStream& stream) {
  const std::string& id = config.estimator_id;
  if (id == "naive") return naive_mc(model, config.n, stream);
  if (id == "is" || id == "is-ratio") return run_importance(model, config, stream);
  if (id == "yakowitz") return run_yakowitz(model, config, stream);
  if (id == "riemann" || id == "riemann-normalized") {
    if (model.dim() != 1 || !model.log_prior_density(0.5)) {
      throw ConfigError("riemann needs a 1-d model with a prior density");
    }
    return philippe_riemann(model, config.n, stream, id == "riemann-normalized");
  }
  if (id == "qis" || id == "qis-simple") {
    if (config.m < config.n) throw ConfigError("qis needs m >= n");
    return qis(model, config.m, config.n, stream,
               id == "qis" ? GridRule::trapezoid : GridRule::simple);
  }
  if (id == "nested" || id == "nested-rect" || id == "nested-trapezoid") {
    NestedSamplingOptions options;
    options.n_live = config.n_live;
    options.epsilon = config.epsilon;
    options.max_iter = config.max_iter;
    options.rule = id == "nested-trapezoid" ? GridRule::trapezoid : GridRule::simple;
    if (options.n_live < 2) throw ConfigError("nested sampling needs at least two live points");
    return nested_sampling(model, options, stream).estimate;
  }
  if (id == "vertical" || id == "vertical-asymptotic") {
    auto result = vertical_geometric(model, config.q, config.levels, config.per_level, stream);
    return id == "vertical" ? result.simple : result.asymptotic;
  }
  throw ConfigError("unknown estimator id: " + id);
}

double rmse_of(const std::vector<double>& z_hat, double truth) {
  double sum = 0.0;
  for (double z : z_hat) sum += (z - truth) * (z - truth);
  return std::sqrt(sum / static_cast<double>(z_hat.size()));
}

double mape_of(const std::vector<double>& z_hat, double truth) {
  double sum = 0.0;
  for (double z : z_hat) sum += std::abs((z - truth) / truth);
  return sum / static_cast<double>(z_hat.size());
}

ReplicationReport replicate(const ExperimentConfig& config) {
  config.validate();
  const auto model = make_model(config.model_id);

  const std::size_t r = config.replicates;
  std::vector<LogEvidenceEstimate> values(r);
  std::vector<std::exception_ptr> failures(r);

  std::size_t workers = config.threads;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, r);

  auto work = [&](std::size_t first) {
    for (std::size_t j = first; j < r; j += workers) {
      try {
        SeededStream stream(config.seed, j);
        values[j] = run_estimator(*model, config, stream);
      } catch (...) {
        failures[j] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }

  ReplicationReport report;
  report.estimator_id = values.front().estimator_id;
  report.model_id = config.model_id;
  report.m = config.m;
  report.n = config.n;
  report.replicates = r;
  report.master_seed = config.seed;

  std::vector<double> z_hat(r);
  std::transform(values.begin(), values.end(), z_hat.begin(),
                 [](const LogEvidenceEstimate& e) { return e.linear(); });
  report.mean_Z = std::accumulate(z_hat.begin(), z_hat.end(), 0.0) / static_cast<double>(r);
  if (auto truth = model->truth()) {
    report.log_truth = truth->log_Z.log_magnitude;
    const double z = truth->log_Z.linear();
    report.rmse = rmse_of(z_hat, z);
    report.mape = mape_of(z_hat, z);
  }
  report.values = std::move(values);
  return report;
}

SlopeFit slope_fit(const ExperimentConfig& config, const std::vector<std::size_t>& n_grid) {
  if (n_grid.size() < 3) throw ConfigError("slope fit needs at least three grid entries");
  if (n_grid.front() == 0 || !std::is_sorted(n_grid.begin(), n_grid.end(), std::less_equal<>())) {
    throw ConfigError("slope fit grid must be positive and strictly increasing");
  }
  SlopeFit fit;
  fit.n_grid = n_grid;
  for (std::size_t n : n_grid) {
    ExperimentConfig at_n = config;
    at_n.n = n;
    const auto report = replicate(at_n);
    if (!report.rmse) throw ConfigError("slope fit needs a model with analytic truth");
    fit.rmse.push_back(*report.rmse);
  }

  // An exact estimator leaves only rounding error, which carries no rate.
  const double floor = 1e-12 * make_model(config.model_id)->truth()->log_Z.linear();
  fit.degenerate = std::any_of(fit.rmse.begin(), fit.rmse.end(),
                               [&](double e) { return !(e > floor) || !std::isfinite(e); });
  if (fit.degenerate) return fit;

  const auto k = static_cast<double>(n_grid.size());
  std::vector<double> x(n_grid.size());
  std::vector<double> y(n_grid.size());
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    x[i] = std::log(static_cast<double>(n_grid[i]));
    y[i] = std::log(fit.rmse[i]);
  }
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / k;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / k;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double slope = sxy / sxx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double resid = y[i] - my - slope * (x[i] - mx);
    ssr += resid * resid;
  }
  fit.slope = slope;
  fit.slope_stderr = std::sqrt(ssr / (k - 2.0) / sxx);
  return fit;
}

bool ordering_check(const std::vector<ReplicationReport>& reports) {
  if (reports.size() < 2) throw ConfigError("ordering check needs at least two reports");
  const ReplicationReport* qis_report = nullptr;
  for (const auto& r : reports) {
    if (r.model_id != reports.front().model_id) {
      throw ConfigError("ordering check over different models");
    }
    if (!r.rmse || !r.mape) throw ConfigError("ordering check needs analytic truth");
    if (r.estimator_id == "qis" || r.estimator_id == "qis-simple") qis_report = &r;
  }
  if (!qis_report) throw ConfigError("ordering check needs a qis report");
  return std::all_of(reports.begin(), reports.end(), [&](const ReplicationReport& r) {
    return &r == qis_report || (*qis_report->rmse < *r.rmse && *qis_report->mape < *r.mape);
  });
}

}  // namespace evidenza
