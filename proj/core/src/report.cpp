#include "evidenza/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "evidenza/error.hpp"

namespace evidenza {
namespace {

using nlohmann::json;

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json optional_number(const std::optional<double>& v) {
  return v ? number_or_null(*v) : json(nullptr);
}

json budget_json(const Budget& b) {
  return {{"m", b.m}, {"n", b.n}, {"iterations", b.iterations}};
}

}  // namespace

std::string format_number(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_csv(const ReplicationReport& report, std::ostream& out) {
  out << "replicate_index,estimator,model,m,n,seed,z_hat,log_z_hat,abs_rel_err\n";
  const auto prefix = [&](std::string_view first) {
    out << first << ',' << report.estimator_id << ',' << report.model_id << ',' << report.m << ','
        << report.n << ',' << report.master_seed << ',';
  };
  for (std::size_t j = 0; j < report.values.size(); ++j) {
    const auto& v = report.values[j];
    prefix(std::to_string(j));
    out << format_number(v.linear()) << ',' << format_number(v.log_Z.log_magnitude) << ',';
    if (report.log_truth) {
      out << format_number(std::abs(std::expm1(v.log_Z.log_magnitude - *report.log_truth)));
    }
    out << '\n';
  }
  const auto summary = [&](std::string_view name, const std::optional<double>& value) {
    prefix(name);
    if (value) out << format_number(*value);
    out << ",,\n";
  };
  summary("mean", report.mean_Z);
  summary("rmse", report.rmse);
  summary("mape", report.mape);
}

std::string report_json(const ReplicationReport& report) {
  json values = json::array();
  for (const auto& v : report.values) values.push_back(number_or_null(v.log_Z.log_magnitude));
  json j = {{"estimator", report.estimator_id},
            {"model", report.model_id},
            {"m", report.m},
            {"n", report.n},
            {"replicates", report.replicates},
            {"seed", report.master_seed},
            {"log_truth", optional_number(report.log_truth)},
            {"mean_Z", number_or_null(report.mean_Z)},
            {"rmse", optional_number(report.rmse)},
            {"mape", optional_number(report.mape)},
            {"log_z_hat", values}};
  return j.dump(2);
}

std::string estimate_json(const LogEvidenceEstimate& estimate, std::string_view model_id) {
  json j = {{"model", model_id},
            {"estimator", estimate.estimator_id},
            {"log_Z", number_or_null(estimate.log_Z.log_magnitude)},
            {"Z", format_number(estimate.linear())},
            {"seed", estimate.seed},
            {"stream_id", estimate.stream_id},
            {"budget", budget_json(estimate.budget)}};
  if (estimate.bounds) {
    j["bounds"] = {{"log_lower", number_or_null(estimate.bounds->log_lower)},
                   {"log_upper", number_or_null(estimate.bounds->log_upper)}};
  }
  if (estimate.max_iter_reached) j["max_iter_reached"] = true;
  return j.dump(2);
}

std::string slope_fit_json(const SlopeFit& fit, const ExperimentConfig& config) {
  json rows = json::array();
  for (std::size_t i = 0; i < fit.n_grid.size(); ++i) {
    rows.push_back({{"n", fit.n_grid[i]}, {"rmse", number_or_null(fit.rmse[i])}});
  }
  json j = {{"model", config.model_id},
            {"estimator", config.estimator_id},
            {"replicates", config.replicates},
            {"seed", config.seed},
            {"grid", rows},
            {"slope", optional_number(fit.slope)},
            {"slope_stderr", optional_number(fit.slope_stderr)},
            {"degenerate", fit.degenerate}};
  return j.dump(2);
}

void write_slope_csv(const SlopeFit& fit, std::ostream& out) {
  out << "n,rmse\n";
  for (std::size_t i = 0; i < fit.n_grid.size(); ++i) {
    out << fit.n_grid[i] << ',' << format_number(fit.rmse[i]) << '\n';
  }
}

void write_lorenz_csv(const VerticalResult& result, std::ostream& out) {
  out << "level,s,L_k,log_L_k\n";
  for (const auto& p : result.trace) {
    out << p.level << ',' << format_number(p.s) << ',' << format_number(std::exp(p.log_L)) << ','
        << format_number(p.log_L) << '\n';
  }
  out << "z_simple,," << format_number(result.simple.linear()) << ','
      << format_number(result.simple.log_Z.log_magnitude) << '\n';
  out << "z_asymptotic,," << format_number(result.asymptotic.linear()) << ','
      << format_number(result.asymptotic.log_Z.log_magnitude) << '\n';
}

std::string config_to_json(const ExperimentConfig& c) {
  json j = {{"model_id", c.model_id},
            {"estimator_id", c.estimator_id},
            {"m", c.m},
            {"n", c.n},
            {"n_live", c.n_live},
            {"q", c.q},
            {"epsilon", c.epsilon},
            {"replicates", c.replicates},
            {"seed", c.seed},
            {"output_format", c.output_format == OutputFormat::csv ? "csv" : "json"},
            {"output_path", c.output_path},
            {"levels", c.levels},
            {"per_level", c.per_level},
            {"max_iter", c.max_iter},
            {"threads", c.threads}};
  return j.dump(2);
}

ExperimentConfig config_from_json(std::string_view text, ExperimentConfig base) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");

  const auto read = [&](const char* key, auto& field) {
    if (!j.contains(key)) return;
    try {
      j.at(key).get_to(field);
    } catch (const json::exception&) {
      throw ConfigError(std::string("config field has the wrong type: ") + key);
    }
  };
  read("model_id", base.model_id);
  read("estimator_id", base.estimator_id);
  read("m", base.m);
  read("n", base.n);
  read("n_live", base.n_live);
  read("q", base.q);
  read("epsilon", base.epsilon);
  read("replicates", base.replicates);
  read("seed", base.seed);
  read("output_path", base.output_path);
  read("levels", base.levels);
  read("per_level", base.per_level);
  read("max_iter", base.max_iter);
  read("threads", base.threads);
  if (j.contains("output_format")) {
    std::string format;
    read("output_format", format);
    if (format == "csv") {
      base.output_format = OutputFormat::csv;
    } else if (format == "json") {
      base.output_format = OutputFormat::json;
    } else {
      throw ConfigError("output_format must be csv or json");
    }
  }
  for (const auto& item : j.items()) {
    static const char* const kKnown[] = {"model_id", "estimator_id", "m", "n", "n_live", "q",
                                         "epsilon", "replicates", "seed", "output_format",
                                         "output_path", "levels", "per_level", "max_iter",
                                         "threads"};
    if (std::find(std::begin(kKnown), std::end(kKnown), item.key()) == std::end(kKnown)) {
      throw ConfigError("unknown config field: " + item.key());
    }
  }
  return base;
}

}  // namespace evidenza
