#pragma once

#include <ostream>
#include <string>
#include <string_view>

#include "evidenza/bench.hpp"

namespace evidenza {

/// %.17g, which round-trips every double.
std::string format_number(double value);

/// Columns replicate_index,estimator,model,m,n,seed,z_hat,log_z_hat,abs_rel_err followed by the
/// summary rows mean, rmse and mape (value in the z_hat column).
void write_csv(const ReplicationReport& report, std::ostream& out);
std::string report_json(const ReplicationReport& report);

std::string estimate_json(const LogEvidenceEstimate& estimate, std::string_view model_id);

std::string slope_fit_json(const SlopeFit& fit, const ExperimentConfig& config);
/// Columns n,rmse.
void write_slope_csv(const SlopeFit& fit, std::ostream& out);

/// Columns level,s,L_k,log_L_k followed by the summary rows z_simple and z_asymptotic.
void write_lorenz_csv(const VerticalResult& result, std::ostream& out);

/// ExperimentConfig as JSON using its field names, and back. Absent fields keep their defaults.
std::string config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(std::string_view text, ExperimentConfig base = {});

}  // namespace evidenza
