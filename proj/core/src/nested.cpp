#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <numbers>

#include "evidenza/error.hpp"
#include "evidenza/estimators.hpp"

namespace evidenza {

NestedSamplingRun nested_sampling(const TargetModel& model, const NestedSamplingOptions& options,
                                  SeededStream& stream) {
  if (options.n_live < 2) throw DomainError("nested_sampling: need at least two live points");
  if (!(options.epsilon >= 0.0)) throw DomainError("nested_sampling: epsilon must be >= 0");
  if (options.max_iter == 0) throw DomainError("nested_sampling: max_iter must be positive");

  const std::size_t n_live = options.n_live;
  std::vector<Point> live(n_live);
  std::vector<double> live_l(n_live);
  for (std::size_t i = 0; i < n_live; ++i) {
    live[i] = model.prior_sample(stream);
    live_l[i] = model.log_likelihood(live[i]);
  }

  const double n = static_cast<double>(n_live);
  const double log_one_minus_t = std::log(-std::expm1(-1.0 / n));
  const double log_eps = std::log(options.epsilon);

  NestedSamplingRun run;
  std::vector<double> log_dx;
  double log_z = -std::numeric_limits<double>::infinity();
  double log_x = 0.0;
  double prev_l = 0.0;
  bool stopped = false;

  while (run.iterations < options.max_iter) {
    ++run.iterations;
    const auto worst = static_cast<std::size_t>(
        std::distance(live_l.begin(), std::min_element(live_l.begin(), live_l.end())));
    const double l_star = live_l[worst];

    // dX_i = X_{i-1} - X_i = (1 - t) X_{i-1}
    const double ldx = log_x + log_one_minus_t;
    double contribution = l_star + ldx;
    if (options.rule == GridRule::trapezoid) {
      // The first panel borrows L_1 for its left edge (Lambda(1) is the lowest ordinate seen).
      const double left = run.iterations == 1 ? l_star : prev_l;
      const double pair[] = {left, l_star};
      contribution = ldx + log_sum_exp(pair) - std::numbers::ln2;
    }
    const double acc[] = {log_z, contribution};
    log_z = log_sum_exp(acc);
    run.discarded_log_l.push_back(l_star);
    log_dx.push_back(ldx);
    run.accumulated_volume += std::exp(ldx);
    prev_l = l_star;
    log_x = -static_cast<double>(run.iterations) / n;

    try {
      live[worst] = model.constrained_prior_sample(stream, l_star);
      live_l[worst] = model.log_likelihood(live[worst]);
    } catch (const EmptyConstraintError&) {
      // Every live point already sits on the likelihood maximum.
      live.erase(live.begin() + static_cast<std::ptrdiff_t>(worst));
      live_l.erase(live_l.begin() + static_cast<std::ptrdiff_t>(worst));
      run.plateau_reached = true;
      stopped = true;
      break;
    }

    const double max_live = *std::max_element(live_l.begin(), live_l.end());
    if (options.epsilon > 0.0 && max_live + log_x <= log_eps + log_z) {
      stopped = true;
      break;
    }
  }

  // Remainder: X_I times the mean live likelihood.
  const double remainder =
      log_x + log_sum_exp(live_l) - std::log(static_cast<double>(live_l.size()));
  const double total[] = {log_z, remainder};
  log_z = log_sum_exp(total);

  run.log_final_volume = log_x;
  run.log_weights.resize(log_dx.size());
  for (std::size_t i = 0; i < log_dx.size(); ++i) {
    run.log_weights[i] = run.discarded_log_l[i] + log_dx[i] - log_z;
  }

  auto& est = run.estimate;
  est.estimator_id = options.rule == GridRule::simple ? "nested-rect" : "nested-trapezoid";
  est.log_Z = {log_z};
  est.budget = {0, n_live, run.iterations};
  est.max_iter_reached = !stopped;
  est.seed = stream.seed();
  est.stream_id = stream.stream_id();
  return run;
}

}  // namespace evidenza
