#include "evidenza/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "evidenza/error.hpp"

namespace evidenza {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void stamp(LogEvidenceEstimate& est, const SeededStream& stream) {
  est.seed = stream.seed();
  est.stream_id = stream.stream_id();
}

}  // namespace

OrderedOrdinates::OrderedOrdinates(std::vector<double> log_y) : log_y_desc_(std::move(log_y)) {
  if (log_y_desc_.empty()) throw DomainError("OrderedOrdinates: no ordinates");
  std::stable_sort(log_y_desc_.begin(), log_y_desc_.end(), std::greater<>{});
}

double OrderedOrdinates::lookup(double u) const {
  if (u <= 0.0) return max();
  if (u >= 1.0) return min();
  const auto m = log_y_desc_.size();
  auto idx = static_cast<std::size_t>(std::ceil(static_cast<double>(m) * u));
  idx = std::clamp<std::size_t>(idx, 1, m);
  return log_y_desc_[idx - 1];
}

LogEvidenceEstimate naive_mc(const TargetModel& model, std::size_t n, SeededStream& stream) {
  if (n == 0) throw DomainError("naive_mc: n must be positive");
  std::vector<double> log_l(n);
  for (auto& v : log_l) v = model.log_likelihood(model.prior_sample(stream));

  LogEvidenceEstimate est;
  est.estimator_id = "naive";
  est.log_Z = {log_sum_exp(log_l) - std::log(static_cast<double>(n))};
  est.budget = {n, n, 0};
  stamp(est, stream);
  return est;
}

ImportanceSamplingResult importance_sampling(const LogDensity& log_l, const LogDensity& log_f,
                                             const Proposal& proposal, std::size_t n,
                                             SeededStream& stream) {
  if (n == 0) throw DomainError("importance_sampling: n must be positive");
  std::vector<double> log_w(n);
  std::vector<double> log_lw(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Point x = proposal.sample(stream);
    log_w[i] = log_f(x) - proposal.log_density(x);
    log_lw[i] = log_l(x) + log_w[i];
  }
  const double log_wsum = log_sum_exp(log_w);
  if (log_wsum == -kInf) throw DomainError("importance_sampling: all importance weights are zero");

  const double log_total = log_sum_exp(log_lw);
  ImportanceSamplingResult out;
  out.standard.estimator_id = "is";
  out.standard.log_Z = {log_total - std::log(static_cast<double>(n))};
  out.standard.budget = {n, n, 0};
  stamp(out.standard, stream);

  out.self_normalized = out.standard;
  out.self_normalized.estimator_id = "is-ratio";
  out.self_normalized.log_Z = {log_total - log_wsum};
  return out;
}

LogEvidenceEstimate yakowitz_unit(const LogIntegrand& log_l, std::size_t n, SeededStream& stream) {
  if (n == 0) throw DomainError("yakowitz_unit: n must be positive");
  std::vector<double> u = sorted_uniforms(stream, n);
  u.insert(u.begin(), 0.0);
  u.push_back(1.0);

  std::vector<double> heights(u.size());
  std::transform(u.begin(), u.end(), heights.begin(), log_l);

  std::vector<double> widths(n + 1);
  for (std::size_t i = 0; i <= n; ++i) widths[i] = u[i + 1] - u[i];

  LogEvidenceEstimate est;
  est.estimator_id = "yakowitz";
  est.log_Z = log_trapezoid(widths, std::span(heights).first(n + 1),
                            std::span(heights).subspan(1));
  est.budget = {0, n, 0};
  stamp(est, stream);
  return est;
}

LogEvidenceEstimate philippe_riemann(const TargetModel& model, std::size_t n,
                                     SeededStream& stream, bool normalized) {
  if (model.dim() != 1) throw DomainError("philippe_riemann: model must be 1-dimensional");
  if (!model.log_prior_density(0.0)) {
    throw DomainError("philippe_riemann: model does not expose a prior density");
  }
  if (n < 2) throw DomainError("philippe_riemann: need at least two draws");

  std::vector<double> x(n);
  for (auto& xi : x) xi = model.prior_sample(stream)[0];
  std::sort(x.begin(), x.end());

  std::vector<double> numer;
  std::vector<double> denom;
  numer.reserve(n - 1);
  denom.reserve(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double log_gap = std::log(x[i + 1] - x[i]);
    const double log_p = *model.log_prior_density(x[i]);
    const double xi[] = {x[i]};
    numer.push_back(model.log_likelihood(xi) + log_p + log_gap);
    denom.push_back(log_p + log_gap);
  }

  LogEvidenceEstimate est;
  est.estimator_id = normalized ? "riemann-normalized" : "riemann";
  double log_z = log_sum_exp(numer);
  if (normalized) log_z -= log_sum_exp(denom);
  est.log_Z = {log_z};
  est.budget = {n, n, 0};
  stamp(est, stream);
  return est;
}

LogEvidenceEstimate qis_from_ordinates(const OrderedOrdinates& ordinates,
                                       std::span<const double> sorted_u, GridRule rule) {
  const std::size_t n = sorted_u.size();
  if (n == 0) throw DomainError("qis: need at least one grid point");

  QuadratureGrid grid;
  grid.u.reserve(n + 2);
  grid.log_lambda.reserve(n + 2);
  grid.u.push_back(0.0);
  grid.log_lambda.push_back(ordinates.max());
  for (double u : sorted_u) {
    grid.u.push_back(u);
    grid.log_lambda.push_back(ordinates.lookup(u));
  }
  grid.u.push_back(1.0);
  grid.log_lambda.push_back(ordinates.min());

  LogEvidenceEstimate est;
  if (rule == GridRule::trapezoid) {
    std::vector<double> widths(n + 1);
    for (std::size_t i = 1; i <= n + 1; ++i) widths[i - 1] = grid.u[i] - grid.u[i - 1];
    const std::span<const double> lam(grid.log_lambda);
    est.log_Z = log_trapezoid(widths, lam.first(n + 1), lam.subspan(1));
    est.estimator_id = "qis";
  } else {
    std::vector<double> terms(n);
    for (std::size_t i = 1; i <= n; ++i) {
      terms[i - 1] = std::log(grid.u[i] - grid.u[i - 1]) + grid.log_lambda[i];
    }
    est.log_Z = {log_sum_exp(terms)};
    est.estimator_id = "qis-simple";
  }
  est.budget = {ordinates.size(), n, 0};
  est.grid = std::move(grid);
  est.bounds = qis_bounds(est);
  return est;
}

LogEvidenceEstimate qis(const TargetModel& model, std::size_t m, std::size_t n,
                        SeededStream& stream, GridRule rule) {
  if (n == 0) throw DomainError("qis: n must be positive");
  if (m < n) throw DomainError("qis: need m >= n prior draws");

  std::vector<double> log_y(m);
  for (auto& v : log_y) v = model.log_likelihood(model.prior_sample(stream));
  const OrderedOrdinates ordinates(std::move(log_y));
  const std::vector<double> u = sorted_uniforms(stream, n);

  LogEvidenceEstimate est = qis_from_ordinates(ordinates, u, rule);
  stamp(est, stream);
  return est;
}

Bounds qis_bounds(const LogEvidenceEstimate& estimate) {
  if (!estimate.grid) throw DomainError("qis_bounds: estimate has no retained grid");
  const auto& u = estimate.grid->u;
  const auto& lam = estimate.grid->log_lambda;
  if (u.size() < 3 || u.size() != lam.size()) throw DomainError("qis_bounds: malformed grid");
  const std::size_t n = u.size() - 2;

  std::vector<double> lower(n);
  std::vector<double> upper(n + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    lower[i - 1] = std::log(u[i] - u[i - 1]) + lam[i];
    upper[i - 1] = std::log(u[i + 1] - u[i]) + lam[i];
  }
  upper[n] = std::log(u[1]) + lam[0];
  return {log_sum_exp(lower), log_sum_exp(upper)};
}

}  // namespace evidenza
