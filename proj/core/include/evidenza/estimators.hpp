#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "evidenza/models.hpp"
#include "evidenza/rng.hpp"
#include "evidenza/special.hpp"

namespace evidenza {

enum class GridRule { simple, trapezoid };

struct Budget {
  std::size_t m = 0;           // prior draws
  std::size_t n = 0;           // grid points, draws or live points
  std::size_t iterations = 0;  // nested sampling iterations / ladder levels
};

/// Log-scale sandwich lower <= Z_hat <= upper.
struct Bounds {
  double log_lower = 0.0;
  double log_upper = 0.0;
};

/// Abscissae (with the 0 and 1 endpoints) and log-ordinates a QIS estimate was built from.
struct QuadratureGrid {
  std::vector<double> u;
  std::vector<double> log_lambda;
};

struct LogEvidenceEstimate {
  LogValue log_Z;
  std::string estimator_id;
  Budget budget;
  std::optional<Bounds> bounds;
  std::optional<QuadratureGrid> grid;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
  /// Set when an iterative estimator stopped on max_iter rather than its stopping rule.
  bool max_iter_reached = false;

  double linear() const { return log_Z.linear(); }
};

/// Log-likelihood ordinates sorted descending, with the empirical pseudo-inverse
///   Lambda_hat(u) = y_(ceil(m u)),  Lambda_hat(0) = max,  Lambda_hat(1) = min.
/// Ties keep draw order.
class OrderedOrdinates {
 public:
  explicit OrderedOrdinates(std::vector<double> log_y);

  double lookup(double u) const;
  double max() const { return log_y_desc_.front(); }
  double min() const { return log_y_desc_.back(); }
  std::size_t size() const { return log_y_desc_.size(); }
  std::span<const double> values() const { return log_y_desc_; }

 private:
  std::vector<double> log_y_desc_;
};

using LogIntegrand = std::function<double(double)>;
using LogDensity = std::function<double(std::span<const double>)>;

/// log( (1/n) sum L(x_i) ), x_i from the prior.
LogEvidenceEstimate naive_mc(const TargetModel& model, std::size_t n, SeededStream& stream);

struct ImportanceSamplingResult {
  LogEvidenceEstimate standard;         // (1/n) sum L f / g
  LogEvidenceEstimate self_normalized;  // sum L w / sum w,  w = f / g
};

/// Importance sampling of int L f with draws from the proposal g.
/// Throws DomainError when every weight is zero.
ImportanceSamplingResult importance_sampling(const LogDensity& log_l, const LogDensity& log_f,
                                             const Proposal& proposal, std::size_t n,
                                             SeededStream& stream);

/// Trapezoid rule over n sorted uniforms augmented with 0 and 1, for int_0^1 L(u) du.
LogEvidenceEstimate yakowitz_unit(const LogIntegrand& log_l, std::size_t n, SeededStream& stream);

/// Riemann sum over sorted prior draws: sum_{i<n} L(x_(i)) p(x_(i)) (x_(i+1) - x_(i)).
/// With `normalized`, divides by sum p(x_(i)) (x_(i+1) - x_(i)) so p may be unnormalized.
/// Requires a 1-d model exposing log_prior_density.
LogEvidenceEstimate philippe_riemann(const TargetModel& model, std::size_t n,
                                     SeededStream& stream, bool normalized = false);

/// Quadrature of Lambda_hat at the given abscissae (sorted, in (0,1), endpoints not included).
/// The result carries its grid and the bracketing bounds.
LogEvidenceEstimate qis_from_ordinates(const OrderedOrdinates& ordinates,
                                       std::span<const double> sorted_u, GridRule rule);

/// Quantile importance sampling: m prior draws give Lambda_hat, n sorted uniforms give the grid.
/// Throws DomainError when m < n or n == 0.
LogEvidenceEstimate qis(const TargetModel& model, std::size_t m, std::size_t n,
                        SeededStream& stream, GridRule rule = GridRule::trapezoid);

/// Bounds of a QIS estimate:
///   sum_{i=1}^{n} (U_i - U_{i-1}) Lambda(U_i)
///     <= Z_hat <=
///   sum_{i=1}^{n} (U_{i+1} - U_i) Lambda(U_i) + U_1 Lambda_max.
/// Throws DomainError when the estimate has no retained grid.
Bounds qis_bounds(const LogEvidenceEstimate& estimate);

struct NestedSamplingOptions {
  std::size_t n_live = 20;
  /// Stop once max live L * X_i <= epsilon * Z_accumulated. Zero disables the rule.
  double epsilon = 1e-4;
  std::size_t max_iter = 100000;
  GridRule rule = GridRule::simple;
};

struct NestedSamplingRun {
  LogEvidenceEstimate estimate;
  std::vector<double> discarded_log_l;
  /// log of L_i * dX_i / Z for each discarded point.
  std::vector<double> log_weights;
  double log_final_volume = 0.0;  // log X_I
  /// sum_i dX_i, accumulated in linear scale.
  double accumulated_volume = 0.0;
  std::size_t iterations = 0;
  /// The constrained sampler could not go above the current contour (flat likelihood top).
  bool plateau_reached = false;
};

/// Nested sampling with deterministic compression t = exp(-1/n_live) on the grid
/// X_i = exp(-i/n_live), widths dX_i = X_{i-1} - X_i, and the remainder
/// X_I * mean(live L) added at the end.
NestedSamplingRun nested_sampling(const TargetModel& model, const NestedSamplingOptions& options,
                                  SeededStream& stream);

struct LorenzPoint {
  std::size_t level = 0;
  double s = 1.0;  // q^k
  double log_L = 0.0;
};

struct VerticalResult {
  LogEvidenceEstimate simple;      // sum_k q^k (L_k - L_{k-1})
  LogEvidenceEstimate asymptotic;  // (1-q) sum_k q^k L_k, truncated at N
  std::vector<LorenzPoint> trace;  // k = 0..N
  /// log of q^{N+1} L_N, the truncation bound of the asymptotic sum.
  double log_tail_bound = 0.0;
  /// First level at which the ladder stopped rising, if it did.
  std::optional<std::size_t> plateau_level;
};

/// Geometric likelihood ladder L_0 = 0 < L_1 < ... with L_{k+1} the empirical (1-q)-quantile of
/// L over m_per_level draws from the prior constrained to L > L_k. Once the sampler cannot rise
/// any further the ladder stays flat.
VerticalResult vertical_geometric(const TargetModel& model, double q, std::size_t levels,
                                  std::size_t m_per_level, SeededStream& stream);

}  // namespace evidenza
