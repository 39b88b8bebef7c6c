#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "evidenza/rng.hpp"
#include "evidenza/special.hpp"

namespace evidenza {

using Point = std::vector<double>;

struct ModelTruth {
  enum class Provenance { analytic, quoted };
  LogValue log_Z;
  Provenance provenance = Provenance::analytic;
};

/// Sampling distribution g for importance sampling.
struct Proposal {
  std::function<Point(SeededStream&)> sample;
  std::function<double(std::span<const double>)> log_density;
};

/// A prior, a likelihood and the constrained prior p(x | L(x) > y).
///
/// Likelihoods are always handled as logs. Implementations are immutable once built and every
/// member is safe to call concurrently; randomness comes only from the caller's stream.
class TargetModel {
 public:
  virtual ~TargetModel() = default;

  virtual std::string_view id() const = 0;
  virtual std::size_t dim() const = 0;

  virtual Point prior_sample(SeededStream& stream) const = 0;
  virtual double log_likelihood(std::span<const double> x) const = 0;

  /// Draw from the prior restricted to {x : log L(x) > log_y}.
  ///
  /// Every draw is checked against the contour before it is returned; a draw that rounds onto
  /// the boundary is redrawn, and UnderflowError is raised if that keeps happening.
  /// Throws EmptyConstraintError when log_y is at or above the likelihood maximum.
  Point constrained_prior_sample(SeededStream& stream, double log_y) const;

  virtual std::optional<double> log_likelihood_max() const { return std::nullopt; }
  virtual std::optional<ModelTruth> truth() const { return std::nullopt; }

  /// Volume variable Z(y) = P(L(X) > y) under the prior, as a probability, given log y.
  virtual std::optional<double> survival(double log_y) const;

  /// Log prior density; only 1-d models with a known density provide it.
  virtual std::optional<double> log_prior_density(double x) const;

  /// True when the prior is U(0,1), i.e. the evidence is an integral over the unit interval.
  virtual bool unit_interval_prior() const { return false; }

  virtual std::optional<Proposal> default_proposal() const { return std::nullopt; }

 protected:
  virtual Point draw_constrained(SeededStream& stream, double log_y) const = 0;
};

/// U(0,1) prior, L(u) = u^2 (1-u)^2, Z = B(3,3) = 1/30.
std::unique_ptr<TargetModel> beta_integrand_model();

/// Exp(1) prior, L(x) = 1/(1+x), Z = e E1(1).
std::unique_ptr<TargetModel> exp_ratio_model();

/// N(mu2, sigma2^2) prior, likelihood phi(x | mu1, sigma1), Z = phi(mu1 | mu2, sqrt(sigma1^2 + sigma2^2)).
std::unique_ptr<TargetModel> gauss_gauss_model(double mu1 = 2.0, double sigma1 = 1.0,
                                               double mu2 = 0.0, double sigma2 = 1.0);

/// N(0, tau^{-1} I_d) prior, L(x) = (1 + x'x/nu)^{-(nu+d)/2}, Z = s^a U(a, b, s) with
/// a = (nu+d)/2, b = nu/2 + 1, s = nu tau / 2.
std::unique_ptr<TargetModel> mvt_gauss_model(std::size_t d = 50, double nu = 2.0,
                                             double tau = 1.0);

/// U(0,1) prior with L identically exp(log_c). Degenerate reference for exactness checks.
std::unique_ptr<TargetModel> constant_model(double log_c);

/// Registry lookup: "beta33", "expratio", "gaussgauss", "mvt", "constant".
/// Throws ConfigError for an unknown id.
std::unique_ptr<TargetModel> make_model(std::string_view id);
std::vector<std::string> model_ids();

}  // namespace evidenza
