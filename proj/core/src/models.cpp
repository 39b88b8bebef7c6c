#include "evidenza/models.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "evidenza/error.hpp"

namespace evidenza {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxRedraws = 64;

double log_normal_pdf(double x, double mu, double sigma) {
  const double z = (x - mu) / sigma;
  return -0.5 * z * z - std::log(sigma) - 0.5 * std::log(2.0 * std::numbers::pi);
}

// P(lo <= Z <= hi) for a standard normal Z, taking differences in the tail where they are exact.
double normal_interval_mass(double lo, double hi) {
  if (lo > 0.0) return std_normal_sf(lo) - std_normal_sf(hi);
  return std_normal_cdf(hi) - std_normal_cdf(lo);
}

void require_scalar(std::span<const double> x) {
  if (x.size() != 1) throw DomainError("model expects a 1-dimensional point");
}

class BetaIntegrandModel final : public TargetModel {
 public:
  std::string_view id() const override { return "beta33"; }
  std::size_t dim() const override { return 1; }

  Point prior_sample(SeededStream& stream) const override { return {uniform01(stream)}; }

  double log_likelihood(std::span<const double> x) const override {
    require_scalar(x);
    const double u = x[0];
    if (!(u > 0.0 && u < 1.0)) return -kInf;
    return 2.0 * std::log(u) + 2.0 * std::log1p(-u);
  }

  std::optional<double> log_likelihood_max() const override { return std::log(1.0 / 16.0); }

  std::optional<ModelTruth> truth() const override {
    return ModelTruth{LogValue{std::log(1.0 / 30.0)}, ModelTruth::Provenance::analytic};
  }

  std::optional<double> log_prior_density(double x) const override {
    return (x >= 0.0 && x <= 1.0) ? 0.0 : -kInf;
  }

  bool unit_interval_prior() const override { return true; }

 protected:
  Point draw_constrained(SeededStream& stream, double log_y) const override {
    if (log_y == -kInf) return prior_sample(stream);
    if (log_y >= *log_likelihood_max()) {
      throw EmptyConstraintError("beta33: contour at or above the likelihood maximum");
    }
    // u(1-u) > sqrt(y)  <=>  u in ((1-r)/2, (1+r)/2),  r = sqrt(1 - 4 sqrt(y))
    const double r = std::sqrt(1.0 - 4.0 * std::exp(0.5 * log_y));
    const double lo = 0.5 * (1.0 - r);
    return {lo + uniform01(stream) * r};
  }
};

class ExpRatioModel final : public TargetModel {
 public:
  std::string_view id() const override { return "expratio"; }
  std::size_t dim() const override { return 1; }

  Point prior_sample(SeededStream& stream) const override { return {exponential1(stream)}; }

  double log_likelihood(std::span<const double> x) const override {
    require_scalar(x);
    return -std::log1p(x[0]);
  }

  std::optional<double> log_likelihood_max() const override { return 0.0; }

  std::optional<ModelTruth> truth() const override {
    return ModelTruth{LogValue{1.0 + std::log(exp_integral_e1(1.0))},
                      ModelTruth::Provenance::analytic};
  }

  std::optional<double> survival(double log_y) const override {
    if (log_y == -kInf) return 1.0;
    if (log_y >= 0.0) return 0.0;
    // 1/(1+X) > y  <=>  X < 1/y - 1
    return -std::expm1(-std::expm1(-log_y));
  }

  std::optional<double> log_prior_density(double x) const override {
    return x >= 0.0 ? -x : -kInf;
  }

  std::optional<Proposal> default_proposal() const override {
    // Exp(1/2): heavier tail than the prior.
    Proposal g;
    g.sample = [](SeededStream& s) { return Point{2.0 * exponential1(s)}; };
    g.log_density = [](std::span<const double> x) {
      return x[0] >= 0.0 ? -std::numbers::ln2 - 0.5 * x[0] : -kInf;
    };
    return g;
  }

 protected:
  Point draw_constrained(SeededStream& stream, double log_y) const override {
    if (log_y == -kInf) return prior_sample(stream);
    if (log_y >= 0.0) {
      throw EmptyConstraintError("expratio: contour at or above the likelihood maximum");
    }
    return {truncated_exponential(stream, std::expm1(-log_y))};
  }
};

class GaussGaussModel final : public TargetModel {
 public:
  GaussGaussModel(double mu1, double sigma1, double mu2, double sigma2)
      : mu1_(mu1), sigma1_(sigma1), mu2_(mu2), sigma2_(sigma2) {
    if (!(sigma1 > 0.0 && sigma2 > 0.0)) {
      throw DomainError("gauss_gauss_model: standard deviations must be positive");
    }
  }

  std::string_view id() const override { return "gaussgauss"; }
  std::size_t dim() const override { return 1; }

  Point prior_sample(SeededStream& stream) const override {
    return {mu2_ + sigma2_ * std_normal(stream)};
  }

  double log_likelihood(std::span<const double> x) const override {
    require_scalar(x);
    return log_normal_pdf(x[0], mu1_, sigma1_);
  }

  std::optional<double> log_likelihood_max() const override { return log_peak(); }

  std::optional<ModelTruth> truth() const override {
    const double spread = std::hypot(sigma1_, sigma2_);
    return ModelTruth{LogValue{log_normal_pdf(mu1_, mu2_, spread)},
                      ModelTruth::Provenance::analytic};
  }

  std::optional<double> survival(double log_y) const override {
    if (log_y == -kInf) return 1.0;
    if (log_y >= log_peak()) return 0.0;
    const double half_width = sigma1_ * zeta(log_y);
    return normal_interval_mass((mu1_ - half_width - mu2_) / sigma2_,
                                (mu1_ + half_width - mu2_) / sigma2_);
  }

  std::optional<double> log_prior_density(double x) const override {
    return log_normal_pdf(x, mu2_, sigma2_);
  }

  std::optional<Proposal> default_proposal() const override {
    // Centred on the posterior mean with the prior's spread.
    const double w1 = 1.0 / (sigma1_ * sigma1_);
    const double w2 = 1.0 / (sigma2_ * sigma2_);
    const double centre = (w1 * mu1_ + w2 * mu2_) / (w1 + w2);
    const double spread = sigma2_;
    Proposal g;
    g.sample = [=](SeededStream& s) { return Point{centre + spread * std_normal(s)}; };
    g.log_density = [=](std::span<const double> x) { return log_normal_pdf(x[0], centre, spread); };
    return g;
  }

 protected:
  Point draw_constrained(SeededStream& stream, double log_y) const override {
    if (log_y == -kInf) return prior_sample(stream);
    if (log_y >= log_peak()) {
      throw EmptyConstraintError("gaussgauss: contour at or above the likelihood maximum");
    }
    const double half_width = sigma1_ * zeta(log_y);
    return {truncated_normal(stream, mu2_, sigma2_, mu1_ - half_width, mu1_ + half_width)};
  }

 private:
  double log_peak() const { return -std::log(sigma1_ * std::sqrt(2.0 * std::numbers::pi)); }
  // Contour half-width in likelihood standard deviations: sqrt(-2 log(y sqrt(2 pi) sigma1)).
  double zeta(double log_y) const { return std::sqrt(-2.0 * (log_y - log_peak())); }

  double mu1_, sigma1_, mu2_, sigma2_;
};

class MvtGaussModel final : public TargetModel {
 public:
  MvtGaussModel(std::size_t d, double nu, double tau) : d_(d), nu_(nu), tau_(tau) {
    if (d == 0) throw DomainError("mvt_gauss_model: dimension must be positive");
    if (!(nu > 0.0 && tau > 0.0)) throw DomainError("mvt_gauss_model: nu and tau must be positive");
    const double a = 0.5 * (nu + static_cast<double>(d));
    const double b = 0.5 * nu + 1.0;
    const double s = 0.5 * nu * tau;
    log_truth_ = a * std::log(s) + kummer_u(a, b, s).log_magnitude;
  }

  std::string_view id() const override { return "mvt"; }
  std::size_t dim() const override { return d_; }

  Point prior_sample(SeededStream& stream) const override {
    Point x(d_);
    const double scale = 1.0 / std::sqrt(tau_);
    for (auto& xi : x) xi = scale * std_normal(stream);
    return x;
  }

  double log_likelihood(std::span<const double> x) const override {
    if (x.size() != d_) throw DomainError("mvt: point has the wrong dimension");
    double r2 = 0.0;
    for (double xi : x) r2 += xi * xi;
    return -exponent() * std::log1p(r2 / nu_);
  }

  std::optional<double> log_likelihood_max() const override { return 0.0; }

  std::optional<ModelTruth> truth() const override {
    return ModelTruth{LogValue{log_truth_}, ModelTruth::Provenance::analytic};
  }

  std::optional<double> survival(double log_y) const override {
    if (log_y == -kInf) return 1.0;
    if (log_y >= 0.0) return 0.0;
    return reg_lower_gamma(0.5 * static_cast<double>(d_), 0.5 * tau_ * radius2(log_y));
  }

 protected:
  Point draw_constrained(SeededStream& stream, double log_y) const override {
    if (log_y == -kInf) return prior_sample(stream);
    if (log_y >= 0.0) {
      throw EmptyConstraintError("mvt: contour at or above the likelihood maximum");
    }
    return gaussian_in_ball(stream, d_, tau_, radius2(log_y));
  }

 private:
  double exponent() const { return 0.5 * (nu_ + static_cast<double>(d_)); }
  // L(x) > y  <=>  x'x < nu (y^{-2/(nu+d)} - 1)
  double radius2(double log_y) const { return nu_ * std::expm1(-log_y / exponent()); }

  std::size_t d_;
  double nu_, tau_;
  double log_truth_ = 0.0;
};

class ConstantModel final : public TargetModel {
 public:
  explicit ConstantModel(double log_c) : log_c_(log_c) {
    if (!std::isfinite(log_c)) throw DomainError("constant_model: log c must be finite");
  }

  std::string_view id() const override { return "constant"; }
  std::size_t dim() const override { return 1; }
  Point prior_sample(SeededStream& stream) const override { return {uniform01(stream)}; }
  double log_likelihood(std::span<const double>) const override { return log_c_; }
  std::optional<double> log_likelihood_max() const override { return log_c_; }
  std::optional<ModelTruth> truth() const override {
    return ModelTruth{LogValue{log_c_}, ModelTruth::Provenance::analytic};
  }
  std::optional<double> survival(double log_y) const override {
    return log_y < log_c_ ? 1.0 : 0.0;
  }
  std::optional<double> log_prior_density(double x) const override {
    return (x >= 0.0 && x <= 1.0) ? 0.0 : -kInf;
  }
  bool unit_interval_prior() const override { return true; }

 protected:
  Point draw_constrained(SeededStream& stream, double log_y) const override {
    if (log_y >= log_c_) throw EmptyConstraintError("constant: likelihood is flat at its maximum");
    return prior_sample(stream);
  }

 private:
  double log_c_;
};

}  // namespace

Point TargetModel::constrained_prior_sample(SeededStream& stream, double log_y) const {
  for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
    Point x = draw_constrained(stream, log_y);
    if (log_likelihood(x) > log_y) return x;
  }
  throw UnderflowError("constrained_prior_sample: contour too tight for double precision");
}

std::optional<double> TargetModel::survival(double) const { return std::nullopt; }

std::optional<double> TargetModel::log_prior_density(double) const { return std::nullopt; }

std::unique_ptr<TargetModel> beta_integrand_model() {
  return std::make_unique<BetaIntegrandModel>();
}

std::unique_ptr<TargetModel> exp_ratio_model() { return std::make_unique<ExpRatioModel>(); }

std::unique_ptr<TargetModel> gauss_gauss_model(double mu1, double sigma1, double mu2,
                                               double sigma2) {
  return std::make_unique<GaussGaussModel>(mu1, sigma1, mu2, sigma2);
}

std::unique_ptr<TargetModel> mvt_gauss_model(std::size_t d, double nu, double tau) {
  return std::make_unique<MvtGaussModel>(d, nu, tau);
}

std::unique_ptr<TargetModel> constant_model(double log_c) {
  return std::make_unique<ConstantModel>(log_c);
}

std::unique_ptr<TargetModel> make_model(std::string_view id) {
  if (id == "beta33") return beta_integrand_model();
  if (id == "expratio") return exp_ratio_model();
  if (id == "gaussgauss") return gauss_gauss_model();
  if (id == "mvt") return mvt_gauss_model();
  if (id == "constant") return constant_model(std::log(0.5));
  throw ConfigError("unknown model id '" + std::string(id) + "'");
}

std::vector<std::string> model_ids() { return {"beta33", "expratio", "gaussgauss", "mvt", "constant"}; }

}  // namespace evidenza
