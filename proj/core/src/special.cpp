#include "evidenza/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "evidenza/error.hpp"

namespace evidenza {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Acklam's rational approximation, |relative error| < 1.2e-9 before refinement.
double acklam_lower_half(double p) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

LogValue operator+(LogValue a, LogValue b) {
  const double hi = std::max(a.log_magnitude, b.log_magnitude);
  const double lo = std::min(a.log_magnitude, b.log_magnitude);
  if (hi == -kInf || hi == kInf) return {hi};
  return {hi + std::log1p(std::exp(lo - hi))};
}

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double std_normal_sf(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double std_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("std_normal_quantile: p must lie in (0,1)");
  if (p > 0.5) return -std_normal_quantile(1.0 - p);  // 1 - p is exact here
  if (p == 0.5) return 0.0;

  double x = acklam_lower_half(p);
  // Two Halley steps against the erfc-based CDF.
  const double sqrt2pi = std::sqrt(2.0 * std::numbers::pi);
  for (int i = 0; i < 2; ++i) {
    const double e = std_normal_cdf(x) - p;
    const double u = e * sqrt2pi * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
  }
  return x;
}

double exp_integral_e1(double x) {
  if (!(x > 0.0)) throw DomainError("exp_integral_e1: x must be positive");
  if (std::isinf(x)) return 0.0;
  constexpr double eps = 1e-16;
  constexpr int max_iter = 500;

  if (x <= 1.0) {
    // E1(x) = -gamma - ln x - sum_{k>=1} (-x)^k / (k k!)
    double sum = 0.0;
    double term = 1.0;
    for (int k = 1; k <= max_iter; ++k) {
      term *= -x / k;
      const double contrib = term / k;
      sum += contrib;
      if (std::abs(contrib) < eps * std::abs(sum)) break;
    }
    return -std::numbers::egamma - std::log(x) - sum;
  }

  // Continued fraction, modified Lentz.
  constexpr double tiny = 1e-300;
  double b = x + 1.0;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= max_iter; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const double delta = c * d;
    h *= delta;
    if (std::abs(delta - 1.0) < eps) return h * std::exp(-x);
  }
  throw ConvergenceError("exp_integral_e1: continued fraction did not converge");
}

double reg_lower_gamma(double a, double x) {
  if (!(a > 0.0)) throw DomainError("reg_lower_gamma: a must be positive");
  if (!(x >= 0.0)) throw DomainError("reg_lower_gamma: x must be nonnegative");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  return boost::math::gamma_p(a, x);
}

double reg_lower_gamma_inv(double a, double p) {
  if (!(a > 0.0)) throw DomainError("reg_lower_gamma_inv: a must be positive");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("reg_lower_gamma_inv: p must lie in [0,1]");
  if (p == 0.0) return 0.0;
  if (p == 1.0) return kInf;
  return boost::math::gamma_p_inv(a, p);
}

LogValue kummer_u(double a, double b, double s) {
  if (!(a > 0.0)) throw DomainError("kummer_u: a must be positive");
  if (!(s > 0.0)) throw DomainError("kummer_u: s must be positive");
  if (!std::isfinite(b)) throw DomainError("kummer_u: b must be finite");

  // log of the integrand e^{-st} t^{a-1} (1+t)^{b-a-1}
  auto log_integrand = [=](double t) {
    return -s * t + (a - 1.0) * std::log(t) + (b - a - 1.0) * std::log1p(t);
  };
  // Stationary point: s t^2 + (s - b + 2) t - (a - 1) = 0.
  const double lin = s - b + 2.0;
  const double disc = lin * lin + 4.0 * s * (a - 1.0);
  double scale = 1.0 / s;
  if (a > 1.0 && disc >= 0.0) {
    const double root = (-lin + std::sqrt(disc)) / (2.0 * s);
    if (root > 0.0) scale = root;
  }
  const double shift = log_integrand(scale);

  // Substitute t = scale * v so the mass sits near v = 1, split there.
  auto f = [&](double v) {
    if (v <= 0.0) return 0.0;
    const double t = scale * v;
    return std::exp(log_integrand(t) - shift);
  };

  constexpr double tol = 1e-12;
  double err_lo = 0.0;
  double err_hi = 0.0;
  boost::math::quadrature::tanh_sinh<double> inner;
  boost::math::quadrature::exp_sinh<double> outer;
  const double lo = inner.integrate(f, 0.0, 1.0, tol, &err_lo);
  const double hi = outer.integrate(f, 1.0, kInf, tol, &err_hi);
  const double total = lo + hi;
  if (!(total > 0.0) || !std::isfinite(total) || (err_lo + err_hi) > 1e-9 * total) {
    throw ConvergenceError("kummer_u: quadrature did not converge");
  }
  return {shift + std::log(scale) + std::log(total) - std::lgamma(a)};
}

double log_sum_exp(std::span<const double> log_values) {
  if (log_values.empty()) return -kInf;
  const double m = *std::max_element(log_values.begin(), log_values.end());
  if (m == -kInf || m == kInf || std::isnan(m)) return m;
  double sum = 0.0;
  for (double v : log_values) sum += std::exp(v - m);
  return m + std::log(sum);
}

LogValue log_sum_exp(std::span<const LogValue> values) {
  std::vector<double> raw(values.size());
  std::transform(values.begin(), values.end(), raw.begin(),
                 [](LogValue v) { return v.log_magnitude; });
  return {log_sum_exp(raw)};
}

LogValue log_trapezoid(std::span<const double> widths, std::span<const double> log_left,
                       std::span<const double> log_right) {
  if (widths.empty()) throw DomainError("log_trapezoid: empty input");
  if (widths.size() != log_left.size() || widths.size() != log_right.size()) {
    throw DomainError("log_trapezoid: widths and heights differ in length");
  }
  std::vector<double> terms;
  terms.reserve(2 * widths.size());
  for (std::size_t i = 0; i < widths.size(); ++i) {
    if (widths[i] < 0.0) throw DomainError("log_trapezoid: negative width");
    const double lw = std::log(widths[i]);
    terms.push_back(lw + log_left[i]);
    terms.push_back(lw + log_right[i]);
  }
  return {log_sum_exp(terms) - std::numbers::ln2};
}

}  // namespace evidenza
